// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace prophet {

// Dense bitset over a ground set {0, ..., size-1}. Used for agent sets
// (scalar setting) and item sets (XOS setting).
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(int size)
      : size_(size), words_((static_cast<std::size_t>(size) + 63) / 64, 0) {}
  ElementSet(int size, std::initializer_list<int> members) : ElementSet(size) {
    for (int e : members) insert(e);
  }

  static ElementSet full(int size) {
    ElementSet s(size);
    for (int e = 0; e < size; ++e) s.insert(e);
    return s;
  }

  static ElementSet from_members(int size, const std::vector<int>& members) {
    ElementSet s(size);
    for (int e : members) s.insert(e);
    return s;
  }

  int size() const { return size_; }

  bool contains(int e) const {
    return (words_[static_cast<std::size_t>(e) >> 6] >> (e & 63)) & 1U;
  }
  void insert(int e) {
    words_[static_cast<std::size_t>(e) >> 6] |= std::uint64_t{1} << (e & 63);
  }
  void erase(int e) {
    words_[static_cast<std::size_t>(e) >> 6] &= ~(std::uint64_t{1} << (e & 63));
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  ElementSet with(int e) const {
    ElementSet s = *this;
    s.insert(e);
    return s;
  }

  ElementSet& operator|=(const ElementSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  ElementSet& operator&=(const ElementSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }

  bool is_subset_of(const ElementSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

  // Members in increasing order.
  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(static_cast<int>(i * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  // Low 64 bits; exact for ground sets of size <= 64.
  std::uint64_t low_word() const { return words_.empty() ? 0 : words_[0]; }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(size_);
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  // 1-based rendering, e.g. "{1,3}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int e : members()) {
      if (!first) s += ",";
      s += std::to_string(e + 1);
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  int size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace prophet
