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

#include <stdexcept>
#include <string>

namespace prophet {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invariant-violating input (instance files, parameters).
class InputError : public Error {
 public:
  using Error::Error;
};

// An exponential enumeration was requested above its size guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

// A numerical routine failed in a way valid input cannot trigger.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace prophet
