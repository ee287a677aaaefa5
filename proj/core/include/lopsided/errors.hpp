/*
 * Copyright 2026 The Lopsided Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOPSIDED_ERRORS_HPP_
#define LOPSIDED_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lopsided {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: form text, JSON, configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public InputError {
 public:
  using InputError::InputError;
};

class InhomogeneousError : public InputError {
 public:
  using InputError::InputError;
};

class ZeroFormError : public InputError {
 public:
  using InputError::InputError;
};

// A formula hit a vanishing denominator or a degenerate basis.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Hypotheses of a bound or construction are not met.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// A desk-scale size guard was exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace lopsided

#endif  // LOPSIDED_ERRORS_HPP_
