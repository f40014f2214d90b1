// include/alta/errors.h

// Copyright 2026  ALTA Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef ALTA_ERRORS_H_
#define ALTA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace alta {

// Base class for all recoverable errors raised by the toolkit. The CLI maps
// these onto exit codes; library users can catch subtypes individually.
class AltaError : public std::runtime_error {
 public:
  explicit AltaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input / validation failures (CLI exit code 3).
class InputError : public AltaError {
 public:
  using AltaError::AltaError;
};

class MalformedWav : public InputError {
 public:
  using InputError::InputError;
};

class UnsupportedFormat : public InputError {
 public:
  using InputError::InputError;
};

class EmptyAudio : public InputError {
 public:
  using InputError::InputError;
};

class UnsortedInput : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, int line) : InputError(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  int line_number;
};

class EmptyLyrics : public InputError {
 public:
  using InputError::InputError;
};

class UnknownWord : public InputError {
 public:
  using InputError::InputError;
};

class MissingPronunciation : public InputError {
 public:
  using InputError::InputError;
};

class EmptyReference : public InputError {
 public:
  using InputError::InputError;
};

class IndexMismatch : public InputError {
 public:
  using InputError::InputError;
};

// Decode failures (CLI exit code 2).
class NoPath : public AltaError {
 public:
  using AltaError::AltaError;
};

class NoAnchors : public AltaError {
 public:
  using AltaError::AltaError;
};

}  // namespace alta

#endif  // ALTA_ERRORS_H_
