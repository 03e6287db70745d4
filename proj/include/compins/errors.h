// Copyright 2026 The Compins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COMPINS_ERRORS_H_
#define COMPINS_ERRORS_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace compins {

// Base class for all errors raised by the pipeline. CLI maps ConfigError to
// exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ResubmissionDenied : public Error {
 public:
  using Error::Error;
};

class Unmappable : public Error {
 public:
  using Error::Error;
};

class MissingAttribute : public Error {
 public:
  using Error::Error;
};

class AuthFailure : public Error {
 public:
  using Error::Error;
};

class PurposeMismatch : public Error {
 public:
  using Error::Error;
};

class KeystoreWriteError : public Error {
 public:
  using Error::Error;
};

// Thrown when a key rotation stops midway. Carries the ids that were not
// re-encrypted so the caller can resume.
class PartialRotation : public Error {
 public:
  PartialRotation(const std::string& what, std::vector<std::string> remaining)
      : Error(what), remaining_ids(std::move(remaining)) {}
  std::vector<std::string> remaining_ids;
};

class DecryptFailure : public Error {
 public:
  using Error::Error;
};

class MissingSubmission : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class NotEligible : public Error {
 public:
  using Error::Error;
};

class CohortUnavailable : public Error {
 public:
  using Error::Error;
};

class NoSimilarCohorts : public Error {
 public:
  using Error::Error;
};

class ZeroResponses : public Error {
 public:
  using Error::Error;
};

class NoAncestorData : public Error {
 public:
  using Error::Error;
};

class JournalGap : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace compins

#endif  // COMPINS_ERRORS_H_
