// Copyright 2026 The gmmee-soc Authors
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
#include <vector>

namespace gmmee {

// Root of every exception thrown by the library. The harness maps the
// subclasses onto CLI exit codes (config = 2, data = 3, numeric = 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric failures.
class NumericError : public Error {
 public:
  using Error::Error;
};
class NotPositiveDefinite : public NumericError {
 public:
  using NumericError::NumericError;
};
class RankDeficient : public NumericError {
 public:
  using NumericError::NumericError;
};
class NonFinite : public NumericError {
 public:
  using NumericError::NumericError;
};
class IllConditioned : public NumericError {
 public:
  using NumericError::NumericError;
};
class NumericBreakdown : public NumericError {
 public:
  using NumericError::NumericError;
};

// Caller supplied an argument outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};
class EmptyInput : public DomainError {
 public:
  using DomainError::DomainError;
};

// Configuration problems (bad JSON, unknown keys, invalid values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dataset ingestion problems.
class DataError : public Error {
 public:
  using Error::Error;
};
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : DataError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};
class SchemaError : public DataError {
 public:
  using DataError::DataError;
};
class JitterError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Raised by the optimizer when the user fitness callable throws.
class FitnessFailure : public Error {
 public:
  FitnessFailure(const std::string& what, std::vector<double> position)
      : Error(what), position_(std::move(position)) {}
  const std::vector<double>& position() const noexcept { return position_; }

 private:
  std::vector<double> position_;
};

}  // namespace gmmee
