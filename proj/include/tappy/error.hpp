/*
 * Copyright (C) 2026 The Tappy Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tappy {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of a model or conversion function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A requested success rate cannot be reached by any target size.
class UnattainableRateError : public Error {
 public:
  UnattainableRateError(const std::string& what, double ceiling)
      : Error(what), ceiling_(ceiling) {}

  // Supremum of the success rate for the query that failed.
  double ceiling() const noexcept { return ceiling_; }

 private:
  double ceiling_;
};

// Malformed input text. line() is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a schema or invariant. path() is a
// JSON-pointer style location such as "/root/children/2".
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string path)
      : Error(what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Bad option combination or argument from a caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

class UnknownDeviceError : public Error {
 public:
  UnknownDeviceError(const std::string& id, std::vector<std::string> known);

  const std::string& id() const noexcept { return id_; }
  const std::vector<std::string>& known_ids() const noexcept { return known_; }

 private:
  std::string id_;
  std::vector<std::string> known_;
};

}  // namespace tappy
