// Copyright 2026 The xylosim Authors
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

#ifndef XYLOSIM_ERRORS_H_
#define XYLOSIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace xylosim {

// Base class for every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI's one-line error output.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& m) : Error("ConfigError", m) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& m) : Error("ShapeError", m) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& m) : Error("NumericalError", m) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& m) : Error("IndexError", m) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& m, int line)
      : Error("ParseError",
              line > 0 ? "line " + std::to_string(line) + ": " + m : m),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& m)
      : Error("ValidationError", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("IOError", m) {}
};

}  // namespace xylosim

#endif  // XYLOSIM_ERRORS_H_
