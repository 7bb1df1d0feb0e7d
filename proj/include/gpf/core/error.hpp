// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gpf {

/// Failure category; the CLI maps these to distinct exit codes.
enum class ErrorKind { Parse, Validation, Runtime };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message) : Error(ErrorKind::Parse, message) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error(ErrorKind::Validation, message) {}
};

/// Runtime failure, including broken caller contracts detected at run time
/// (stale neighborhoods, non-diffuse supervision points, non-finite loss).
class RuntimeError : public Error {
public:
    explicit RuntimeError(const std::string& message) : Error(ErrorKind::Runtime, message) {}
};

}  // namespace gpf
