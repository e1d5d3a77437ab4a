// Copyright 2026 The Gridshift Authors
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file in the project root for terms.

#pragma once

#include <stdexcept>
#include <string>

namespace gridshift {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data (bad CSV row, bad timestamp, bad config key).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Structurally valid input that violates a documented invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Demand cannot be met, or a scheduling problem has no feasible point.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

/// Filesystem failures (missing file, unwritable directory).
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitIo = 3;

}  // namespace gridshift
