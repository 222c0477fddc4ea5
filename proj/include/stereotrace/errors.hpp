// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stereotrace {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FileNotFound : public Error {
 public:
  explicit FileNotFound(std::string path) : Error("file not found: " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string entity, const std::string& reason)
      : Error(entity + ": " + reason), entity_(std::move(entity)) {}
  const std::string& entity() const { return entity_; }

 private:
  std::string entity_;
};

class UnsupportedCount : public Error {
 public:
  explicit UnsupportedCount(int count)
      : Error("unsupported paper scene object count " + std::to_string(count) + " (expected 1, 2, 3, 5 or 6)") {}
};

class AccelMismatch : public Error {
 public:
  AccelMismatch() : Error("acceleration structure was built for a different scene") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroTotal : public Error {
 public:
  ZeroTotal() : Error("stage timings have zero total") {}
};

class WriteError : public Error {
 public:
  explicit WriteError(const std::string& path) : Error("cannot write " + path) {}
};

}  // namespace stereotrace
