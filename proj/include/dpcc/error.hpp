// Copyright 2026 The dpcc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dpcc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Encryption parameters violate a structural invariant.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// More values than slots, or a coefficient too large for the modulus.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Operands of an additive op differ in level or scale.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// No rescale level left for a multiplication or rescale.
class DepthExhaustedError : public Error {
 public:
  using Error::Error;
};

class MissingRotationKeyError : public Error {
 public:
  explicit MissingRotationKeyError(int step)
      : Error("missing rotation key for step " + std::to_string(step)), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Matrix/vector dimensions do not conform.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class DataUnderflowError : public Error {
 public:
  DataUnderflowError(std::size_t required, std::size_t available)
      : Error("insufficient data: need " + std::to_string(required) + " samples, have " +
              std::to_string(available)),
        required_(required),
        available_(available) {}
  std::size_t required() const noexcept { return required_; }
  std::size_t available() const noexcept { return available_; }

 private:
  std::size_t required_;
  std::size_t available_;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value reached the plant.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpcc
