// Copyright (c) the rapeig developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace rap {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid mathematical input (zero vector, non-SPD data, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// API misuse (dimension mismatch, bad sizes, unknown option).
class UsageError : public Error {
public:
  using Error::Error;
};

/// Undefined geometric operation (antipodal points, broken tangency).
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Operation invoked on an object in the wrong state.
class StateError : public Error {
public:
  using Error::Error;
};

/// Object could not be constructed from the given inputs.
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// Matrix-level failure (factorization of an expected-SPD matrix failed).
class MatrixError : public Error {
public:
  using Error::Error;
};

/// All candidate basis vectors were numerically zero.
class DegenerateBasisError : public Error {
public:
  using Error::Error;
};

/// Closed-form accelerated coefficients requested outside their validity range.
class CoefficientError : public Error {
public:
  using Error::Error;
};

/// Numerical breakdown inside an iteration; carries the last valid Rayleigh
/// quotient and iteration index so callers can salvage the run.
class BreakdownError : public Error {
public:
  BreakdownError(const std::string& what, double last_rayleigh, int iteration)
      : Error(what), last_rayleigh_(last_rayleigh), iteration_(iteration) {}

  double last_rayleigh() const { return last_rayleigh_; }
  int iteration() const { return iteration_; }

private:
  double last_rayleigh_;
  int iteration_;
};

}  // namespace rap
