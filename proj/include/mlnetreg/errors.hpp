#pragma once

#include <stdexcept>
#include <string>

namespace mlnetreg {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, dimensions, degenerate data).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed (non-convergence, rank deficiency, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class EmptyMatrix : public DataError {
 public:
  using DataError::DataError;
};

class AsymmetricInput : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class IndexOutOfRange : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCommunity : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateRange : public DataError {
 public:
  using DataError::DataError;
};

class ZeroVariance : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientData : public DataError {
 public:
  using DataError::DataError;
};

class NoCovariatesSurvive : public DataError {
 public:
  using DataError::DataError;
};

class NonConvergence : public NumericError {
 public:
  using NumericError::NumericError;
};

class RankDeficient : public NumericError {
 public:
  using NumericError::NumericError;
};

class SpectralGapTooSmall : public NumericError {
 public:
  using NumericError::NumericError;
};

class NegativeEntries : public NumericError {
 public:
  using NumericError::NumericError;
};

class AllReplicationsFailed : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace mlnetreg
