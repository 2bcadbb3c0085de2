#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qpww {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonzero lattice index j in the truncation box has |<j,k>| <= tol.
class RationalDependence : public Error {
 public:
  RationalDependence(std::vector<int> index, double value);
  const std::vector<int>& index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::vector<int> index_;
  double value_;
};

/// min |1 + W| (or J) on the collocation grid fell below the chord threshold.
class SurfaceDegenerate : public Error {
 public:
  SurfaceDegenerate(double min_value, double threshold);
  double min_value() const noexcept { return min_value_; }

 private:
  double min_value_;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class FormatVersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptSnapshot : public Error {
 public:
  using Error::Error;
};

std::string format_index(const std::vector<int>& j);

}  // namespace qpww
