#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qpww/lattice.hpp"

namespace qpww {

using cplx = std::complex<double>;

/// Truncated Fourier series on the torus T^d,
///   u(alpha) = sum_{j in box} u_j exp(i <j, alpha>),
/// the parent of the quasiperiodic function u(k x) on the line.
class QPFunction {
 public:
  QPFunction() = default;
  explicit QPFunction(LatticePtr lattice);
  QPFunction(LatticePtr lattice, std::vector<cplx> coeffs);

  static QPFunction constant(LatticePtr lattice, cplx value);
  /// amplitude * exp(i <j, alpha>); j must lie in the box.
  static QPFunction mode(LatticePtr lattice, std::span<const int> j, cplx amplitude);
  static QPFunction mode(LatticePtr lattice, std::initializer_list<int> j, cplx amplitude) {
    return mode(std::move(lattice), std::span<const int>(j.begin(), j.size()), amplitude);
  }

  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  bool empty() const noexcept { return !lattice_; }

  std::span<cplx> coeffs() noexcept { return coeffs_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  cplx& operator[](std::size_t flat) noexcept { return coeffs_[flat]; }
  cplx operator[](std::size_t flat) const noexcept { return coeffs_[flat]; }
  cplx at(std::span<const int> j) const;
  cplx at(std::initializer_list<int> j) const { return at(std::span<const int>(j.begin(), j.size())); }
  cplx mean() const noexcept { return coeffs_[lattice_->zero_index()]; }

  /// u_{-j} == conj(u_j) within tol (absolute, scaled by max |u_j|).
  bool is_real(double tol = 1e-13) const;
  /// u_j == 0 whenever xi(j) > 0 (and u_0 == 0 when zero_mean).
  bool is_holomorphic(double tol = 1e-13, bool zero_mean = false) const;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  QPFunction& operator+=(const QPFunction& o);
  QPFunction& operator-=(const QPFunction& o);
  QPFunction& operator*=(cplx s);
  /// this += s * o
  QPFunction& axpy(cplx s, const QPFunction& o);

  friend QPFunction operator+(QPFunction a, const QPFunction& b) { return a += b; }
  friend QPFunction operator-(QPFunction a, const QPFunction& b) { return a -= b; }
  friend QPFunction operator*(QPFunction a, cplx s) { return a *= s; }
  friend QPFunction operator*(cplx s, QPFunction a) { return a *= s; }
  friend QPFunction operator*(QPFunction a, double s) { return a *= cplx(s); }
  friend QPFunction operator*(double s, QPFunction a) { return a *= cplx(s); }
  friend QPFunction operator-(QPFunction a) { return a *= cplx(-1.0); }
  friend bool operator==(const QPFunction& a, const QPFunction& b);

 private:
  void require_same(const QPFunction& o) const;
  LatticePtr lattice_;
  std::vector<cplx> coeffs_;
};

/// Copies the modes of u that exist on the target lattice (zero padding when
/// the target box is larger, truncation when smaller). Both lattices must
/// share d and k.
QPFunction resample(const QPFunction& u, LatticePtr target);

/// Largest coefficient-wise |a_j - b_j|.
double max_coeff_diff(const QPFunction& a, const QPFunction& b);

/// Samples of a QPFunction on the equispaced grid (2 pi n / M)^d.
class Grid {
 public:
  Grid() = default;
  Grid(LatticePtr lattice, int resolution);
  Grid(LatticePtr lattice, int resolution, std::vector<cplx> values);

  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  int resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx& operator[](std::size_t n) noexcept { return values_[n]; }
  cplx operator[](std::size_t n) const noexcept { return values_[n]; }

  Grid& operator+=(const Grid& o);
  Grid& operator-=(const Grid& o);
  Grid& operator*=(const Grid& o);
  Grid& operator*=(cplx s);
  friend Grid operator+(Grid a, const Grid& b) { return a += b; }
  friend Grid operator-(Grid a, const Grid& b) { return a -= b; }
  friend Grid operator*(Grid a, const Grid& b) { return a *= b; }
  friend Grid operator*(Grid a, cplx s) { return a *= s; }
  friend Grid operator*(cplx s, Grid a) { return a *= s; }
  friend Grid operator+(Grid a, cplx s) {
    for (auto& v : a.values_) v += s;
    return a;
  }
  friend Grid operator+(cplx s, Grid a) { return std::move(a) + s; }
  friend Grid operator-(cplx s, Grid a) {
    for (auto& v : a.values_) v = s - v;
    return a;
  }

  Grid conj() const;
  Grid real() const;
  double max_abs() const noexcept;
  double min_abs() const noexcept;
  double min_real() const noexcept;

 private:
  LatticePtr lattice_;
  int resolution_ = 0;
  std::vector<cplx> values_;
};

/// Synthesis on the grid of the given resolution (>= 2N+1; default padded).
Grid to_grid(const QPFunction& u, int resolution = 0);
/// Discrete Fourier analysis; modes outside the box are discarded.
QPFunction to_coeffs(const Grid& g);

}  // namespace qpww
