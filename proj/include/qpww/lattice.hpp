#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qpww {

/// Truncated frequency lattice {j in Z^d : |j_i| <= N} together with the
/// directional frequencies xi(j) = <j,k>.
///
/// Coefficients are stored flat, last dimension fastest. The box is symmetric
/// so the flat index of -j is size() - 1 - flat(j), and the zero mode sits at
/// size() / 2.
class Lattice {
 public:
  int dim() const noexcept { return static_cast<int>(k_.size()); }
  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t size() const noexcept { return xi_.size(); }
  std::span<const double> k() const noexcept { return k_; }
  double tolerance() const noexcept { return tol_; }
  double delta_min() const noexcept { return delta_min_; }
  /// Largest |xi| over the box.
  double xi_max() const noexcept { return xi_max_; }

  std::size_t zero_index() const noexcept { return size() / 2; }
  std::size_t mirror(std::size_t flat) const noexcept { return size() - 1 - flat; }

  double xi(std::size_t flat) const noexcept { return xi_[flat]; }
  std::span<const double> xi() const noexcept { return xi_; }
  /// Euclidean |j|^2.
  double index_norm2(std::size_t flat) const noexcept { return norm2_[flat]; }
  /// Component j_axis of the lattice index stored at flat.
  int component(std::size_t flat, int axis) const noexcept;
  std::vector<int> index(std::size_t flat) const;
  /// Flat index of j, or size() if j lies outside the box.
  std::size_t flat(std::span<const int> j) const noexcept;
  bool contains(std::span<const int> j) const noexcept;

  /// Collocation resolution per dimension used for dealiased products:
  /// the smallest 2^a 3^b 5^c 7^e that is at least 2(2N+1).
  int padded_resolution() const noexcept { return padded_; }

  bool same_as(const Lattice& other) const noexcept;

 private:
  friend std::shared_ptr<const Lattice> validate_lattice(std::span<const double>, int, double);
  Lattice(std::vector<double> k, int radius, double tol);

  std::vector<double> k_;
  int radius_;
  double tol_;
  double delta_min_ = 0.0;
  double xi_max_ = 0.0;
  int padded_ = 0;
  std::vector<std::size_t> strides_;
  std::vector<double> xi_;
  std::vector<double> norm2_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// Builds the lattice and scans the whole box for near-resonances.
/// Throws RationalDependence naming the offending index (sign normalized so
/// its first nonzero component is positive) when some j != 0 has
/// |<j,k>| <= tol.
LatticePtr validate_lattice(std::span<const double> k, int radius, double tol = 1e-12);
inline LatticePtr validate_lattice(std::initializer_list<double> k, int radius, double tol = 1e-12) {
  return validate_lattice(std::span<const double>(k.begin(), k.size()), radius, tol);
}

/// Smallest integer >= n whose only prime factors are 2, 3, 5, 7.
int fft_friendly_size(int n);

/// Default two-frequency basis (1, golden ratio).
std::vector<double> golden_frequencies();
/// (1), (1, golden), then square roots of successive primes.
std::vector<double> default_frequencies(int dim);

}  // namespace qpww
