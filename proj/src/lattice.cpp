#include "qpww/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpww/errors.hpp"

namespace qpww {

RationalDependence::RationalDependence(std::vector<int> index, double value)
    : Error("rational dependence within truncation box at j=" + format_index(index) +
            " (|<j,k>| = " + std::to_string(value) + ")"),
      index_(std::move(index)),
      value_(value) {}

SurfaceDegenerate::SurfaceDegenerate(double min_value, double threshold)
    : Error("surface degenerate: min |1+W| = " + std::to_string(min_value) +
            " <= " + std::to_string(threshold)),
      min_value_(min_value) {}

std::string format_index(const std::vector<int>& j) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (i) os << ',';
    os << j[i];
  }
  os << ')';
  return os.str();
}

int fft_friendly_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

std::vector<double> golden_frequencies() { return {1.0, 0.5 * (1.0 + std::sqrt(5.0))}; }

std::vector<double> default_frequencies(int dim) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  std::vector<double> k = golden_frequencies();
  k.resize(std::min(dim, 2));
  for (int i = 2; i < dim; ++i) k.push_back(std::sqrt(static_cast<double>(primes[(i - 2) % 10])));
  return k;
}

Lattice::Lattice(std::vector<double> k, int radius, double tol)
    : k_(std::move(k)), radius_(radius), tol_(tol) {
  const int d = dim();
  const std::size_t s = static_cast<std::size_t>(side());
  strides_.assign(d, 1);
  for (int i = d - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * s;
  std::size_t total = strides_[0] * s;
  xi_.assign(total, 0.0);
  norm2_.assign(total, 0.0);
  // Fill the lower half and mirror, so xi(-j) == -xi(j) bit for bit.
  for (std::size_t f = 0; f < total / 2; ++f) {
    double x = 0.0, n2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const int j = component(f, i);
      x += j * k_[i];
      n2 += static_cast<double>(j) * j;
    }
    xi_[f] = x;
    xi_[total - 1 - f] = -x;
    norm2_[f] = n2;
    norm2_[total - 1 - f] = n2;
  }
  padded_ = fft_friendly_size(2 * side());
}

int Lattice::component(std::size_t flat, int axis) const noexcept {
  return static_cast<int>((flat / strides_[axis]) % static_cast<std::size_t>(side())) - radius_;
}

std::vector<int> Lattice::index(std::size_t flat) const {
  std::vector<int> j(dim());
  for (int i = 0; i < dim(); ++i) j[i] = component(flat, i);
  return j;
}

bool Lattice::contains(std::span<const int> j) const noexcept {
  if (static_cast<int>(j.size()) != dim()) return false;
  return std::all_of(j.begin(), j.end(), [&](int v) { return std::abs(v) <= radius_; });
}

std::size_t Lattice::flat(std::span<const int> j) const noexcept {
  if (!contains(j)) return size();
  std::size_t f = 0;
  for (int i = 0; i < dim(); ++i) f += static_cast<std::size_t>(j[i] + radius_) * strides_[i];
  return f;
}

bool Lattice::same_as(const Lattice& other) const noexcept {
  return this == &other || (radius_ == other.radius_ && k_ == other.k_);
}

LatticePtr validate_lattice(std::span<const double> k, int radius, double tol) {
  if (k.empty()) throw ValidationError("lattice needs at least one base frequency");
  if (radius < 1) throw ValidationError("truncation radius N must be >= 1");
  for (double v : k)
    if (v == 0.0 || !std::isfinite(v)) throw ValidationError("base frequencies must be finite and nonzero");

  std::shared_ptr<Lattice> lat(new Lattice(std::vector<double>(k.begin(), k.end()), radius, tol));
  double dmin = INFINITY, xmax = 0.0;
  const std::size_t half = lat->size() / 2;
  for (std::size_t f = 0; f < half; ++f) {
    const double a = std::abs(lat->xi_[f]);
    xmax = std::max(xmax, a);
    if (a <= tol) {
      std::vector<int> j = lat->index(f);
      auto first = std::find_if(j.begin(), j.end(), [](int v) { return v != 0; });
      if (first != j.end() && *first < 0)
        for (int& v : j) v = -v;
      int g = 0;
      for (int v : j) g = std::gcd(g, v);
      for (int& v : j) v /= g;
      throw RationalDependence(std::move(j), a / g);
    }
    dmin = std::min(dmin, a);
  }
  lat->delta_min_ = dmin;
  lat->xi_max_ = xmax;
  return lat;
}

}  // namespace qpww
