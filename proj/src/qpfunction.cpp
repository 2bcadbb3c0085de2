#include "qpww/qpfunction.hpp"

#include <algorithm>
#include <cmath>

#include "fft.hpp"
#include "qpww/errors.hpp"

namespace qpww {

QPFunction::QPFunction(LatticePtr lattice) : lattice_(std::move(lattice)), coeffs_(lattice_->size()) {}

QPFunction::QPFunction(LatticePtr lattice, std::vector<cplx> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != lattice_->size()) throw Error("coefficient array does not match lattice size");
}

QPFunction QPFunction::constant(LatticePtr lattice, cplx value) {
  QPFunction u(std::move(lattice));
  u.coeffs_[u.lattice_->zero_index()] = value;
  return u;
}

QPFunction QPFunction::mode(LatticePtr lattice, std::span<const int> j, cplx amplitude) {
  QPFunction u(std::move(lattice));
  const std::size_t f = u.lattice_->flat(j);
  if (f >= u.coeffs_.size()) throw Error("mode " + format_index({j.begin(), j.end()}) + " outside truncation box");
  u.coeffs_[f] = amplitude;
  return u;
}

cplx QPFunction::at(std::span<const int> j) const {
  const std::size_t f = lattice_->flat(j);
  return f < coeffs_.size() ? coeffs_[f] : cplx{};
}

double QPFunction::max_abs() const noexcept {
  double m = 0.0;
  for (auto c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool QPFunction::all_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

bool QPFunction::is_real(double tol) const {
  const double scale = std::max(1.0, max_abs());
  for (std::size_t f = 0; f < coeffs_.size(); ++f)
    if (std::abs(coeffs_[f] - std::conj(coeffs_[lattice_->mirror(f)])) > tol * scale) return false;
  return true;
}

bool QPFunction::is_holomorphic(double tol, bool zero_mean) const {
  const double scale = std::max(1.0, max_abs());
  for (std::size_t f = 0; f < coeffs_.size(); ++f)
    if (lattice_->xi(f) > 0.0 && std::abs(coeffs_[f]) > tol * scale) return false;
  return !zero_mean || std::abs(mean()) <= tol * scale;
}

void QPFunction::require_same(const QPFunction& o) const {
  if (!lattice_ || !o.lattice_ || !lattice_->same_as(*o.lattice_))
    throw Error("QPFunction operands live on different lattices");
}

QPFunction& QPFunction::operator+=(const QPFunction& o) {
  require_same(o);
  for (std::size_t f = 0; f < coeffs_.size(); ++f) coeffs_[f] += o.coeffs_[f];
  return *this;
}

QPFunction& QPFunction::operator-=(const QPFunction& o) {
  require_same(o);
  for (std::size_t f = 0; f < coeffs_.size(); ++f) coeffs_[f] -= o.coeffs_[f];
  return *this;
}

QPFunction& QPFunction::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

QPFunction& QPFunction::axpy(cplx s, const QPFunction& o) {
  require_same(o);
  for (std::size_t f = 0; f < coeffs_.size(); ++f) coeffs_[f] += s * o.coeffs_[f];
  return *this;
}

bool operator==(const QPFunction& a, const QPFunction& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return a.lattice_->same_as(*b.lattice_) && a.coeffs_ == b.coeffs_;
}

double max_coeff_diff(const QPFunction& a, const QPFunction& b) {
  double m = 0.0;
  for (std::size_t f = 0; f < a.coeffs().size(); ++f) m = std::max(m, std::abs(a[f] - b[f]));
  return m;
}

QPFunction resample(const QPFunction& u, LatticePtr target) {
  const Lattice& src = u.lattice();
  if (src.dim() != target->dim()) throw Error("resample: dimension mismatch");
  for (int i = 0; i < src.dim(); ++i)
    if (src.k()[i] != target->k()[i]) throw Error("resample: base frequencies differ");
  QPFunction out(target);
  for (std::size_t f = 0; f < src.size(); ++f) {
    const std::vector<int> j = src.index(f);
    const std::size_t g = target->flat(j);
    if (g < target->size()) out[g] = u[f];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t grid_points(int dim, int m) {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(m);
  return n;
}

// Grid offset of lattice mode f when the grid has resolution m.
std::size_t grid_offset(const Lattice& lat, std::size_t f, int m) {
  std::size_t g = 0;
  for (int i = 0; i < lat.dim(); ++i) {
    int j = lat.component(f, i);
    if (j < 0) j += m;
    g = g * static_cast<std::size_t>(m) + static_cast<std::size_t>(j);
  }
  return g;
}

}  // namespace

Grid::Grid(LatticePtr lattice, int resolution)
    : lattice_(std::move(lattice)), resolution_(resolution), values_(grid_points(lattice_->dim(), resolution)) {}

Grid::Grid(LatticePtr lattice, int resolution, std::vector<cplx> values)
    : lattice_(std::move(lattice)), resolution_(resolution), values_(std::move(values)) {
  if (values_.size() != grid_points(lattice_->dim(), resolution_)) throw Error("grid size mismatch");
}

Grid& Grid::operator+=(const Grid& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += o.values_[n];
  return *this;
}
Grid& Grid::operator-=(const Grid& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= o.values_[n];
  return *this;
}
Grid& Grid::operator*=(const Grid& o) {
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] *= o.values_[n];
  return *this;
}
Grid& Grid::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Grid Grid::conj() const {
  Grid g = *this;
  for (auto& v : g.values_) v = std::conj(v);
  return g;
}

Grid Grid::real() const {
  Grid g = *this;
  for (auto& v : g.values_) v = v.real();
  return g;
}

double Grid::max_abs() const noexcept {
  double m = 0.0;
  for (auto v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Grid::min_abs() const noexcept {
  double m = INFINITY;
  for (auto v : values_) m = std::min(m, std::abs(v));
  return m;
}

double Grid::min_real() const noexcept {
  double m = INFINITY;
  for (auto v : values_) m = std::min(m, v.real());
  return m;
}

Grid to_grid(const QPFunction& u, int resolution) {
  const Lattice& lat = u.lattice();
  const int m = resolution > 0 ? resolution : lat.padded_resolution();
  if (m < lat.side()) throw Error("grid resolution must be at least 2N+1");
  Grid g(u.lattice_ptr(), m);
  auto vals = g.values();
  for (std::size_t f = 0; f < lat.size(); ++f) vals[grid_offset(lat, f, m)] = u[f];
  detail::fft_inplace(vals, lat.dim(), m, +1);
  return g;
}

QPFunction to_coeffs(const Grid& g) {
  const Lattice& lat = *g.lattice_ptr();
  const int m = g.resolution();
  std::vector<cplx> work(g.values().begin(), g.values().end());
  detail::fft_inplace(work, lat.dim(), m, -1);
  const double scale = 1.0 / static_cast<double>(work.size());
  QPFunction u(g.lattice_ptr());
  for (std::size_t f = 0; f < lat.size(); ++f) u[f] = work[grid_offset(lat, f, m)] * scale;
  return u;
}

}  // namespace qpww
