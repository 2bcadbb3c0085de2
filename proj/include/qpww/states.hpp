#pragma once

#include <cmath>
#include <utility>

#include "qpww/qpfunction.hpp"
#include "qpww/spectral.hpp"

namespace qpww {

/// Differentiated unknowns: W = W_alpha (surface slope) and R = Q_alpha / (1 + W_alpha).
/// Both holomorphic with zero mean.
struct DiffState {
  QPFunction W;
  QPFunction R;
};

/// Undifferentiated unknowns: W = Z - alpha and the holomorphic potential Q.
struct SurfaceState {
  QPFunction W;
  QPFunction Q;
};

/// Linearized unknowns (w, r) around a DiffState.
struct LinState {
  QPFunction w;
  QPFunction r;
};

template <class S>
struct PairTraits;

template <>
struct PairTraits<DiffState> {
  static constexpr auto first = &DiffState::W;
  static constexpr auto second = &DiffState::R;
};
template <>
struct PairTraits<SurfaceState> {
  static constexpr auto first = &SurfaceState::W;
  static constexpr auto second = &SurfaceState::Q;
};
template <>
struct PairTraits<LinState> {
  static constexpr auto first = &LinState::w;
  static constexpr auto second = &LinState::r;
};

template <class S>
concept FieldPair = requires { PairTraits<S>::first; };

template <FieldPair S>
QPFunction& first(S& s) { return s.*PairTraits<S>::first; }
template <FieldPair S>
const QPFunction& first(const S& s) { return s.*PairTraits<S>::first; }
template <FieldPair S>
QPFunction& second(S& s) { return s.*PairTraits<S>::second; }
template <FieldPair S>
const QPFunction& second(const S& s) { return s.*PairTraits<S>::second; }

template <FieldPair S>
S& operator+=(S& a, const S& b) {
  first(a) += first(b);
  second(a) += second(b);
  return a;
}
template <FieldPair S>
S& operator-=(S& a, const S& b) {
  first(a) -= first(b);
  second(a) -= second(b);
  return a;
}
template <FieldPair S>
S operator+(S a, const S& b) { return a += b; }
template <FieldPair S>
S operator-(S a, const S& b) { return a -= b; }
template <FieldPair S>
S operator*(double s, S a) {
  first(a) *= cplx(s);
  second(a) *= cplx(s);
  return a;
}
/// a += s * b
template <FieldPair S>
S& axpy(S& a, double s, const S& b) {
  first(a).axpy(s, first(b));
  second(a).axpy(s, second(b));
  return a;
}

template <FieldPair S>
S zero_like(const S& s) {
  S z;
  first(z) = QPFunction(first(s).lattice_ptr());
  second(z) = QPFunction(second(s).lattice_ptr());
  return z;
}

template <FieldPair S>
S make_zero(LatticePtr lattice) {
  S z;
  first(z) = QPFunction(lattice);
  second(z) = QPFunction(std::move(lattice));
  return z;
}

template <FieldPair S>
bool all_finite(const S& s) { return first(s).all_finite() && second(s).all_finite(); }

/// The H^s x H^{s,1/2} norm of a pair (first component plain, second with
/// half an alpha derivative).
template <FieldPair S>
double pair_norm(const S& s, double sobolev) {
  const double a = norm(first(s), sobolev, 0.0);
  const double b = norm(second(s), sobolev, 0.5);
  return std::sqrt(a * a + b * b);
}

}  // namespace qpww
