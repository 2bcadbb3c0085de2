#pragma once

#include <cstdint>

#include "qpww/states.hpp"

namespace qpww {

/// Per-trial seed split from a master seed (splitmix64 of master ^ trial).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

enum class FieldClass {
  general,     ///< every mode
  real,        ///< u_{-j} = conj(u_j)
  holomorphic  ///< xi(j) < 0 only (zero mean)
};

/// |u_j| = <j>^{-decay} with phases hashed from (seed, j). The phase of a
/// given j does not depend on N, so the same seed gives nested data across
/// lattices with equal k.
QPFunction random_function(const LatticePtr& lattice, double decay, std::uint64_t seed,
                           FieldClass cls = FieldClass::general);

/// Holomorphic zero-mean pair with |W_j| ~ <j>^{-decay}, |R_j| ~ <j>^{-decay} <xi>^{-1/2},
/// rescaled so that A = ||(W,R)|| in H^{s-1/2} x H^{s-1/2,1/2} equals target_A.
DiffState random_diff_state(const LatticePtr& lattice, double decay, double sobolev, double target_A,
                            std::uint64_t seed);

/// Holomorphic zero-mean perturbation normalized to ||(w,r)|| = 1 in H^0 x H^{0,1/2}.
LinState random_lin_state(const LatticePtr& lattice, double decay, std::uint64_t seed);

/// Uniform double in [0, 1) from a seed (deterministic).
double uniform01(std::uint64_t seed);

}  // namespace qpww
