#include "qpww/random_fields.hpp"

#include <cmath>

namespace qpww {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_index(std::uint64_t seed, const Lattice& lat, std::size_t f) {
  std::uint64_t h = splitmix64(seed);
  for (int i = 0; i < lat.dim(); ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(lat.component(f, i) + (1 << 20)));
  return h;
}

double phase(std::uint64_t h) { return 2.0 * M_PI * static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
}

double uniform01(std::uint64_t seed) { return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53; }

QPFunction random_function(const LatticePtr& lattice, double decay, std::uint64_t seed, FieldClass cls) {
  const Lattice& lat = *lattice;
  QPFunction u(lattice);
  for (std::size_t f = 0; f < lat.size(); ++f) {
    const double xi = lat.xi(f);
    if (cls == FieldClass::holomorphic && !(xi < 0.0)) continue;
    const double amp = std::pow(1.0 + lat.index_norm2(f), -0.5 * decay);
    if (cls == FieldClass::real) {
      if (f > lat.zero_index()) continue;
      const double th = phase(hash_index(seed, lat, f));
      if (f == lat.zero_index()) {
        u[f] = amp * std::cos(th);
      } else {
        u[f] = std::polar(amp, th);
        u[lat.mirror(f)] = std::polar(amp, -th);
      }
      continue;
    }
    u[f] = std::polar(amp, phase(hash_index(seed, lat, f)));
  }
  return u;
}

DiffState random_diff_state(const LatticePtr& lattice, double decay, double sobolev, double target_A,
                            std::uint64_t seed) {
  DiffState s{random_function(lattice, decay, seed, FieldClass::holomorphic),
              random_function(lattice, decay, splitmix64(seed ^ 0x5bd1e995ULL), FieldClass::holomorphic)};
  s.R = derivative_alpha(s.R, Weight::bracket_alpha, -0.5);
  const double a = pair_norm(s, sobolev - 0.5);
  if (a > 0.0) s = (target_A / a) * s;
  return s;
}

LinState random_lin_state(const LatticePtr& lattice, double decay, std::uint64_t seed) {
  LinState s{random_function(lattice, decay, seed, FieldClass::holomorphic),
             random_function(lattice, decay, splitmix64(seed ^ 0x27d4eb2fULL), FieldClass::holomorphic)};
  s.r = derivative_alpha(s.r, Weight::bracket_alpha, -0.5);
  const double n = pair_norm(s, 0.0);
  if (n > 0.0) s = (1.0 / n) * s;
  return s;
}

}  // namespace qpww
