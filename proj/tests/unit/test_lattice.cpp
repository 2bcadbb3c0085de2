#include <cmath>

#include "doctest.h"
#include "qpww/errors.hpp"
#include "qpww/lattice.hpp"
#include "qpww/qpfunction.hpp"
#include "qpww/random_fields.hpp"

using namespace qpww;

TEST_CASE("one-dimensional lattice has xi equal to j") {
  auto lat = validate_lattice({1.0}, 4);
  CHECK(lat->size() == 9);
  for (int j = -4; j <= 4; ++j) {
    const std::vector<int> idx{j};
    CHECK(lat->xi(lat->flat(idx)) == doctest::Approx(j));
  }
  CHECK(lat->zero_index() == lat->flat(std::vector<int>{0}));
}

TEST_CASE("integer relation among frequencies is rejected with its index") {
  try {
    validate_lattice({1.0, 0.5}, 4);
    FAIL("expected RationalDependence");
  } catch (const RationalDependence& e) {
    const auto& j = e.index();
    REQUIRE(j.size() == 2);
    const bool match = (j[0] == 1 && j[1] == -2) || (j[0] == -1 && j[1] == 2);
    CHECK(match);
    CHECK(std::abs(e.value()) <= 1e-12);
  }
}

TEST_CASE("relation outside the box is accepted") {
  // 1 - 3 * (1/3) = 0 needs |j| = 3.
  CHECK_NOTHROW(validate_lattice({1.0, 1.0 / 3.0}, 2));
  CHECK_THROWS_AS(validate_lattice({1.0, 1.0 / 3.0}, 3), RationalDependence);
}

TEST_CASE("golden lattice geometry") {
  auto lat = validate_lattice(default_frequencies(2), 8);
  CHECK(lat->dim() == 2);
  CHECK(lat->size() == 17u * 17u);
  CHECK(lat->delta_min() > 0.0);
  CHECK(lat->padded_resolution() >= 2 * lat->side());
  for (std::size_t f = 0; f < lat->size(); ++f) {
    CHECK(lat->flat(lat->index(f)) == f);
    CHECK(lat->xi(lat->mirror(f)) == doctest::Approx(-lat->xi(f)).epsilon(1e-15));
  }
  const std::vector<int> j{2, -3};
  CHECK(lat->xi(lat->flat(j)) == doctest::Approx(2.0 - 3.0 * (1.0 + std::sqrt(5.0)) / 2.0));
  CHECK(lat->index_norm2(lat->flat(j)) == 13.0);
  CHECK_FALSE(lat->contains(std::vector<int>{9, 0}));
}

TEST_CASE("default frequencies") {
  CHECK(default_frequencies(1) == std::vector<double>{1.0});
  const auto k3 = default_frequencies(3);
  REQUIRE(k3.size() == 3);
  CHECK(k3[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
  CHECK(k3[2] == doctest::Approx(std::sqrt(2.0)));
  CHECK_NOTHROW(validate_lattice(k3, 4));
}

TEST_CASE("fft friendly sizes have only small prime factors") {
  for (int n : {7, 17, 34, 35, 101}) {
    int m = fft_friendly_size(n);
    CHECK(m >= n);
    for (int p : {2, 3, 5, 7})
      while (m % p == 0) m /= p;
    CHECK(m == 1);
  }
}

TEST_CASE("resample embeds and truncates") {
  auto small = validate_lattice(default_frequencies(2), 4);
  auto big = validate_lattice(default_frequencies(2), 8);
  const QPFunction u = random_function(small, 2.0, 11);
  const QPFunction up = resample(u, big);
  for (std::size_t f = 0; f < big->size(); ++f) {
    const auto j = big->index(f);
    const cplx expected = small->contains(j) ? u.at(j) : cplx(0.0);
    CHECK(up[f] == expected);
  }
  CHECK(resample(up, small) == u);
  auto other = validate_lattice({1.0, std::sqrt(2.0)}, 4);
  CHECK_THROWS_AS(resample(u, other), Error);
}
