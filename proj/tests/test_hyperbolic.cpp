#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dispbound/hyperbolic.hpp"

using namespace dispbound;
using doctest::Approx;

namespace {

MoebiusMap random_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    const Complex a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)}, d{u(rng), u(rng)};
    if (std::abs(a * d - b * c) > 0.1) return MoebiusMap(a, b, c, d);
  }
}

H3Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> h(-1.5, 1.5);
  return {Complex{u(rng), u(rng)}, std::exp(h(rng))};
}

}  // namespace

TEST_CASE("diagonal maps translate along the vertical axis") {
  const double lambda = std::exp(0.5);
  const MoebiusMap m(lambda, 0.0, 0.0, 1.0 / lambda);
  const H3Point p{Complex{0.0, 0.0}, 1.0};
  const H3Point q = apply(m, p);
  CHECK(std::abs(q.z) < 1e-15);
  CHECK(q.t == Approx(std::exp(1.0)));
  CHECK(distance(p, q) == Approx(1.0));
}

TEST_CASE("identity and inverses") {
  std::mt19937_64 rng(99);
  const H3Point p{Complex{0.3, -0.7}, 2.1};
  const H3Point same = apply(MoebiusMap::identity(), p);
  CHECK(std::abs(same.z - p.z) < 1e-15);
  CHECK(same.t == Approx(p.t));
  for (int trial = 0; trial < 200; ++trial) {
    const MoebiusMap m = random_map(rng);
    const H3Point q = random_point(rng);
    const H3Point back = apply(m.inverse(), apply(m, q));
    CHECK(std::abs(back.z - q.z) < 1e-10);
    CHECK(back.t == Approx(q.t).epsilon(1e-10));
  }
}

TEST_CASE("composition acts like successive application") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    const MoebiusMap m = random_map(rng), n = random_map(rng);
    const H3Point p = random_point(rng);
    const H3Point lhs = apply(m * n, p);
    const H3Point rhs = apply(m, apply(n, p));
    CHECK(std::abs(lhs.z - rhs.z) < 1e-9);
    CHECK(lhs.t == Approx(rhs.t).epsilon(1e-9));
  }
}

TEST_CASE("distance axioms and isometry invariance") {
  std::mt19937_64 rng(321);
  const H3Point p{Complex{0.0, 0.0}, 1.0};
  CHECK(distance(p, p) == 0.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const H3Point a = random_point(rng), b = random_point(rng), c = random_point(rng);
    const double ab = distance(a, b);
    CHECK(ab == Approx(distance(b, a)));
    CHECK(ab >= 0.0);
    CHECK(ab <= distance(a, c) + distance(c, b) + 1e-12);
    const MoebiusMap m = random_map(rng);
    CHECK(distance(apply(m, a), apply(m, b)) == Approx(ab).epsilon(1e-10));
  }
}

TEST_CASE("trace classification") {
  const double lambda = std::exp(0.5);
  CHECK(classify(MoebiusMap(lambda, 0.0, 0.0, 1.0 / lambda)) == IsometryClass::Loxodromic);
  CHECK(classify(MoebiusMap(1.0, 1.0, 0.0, 1.0)) == IsometryClass::Parabolic);
  CHECK(classify(MoebiusMap::identity()) == IsometryClass::Identity);
  const double c = std::cos(M_PI / 5.0), s = std::sin(M_PI / 5.0);
  CHECK(classify(MoebiusMap(Complex{c, s}, 0.0, 0.0, Complex{c, -s})) == IsometryClass::Elliptic);
  // screw motion: complex trace
  CHECK(classify(MoebiusMap(Complex{1.2, 0.3}, 0.0, 0.0,
                            Complex{1.0, 0.0} / Complex{1.2, 0.3})) == IsometryClass::Loxodromic);
  // hugging the parabolic boundary from outside: reported indeterminate
  const double e = 5e-6;
  CHECK(classify(MoebiusMap(1.0 + e, 1.0, 0.0, 1.0 / (1.0 + e))) == IsometryClass::Indeterminate);
}

TEST_CASE("schottky sampling produces certified pairs") {
  const SchottkyPair pair = sample_schottky(42);
  CHECK(pair.certificate_valid);
  CHECK(pair.disjointness_margin > 0.0);
  CHECK(pair.pairing_margin >= 0.0);
  CHECK(classify(pair.xi) == IsometryClass::Loxodromic);
  CHECK(classify(pair.eta) == IsometryClass::Loxodromic);
  CHECK(classify(pair.xi * pair.eta) == IsometryClass::Loxodromic);

  SchottkyConfig bad;
  bad.margin_factor = 0.0;
  CHECK_THROWS_AS(sample_schottky(42, bad), std::invalid_argument);
}

TEST_CASE("smaller disks push the displacement spectrum up") {
  SchottkyConfig wide;
  wide.margin_factor = 0.8;
  SchottkyConfig narrow;
  narrow.margin_factor = 0.08;
  const H3Point z0{Complex{0.0, 0.0}, 1.0};
  const auto wide_rep = test_bound(sample_schottky(7, wide), 2, z0);
  const auto narrow_rep = test_bound(sample_schottky(7, narrow), 2, z0);
  MESSAGE("wide margin ", wide_rep.margin, " narrow margin ", narrow_rep.margin);
  CHECK(wide_rep.margin >= 0.0);
  CHECK(narrow_rep.margin >= 0.0);
}

TEST_CASE("word evaluation is a homomorphism up to sign") {
  const SchottkyPair pair = sample_schottky(5);
  const auto ball = enumerate_ball_interior(2, 4);  // all words of length <= 3
  for (const Word& u : ball)
    for (const Word& v : ball) {
      const MoebiusMap prod = word_to_matrix(multiply(u, v), pair.xi, pair.eta);
      const MoebiusMap composed = word_to_matrix(u, pair.xi, pair.eta) *
                                  word_to_matrix(v, pair.xi, pair.eta);
      const double diff =
          std::min(std::abs(prod.a() - composed.a()) + std::abs(prod.b() - composed.b()) +
                       std::abs(prod.c() - composed.c()) + std::abs(prod.d() - composed.d()),
                   std::abs(prod.a() + composed.a()) + std::abs(prod.b() + composed.b()) +
                       std::abs(prod.c() + composed.c()) + std::abs(prod.d() + composed.d()));
      const double scale = std::abs(composed.a()) + std::abs(composed.b()) +
                           std::abs(composed.c()) + std::abs(composed.d());
      CHECK(diff / (1.0 + scale) < 1e-9);
    }
}

TEST_CASE("displacement bound certified on sampled pairs") {
  const H3Point z0{Complex{0.1, -0.2}, 1.3};
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const SchottkyPair pair = sample_schottky(seed);
    for (int k : {2, 3}) {
      const BoundReport rep = test_bound(pair, k, z0);
      CHECK(rep.hypothesis_certified);
      CHECK(rep.bound == Approx(0.5 * std::log(12.0 * std::pow(3.0, k - 1) - 3.0)));
      CHECK(rep.margin >= 0.0);
      CHECK_FALSE(rep.argmax_word.empty());
    }
  }
  CHECK(test_bound(sample_schottky(1), 2, z0).bound == Approx(0.5 * std::log(33.0)));
}

TEST_CASE("displacements are inversion symmetric") {
  const SchottkyPair pair = sample_schottky(11);
  const H3Point z0{Complex{0.4, 0.9}, 0.7};
  for (const Word& w : enumerate_ball_interior(2, 4)) {
    const double fwd = distance(z0, apply(word_to_matrix(w, pair.xi, pair.eta), z0));
    const double bwd =
        distance(z0, apply(word_to_matrix(w.inverse(), pair.xi, pair.eta), z0));
    CHECK(fwd == Approx(bwd).epsilon(1e-9));
  }
}

TEST_CASE("base point optimization keeps the bound intact") {
  const SchottkyPair pair = sample_schottky(23);
  const BasePointSearch search = minimize_over_base_points(pair, 2, 4);
  CHECK(search.report.margin >= 0.0);
  // the refined point does no worse than the default base point
  const BoundReport at_origin = test_bound(pair, 2, H3Point{});
  CHECK(search.report.max_displacement <= at_origin.max_displacement + 1e-12);
}

TEST_CASE("deterministic sampling per seed") {
  const SchottkyPair a = sample_schottky(77), b = sample_schottky(77);
  CHECK(a.xi.a() == b.xi.a());
  CHECK(a.disks[2].center == b.disks[2].center);
  const SchottkyPair c = sample_schottky(78);
  CHECK(a.xi.a() != c.xi.a());
}
