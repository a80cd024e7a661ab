#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dispbound/convexity.hpp"
#include "dispbound/minimax.hpp"

using namespace dispbound;
using doctest::Approx;

namespace {

std::pair<double, double> random_triangle_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(1e-3, 1.0);
  for (;;) {
    const double x = unit(rng), y = unit(rng);
    if (x + y < 0.999) return {x, y};
  }
}

}  // namespace

TEST_CASE("closed-form Hessian of f at the centre") {
  const Hessian2 h = hessian_f(0.25, 0.25);
  CHECK(h.xx == Approx(384.0));
  CHECK(h.xy == Approx(256.0));
  CHECK(h.yy == Approx(384.0));
  CHECK(h.det() == Approx(81920.0));  // 1.25 * 4^8
}

TEST_CASE("f Hessian transposes under argument swap") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [x, y] = random_triangle_point(rng);
    const Hessian2 a = hessian_f(x, y), b = hessian_f(y, x);
    CHECK(a.xx == Approx(b.yy));
    CHECK(a.yy == Approx(b.xx));
    CHECK(a.xy == Approx(b.xy));
  }
}

TEST_CASE("closed-form Hessian of g at the centre") {
  const Hessian2 h = hessian_g(0.25, 0.25);
  CHECK(h.det() == Approx(2048.0));
  CHECK(h.xx > 0.0);
  CHECK(h.xx == Approx(48.0));
  CHECK(h.xy == Approx(112.0));
}

TEST_CASE("g determinant matches its closed form everywhere") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const auto [x, y] = random_triangle_point(rng);
    const double u = x + y;
    const double expect =
        (3.0 + 4.0 * x * (-1.0 + y) - 8.0 * y + 4.0 * y * y) / (y * y * y * y * u * u * u * u);
    CHECK(hessian_g(x, y).det() == Approx(expect).epsilon(1e-10));
    const double expect_f = (3.0 + 4.0 * x * (-1.0 + y) - 4.0 * y) /
                            (x * x * x * x * y * y * y * y);
    CHECK(hessian_f(x, y).det() == Approx(expect_f).epsilon(1e-10));
  }
}

TEST_CASE("Hessians match central finite differences") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    double x, y;
    std::tie(x, y) = random_triangle_point(rng);
    if (x < 0.02 || y < 0.02 || x + y > 0.95) continue;  // keep the stencil inside
    const Hessian2 hf = hessian_f(x, y);
    const Hessian2 fdf = fd_hessian(reduced_f_ld, x, y);
    CHECK(hf.xx == Approx(fdf.xx).epsilon(1e-6));
    CHECK(hf.xy == Approx(fdf.xy).epsilon(1e-6));
    CHECK(hf.yy == Approx(fdf.yy).epsilon(1e-6));
    const Hessian2 hg = hessian_g(x, y);
    const Hessian2 fdg = fd_hessian(reduced_g_ld, x, y);
    CHECK(hg.xx == Approx(fdg.xx).epsilon(1e-6));
    CHECK(hg.xy == Approx(fdg.xy).epsilon(1e-6));
    CHECK(hg.yy == Approx(fdg.yy).epsilon(1e-6));
  }
}

TEST_CASE("det H_f vanishes on its critical curve") {
  // x + y - xy = 3/4, i.e. x = (3/4 - y)/(1 - y)
  for (double y : {0.1, 0.2, 0.25, 0.3, 0.42, 0.6, 0.7}) {
    const double x = (0.75 - y) / (1.0 - y);
    REQUIRE(in_triangle(x, y));
    const double scaled = hessian_f(x, y).det() * std::pow(x, 4) * std::pow(y, 4);
    CHECK(std::abs(scaled) < 1e-6);
  }
}

TEST_CASE("det H_g vanishes on the C_g boundary") {
  // x + 2y - xy - y^2 = 3/4, i.e. x = (3/4 + y^2 - 2y)/(1 - y), y < 1/2
  for (double y : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45}) {
    const double x = (0.75 + y * y - 2.0 * y) / (1.0 - y);
    REQUIRE(in_triangle(x, y));
    const double scaled =
        hessian_g(x, y).det() * std::pow(y, 4) * std::pow(x + y, 4);
    CHECK(std::abs(scaled) < 1e-6);
  }
}

TEST_CASE("C_g boundary is concave in its parametrization") {
  auto boundary_x = [](double y) { return (0.75 + y * y - 2.0 * y) / (1.0 - y); };
  const double h = 1e-5;
  for (double y : {0.05, 0.15, 0.25, 0.35, 0.45, 0.6}) {
    const double fd = (boundary_x(y + h) - 2.0 * boundary_x(y) + boundary_x(y - h)) / (h * h);
    const double closed = 1.0 / (2.0 * std::pow(-1.0 + y, 3));
    CHECK(closed < 0.0);
    CHECK(fd == Approx(closed).epsilon(1e-4));
  }
}

TEST_CASE("region membership examples") {
  const auto fam = build_family(2, 2);
  const SimplexPoint u = SimplexPoint::uniform(12);

  // All twelve C_{f_i} contain the uniform point.
  for (int i = 1; i <= 12; ++i) {
    const RegionD r = region_for(fam, i);
    CHECK_FALSE(r.target_in_block);  // radius 2 has no in-block targets
    CHECK(in_regionD(r, fam, u));
    // 7/4 + (18 - 8 sqrt 2)/12 < 3 + sqrt 2
    CHECK(regionD_slack(r, fam, u) ==
          Approx(3.0 + std::sqrt(2.0) - 1.75 - (18.0 - 8.0 * std::sqrt(2.0)) / 12.0));
  }

  // In-block variant appears at radius 3 and its uniform slack is 3/4 - 5/16.
  const auto fam3 = build_family(2, 3);
  const SimplexPoint u36 = SimplexPoint::uniform(36);
  int in_block_count = 0;
  for (int i = 1; i <= 36; ++i) {
    const RegionD r = region_for(fam3, i);
    CHECK(in_regionD(r, fam3, u36));
    if (r.target_in_block) {
      ++in_block_count;
      CHECK(regionD_slack(r, fam3, u36) == Approx(0.75 - (0.25 + 3.0 / (16.0 * 9.0))));
    }
  }
  CHECK(in_block_count > 0);
}

TEST_CASE("tangency point lies on both defining curves") {
  const double x = kTangencyX, y = kTangencyY;
  CHECK(std::abs(7.0 * x + (18.0 - 8.0 * std::sqrt(2.0)) * y - 3.0 - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(x + x * y + y - 0.75) < 1e-12);
  // boundary means not a member of the open region
  CHECK_FALSE(in_region2(Region2{RegionKind::Cf}, x, y));
  // and the Hessian of f is still positive definite there: the line bounds
  // the convexity region conservatively
  CHECK(hessian_f(x, y).det() > 0.0);
}

TEST_CASE("positive definiteness scans") {
  const PdScanReport cf = pd_scan(RegionKind::Cf, 10000, 2024);
  CHECK(cf.all_pd_inside());
  CHECK(cf.samples_inside == 10000);
  CHECK(cf.pd_failures_outside > 0);

  const PdScanReport cg = pd_scan(RegionKind::Cg, 10000, 2025);
  CHECK(cg.all_pd_inside());
  // beyond the C_g boundary the determinant is negative outright
  CHECK(cg.pd_failures_outside == cg.samples_outside);
  CHECK(cg.samples_outside > 0);

  // deterministic per seed
  const PdScanReport again = pd_scan(RegionKind::Cf, 10000, 2024);
  CHECK(again.min_minor_inside == cf.min_minor_inside);
  CHECK(again.pd_failures_outside == cf.pd_failures_outside);
}

TEST_CASE("explicit non-PD point beyond the critical curve") {
  // determinant numerator 3 + 4x(-1+y) - 4y at (0.6, 0.5)
  CHECK(3.0 + 4.0 * 0.6 * (-1.0 + 0.5) - 4.0 * 0.5 == Approx(-0.2));
  // an interior point past x + y - xy = 3/4 where f loses definiteness
  const Hessian2 h = hessian_f(0.6, 0.39);
  CHECK(h.det() < 0.0);
  CHECK(h.xx > 0.0);
}

TEST_CASE("domain errors outside the triangle") {
  CHECK_THROWS_AS(hessian_f(0.7, 0.5), std::domain_error);
  CHECK_THROWS_AS(hessian_g(-0.1, 0.5), std::domain_error);
  CHECK_FALSE(in_region2(Region2{RegionKind::Cg}, 0.7, 0.5));
}
