#include "dispbound/convexity.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace dispbound {

namespace {

constexpr double kMinorMargin = 1e-12;
const double kSqrt2 = std::sqrt(2.0);

void check_triangle(double x, double y) {
  if (!in_triangle(x, y)) throw std::domain_error("point outside the open triangle");
}

}  // namespace

bool in_triangle(double x, double y) { return x > 0.0 && y > 0.0 && x + y < 1.0; }

double reduced_f(double x, double y) { return sigma(x) * sigma(y); }

double reduced_g(double x, double y) { return sigma(x + y) * sigma(y); }

Hessian2 hessian_f(double x, double y) {
  check_triangle(x, y);
  Hessian2 h;
  h.xx = 2.0 * (1.0 - y) / (x * x * x * y);
  h.xy = 1.0 / (x * x * y * y);
  h.yy = 2.0 * (1.0 - x) / (y * y * y * x);
  return h;
}

Hessian2 hessian_g(double x, double y) {
  check_triangle(x, y);
  const double u = x + y;
  Hessian2 h;
  h.xx = 2.0 * (1.0 - y) / (u * u * u * y);
  h.xy = (x + 3.0 * y - 2.0 * y * y) / (u * u * u * y * y);
  // sigma''(u) sigma(y) + 2 sigma'(u) sigma'(y) + sigma(u) sigma''(y)
  h.yy = 2.0 * (1.0 - y) / (y * u * u * u) + 2.0 / (u * u * y * y) +
         2.0 * (1.0 - u) / (u * y * y * y);
  return h;
}

double Region2::slack(double x, double y) const {
  if (kind == RegionKind::Cf) return 3.0 + kSqrt2 - 7.0 * x - (18.0 - 8.0 * kSqrt2) * y;
  return 0.75 - (x + 2.0 * y - x * y - y * y);
}

bool in_region2(const Region2& r, double x, double y) {
  if (!in_triangle(x, y)) return false;
  return r.slack(x, y) > 0.0;
}

RegionD region_for(const FunctionFamily& family, int function_index) {
  if (function_index < 1 || function_index > family.dim)
    throw std::invalid_argument("function index out of range");
  const DisplacementFunction& f = family.F[static_cast<std::size_t>(function_index - 1)];
  RegionD r;
  r.function_index = function_index;
  r.block = 0;
  for (std::size_t b = 0; b < family.blocks.size(); ++b)
    if (family.blocks[b].first == f.interval_lo && family.blocks[b].second == f.interval_hi)
      r.block = static_cast<int>(b) + 1;
  if (r.block == 0) throw std::logic_error("F-function numerator is not a block");
  r.target_in_block = f.interval_lo <= f.t && f.t <= f.interval_hi;
  return r;
}

double regionD_slack(const RegionD& r, const FunctionFamily& family, const SimplexPoint& x) {
  const double xi = x[r.function_index - 1];
  if (r.target_in_block) {
    const double s = block_sum(x, family, r.block) - xi;  // Sigma_j^i
    return 0.75 - (s + 2.0 * xi - s * xi - xi * xi);
  }
  const double s = block_sum(x, family, r.block);
  return 3.0 + kSqrt2 - 7.0 * s - (18.0 - 8.0 * kSqrt2) * xi;
}

bool in_regionD(const RegionD& r, const FunctionFamily& family, const SimplexPoint& x) {
  return regionD_slack(r, family, x) > 0.0;
}

PdScanReport pd_scan(RegionKind region, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  PdScanReport report;
  report.region = region;
  report.seed = seed;
  report.min_minor_inside = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Region2 r{region};

  auto hess = [&](double x, double y) {
    return region == RegionKind::Cf ? hessian_f(x, y) : hessian_g(x, y);
  };

  while (report.samples_inside < samples) {
    const double x = unit(rng), y = unit(rng);
    if (!in_triangle(x, y) || r.slack(x, y) <= 0.0) continue;
    ++report.samples_inside;
    const Hessian2 h = hess(x, y);
    const double m1 = h.xx, m2 = h.det();
    const double worst = std::min(m1, m2);
    report.min_minor_inside = std::min(report.min_minor_inside, worst);
    if (worst > kMinorMargin)
      ++report.pd_inside;
    else if (worst > -kMinorMargin)
      ++report.indeterminate_inside;
  }

  // Outside band: inside the triangle, violating the region inequality by
  // more than 0.05.
  const int outside_target = samples / 10 + 1;
  int attempts = 0;
  while (report.samples_outside < outside_target && attempts < samples * 1000) {
    ++attempts;
    const double x = unit(rng), y = unit(rng);
    if (!in_triangle(x, y) || r.slack(x, y) > -0.05) continue;
    ++report.samples_outside;
    const Hessian2 h = hess(x, y);
    if (std::min(h.xx, h.det()) <= 0.0) ++report.pd_failures_outside;
  }
  return report;
}

}  // namespace dispbound
