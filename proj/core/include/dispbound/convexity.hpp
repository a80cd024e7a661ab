#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dispbound/dispfun.hpp"

namespace dispbound {

// 2x2 symmetric Hessian [[xx, xy], [xy, yy]].
struct Hessian2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;
  double det() const { return xx * yy - xy * xy; }
};

// True iff (x, y) lies in the open triangle x > 0, y > 0, x + y < 1.
bool in_triangle(double x, double y);

// Two-variable reductions of the displacement functions:
//   f(x,y) = sigma(x) sigma(y),   g(x,y) = sigma(x+y) sigma(y).
double reduced_f(double x, double y);
double reduced_g(double x, double y);

// Closed-form Hessians on the open triangle.
//   det H_f = (3 + 4x(-1+y) - 4y) / (x^4 y^4), vanishing on x + y - xy = 3/4;
//   det H_g = (3 + 4x(-1+y) - 8y + 4y^2) / (y^4 (x+y)^4), vanishing on
//   x + 2y - xy - y^2 = 3/4.
Hessian2 hessian_f(double x, double y);
Hessian2 hessian_g(double x, double y);

enum class RegionKind { Cf, Cg };

// Strict convexity regions inside the triangle:
//   C_f: 7x + (18 - 8 sqrt 2) y < 3 + sqrt 2
//   C_g: x + 2y - xy - y^2 < 3/4
struct Region2 {
  RegionKind kind = RegionKind::Cf;
  // Signed slack of the defining inequality; membership means slack > 0.
  double slack(double x, double y) const;
};

bool in_region2(const Region2& r, double x, double y);

// The C_{f_i} membership predicate on the d-simplex. For f_i with numerator
// block I_j, the target inside the block uses the C_g-shaped inequality on
// (Sigma_j^i, x_i); a target outside uses the half-space form on
// (Sigma_j, x_i).
struct RegionD {
  int function_index = 1;  // i, 1-based
  int block = 1;           // j with A = I_j
  bool target_in_block = false;
};

RegionD region_for(const FunctionFamily& family, int function_index);
double regionD_slack(const RegionD& r, const FunctionFamily& family, const SimplexPoint& x);
bool in_regionD(const RegionD& r, const FunctionFamily& family, const SimplexPoint& x);

// The tangency point of the C_f boundary line with the curve x + xy + y = 3/4.
constexpr double kTangencyX = 0.29289321881345247560;  // (2 - sqrt 2)/2
constexpr double kTangencyY = 0.35355339059327376220;  // sqrt(2)/4

struct PdScanReport {
  RegionKind region = RegionKind::Cf;
  std::uint64_t seed = 0;
  int samples_inside = 0;
  int pd_inside = 0;
  int indeterminate_inside = 0;  // leading minor within 1e-12 of zero
  double min_minor_inside = 0.0;
  int samples_outside = 0;
  int pd_failures_outside = 0;   // points beyond the region where PD breaks
  bool all_pd_inside() const { return pd_inside + indeterminate_inside == samples_inside; }
};

// Rejection-samples the region (and a band strictly outside it, violating
// the inequality by more than 0.05) and tests positive definiteness through
// leading principal minors. Deterministic per seed.
PdScanReport pd_scan(RegionKind region, int samples, std::uint64_t seed);

// Central finite-difference Hessian of a 2D callable, step 1e-5: the
// independent oracle for the closed forms. Stencil arithmetic runs in long
// double so the cancellation floor stays below the 1e-6 comparison level.
template <typename F>
Hessian2 fd_hessian(F&& f, double x, double y, long double h = 1e-5L) {
  const long double X = x, Y = y;
  Hessian2 out;
  out.xx = static_cast<double>((f(X + h, Y) - 2.0L * f(X, Y) + f(X - h, Y)) / (h * h));
  out.yy = static_cast<double>((f(X, Y + h) - 2.0L * f(X, Y) + f(X, Y - h)) / (h * h));
  out.xy = static_cast<double>(
      (f(X + h, Y + h) - f(X + h, Y - h) - f(X - h, Y + h) + f(X - h, Y - h)) / (4.0L * h * h));
  return out;
}

// Long-double forms of the two-variable reductions, for the oracle above.
inline long double reduced_f_ld(long double x, long double y) {
  return (1.0L - x) / x * (1.0L - y) / y;
}
inline long double reduced_g_ld(long double x, long double y) {
  return (1.0L - x - y) / (x + y) * (1.0L - y) / y;
}

}  // namespace dispbound
