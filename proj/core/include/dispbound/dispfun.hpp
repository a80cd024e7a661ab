#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dispbound/relations.hpp"

namespace dispbound {

// A strictly positive point of the open simplex, renormalized to sum 1 on
// construction. `renormalized` records whether the input drifted beyond the
// 1e-12 tolerance.
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit SimplexPoint(std::vector<double> coords);
  static SimplexPoint uniform(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& coords() const { return coords_; }
  bool renormalized() const { return renormalized_; }

 private:
  std::vector<double> coords_;
  bool renormalized_ = false;
};

// sigma(x) = (1-x)/x on (0,1); the building block of every displacement
// function. Arguments are clamped to [1e-300, 1-1e-16] so that boundary
// limits blow up instead of overflowing; `sigma_saturated` reports clamping.
double sigma(double x);
double sigma_clamped(double x, bool* saturated = nullptr);

enum class FunctionTag { F, G };

// x -> sigma(sum_{l in A} x_l) * sigma(x_t). A is always either one
// first-letter block (product length 0) or the complement of a cone range
// (product length >= 1), so the numerator sum is evaluated from an interval.
struct DisplacementFunction {
  std::vector<int> A;          // sorted sphere indices, 1-based
  int t = 1;                   // target sphere index, 1-based
  FunctionTag tag = FunctionTag::F;
  int product_length = 0;      // 0 for the F family, >= 1 for the g strata
  int interval_lo = 1, interval_hi = 0;
  bool complement = false;     // A = [1,d] minus [lo,hi] instead of [lo,hi]

  bool is_F() const { return tag == FunctionTag::F; }
};

struct FunctionFamily {
  int rank = 2;
  int radius = 2;
  int dim = 0;                                  // d = 2n(2n-1)^{k-1}
  std::vector<DisplacementFunction> F;          // d members, F[i] has t = i+1
  std::vector<DisplacementFunction> G;          // all R_k members, F subset first
  std::vector<std::pair<int, int>> blocks;      // I_1..I_{2n} index ranges

  const std::vector<DisplacementFunction>& members(FunctionTag which) const {
    return which == FunctionTag::F ? F : G;
  }
};

// Partial sum over the block I_j.
double block_sum(const SimplexPoint& x, const FunctionFamily& family, int block);

// One displacement function per relation; the F subset comes from the
// product-length-0 relations and is ordered by target index.
FunctionFamily build_family(const RelationCensus& census, const SphereIndexing& indexing);

// Convenience: enumerate relations and build the family in one go.
FunctionFamily build_family(int rank, int radius, const EnumerationConfig& cfg = {},
                            int threads = 1);

double eval_function(const DisplacementFunction& f, const SimplexPoint& x);

struct MaxResult {
  double value = 0.0;
  int argmax = 0;                // position within the evaluated member list
  std::vector<int> tie_set;      // members within relative 1e-9 of the max
};

// Pointwise maximum over the F (or full G) family, with argmax identity and
// the tie set at relative tolerance 1e-9.
MaxResult eval_F(const FunctionFamily& family, const SimplexPoint& x);
MaxResult eval_G(const FunctionFamily& family, const SimplexPoint& x);
MaxResult eval_max(const FunctionFamily& family, FunctionTag which, const SimplexPoint& x);

// Analytic partials of sigma(sum_A x) * sigma(x_t); matches central finite
// differences to relative 1e-6 on interior points.
std::vector<double> gradient(const DisplacementFunction& f, const SimplexPoint& x);

// Accumulates weight * gradient(f) into grad without materializing the
// per-function vector (A is an interval or interval complement).
void accumulate_gradient(const DisplacementFunction& f, const SimplexPoint& x, double weight,
                         std::vector<double>& grad);

std::string tag_string(const DisplacementFunction& f);

}  // namespace dispbound
