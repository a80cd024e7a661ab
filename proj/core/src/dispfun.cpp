#include "dispbound/dispfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dispbound {

namespace {

constexpr double kTieRelTol = 1e-9;
constexpr double kClampLo = 1e-300;
constexpr double kClampHi = 1.0 - 1e-16;

double interval_sum(const SimplexPoint& x, int lo, int hi) {
  double s = 0.0;
  for (int i = lo; i <= hi; ++i) s += x[i - 1];
  return s;
}

double numerator_sum(const DisplacementFunction& f, const SimplexPoint& x) {
  const double s = interval_sum(x, f.interval_lo, f.interval_hi);
  return f.complement ? 1.0 - s : s;
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("simplex point needs at least one coordinate");
  double sum = 0.0;
  for (double c : coords_) {
    if (!(c > 0.0)) throw std::domain_error("simplex coordinates must be strictly positive");
    sum += c;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) renormalized_ = true;
  for (double& c : coords_) c /= sum;
}

SimplexPoint SimplexPoint::uniform(int dim) {
  return SimplexPoint(std::vector<double>(static_cast<std::size_t>(dim), 1.0 / dim));
}

double sigma(double x) {
  if (!(x > 0.0) || !(x < 1.0)) throw std::domain_error("sigma needs an argument in (0,1)");
  return (1.0 - x) / x;
}

double sigma_clamped(double x, bool* saturated) {
  bool sat = false;
  if (x < kClampLo) {
    x = kClampLo;
    sat = true;
  } else if (x > kClampHi) {
    x = kClampHi;
    sat = true;
  }
  if (saturated) *saturated = sat;
  return (1.0 - x) / x;
}

double block_sum(const SimplexPoint& x, const FunctionFamily& family, int block) {
  if (block < 1 || block > static_cast<int>(family.blocks.size()))
    throw std::invalid_argument("block out of range");
  const auto [lo, hi] = family.blocks[static_cast<std::size_t>(block - 1)];
  return interval_sum(x, lo, hi);
}

FunctionFamily build_family(const RelationCensus& census, const SphereIndexing& indexing) {
  FunctionFamily fam;
  fam.rank = census.rank;
  fam.radius = census.radius;
  fam.dim = indexing.size();
  for (int b = 1; b <= indexing.block_count(); ++b) fam.blocks.push_back(indexing.block_range(b));

  fam.F.assign(static_cast<std::size_t>(fam.dim), DisplacementFunction{});
  std::vector<DisplacementFunction> rest;
  for (const Relation& rel : census.relations) {
    DisplacementFunction f;
    f.A = rel.S;
    f.t = *indexing.index_of(rel.s_gamma);
    f.product_length = rel.product_length;
    if (rel.product_length == 0) {
      // S(gamma) is the block of words opening with the inverse of the last
      // letter of s(gamma); store it as a direct interval.
      f.tag = FunctionTag::F;
      f.interval_lo = rel.S.front();
      f.interval_hi = rel.S.back();
      f.complement = false;
    } else {
      // S(gamma) is everything outside the cone of reduce(gamma*s(gamma)).
      f.tag = FunctionTag::G;
      const Word rho = multiply(rel.gamma, rel.s_gamma);
      const auto [lo, hi] = indexing.cone_range(rho);
      f.interval_lo = lo;
      f.interval_hi = hi;
      f.complement = true;
    }
    const std::int64_t span = f.interval_hi - f.interval_lo + 1;
    const std::int64_t expect =
        f.complement ? fam.dim - span : span;
    if (expect != static_cast<std::int64_t>(f.A.size()))
      throw std::logic_error("relation S set does not match its interval form");
    if (f.tag == FunctionTag::F)
      fam.F[static_cast<std::size_t>(f.t - 1)] = f;
    else
      rest.push_back(std::move(f));
  }
  for (const DisplacementFunction& f : fam.F)
    if (f.A.empty()) throw std::logic_error("census is missing a product-length-0 relation");
  fam.G = fam.F;
  fam.G.insert(fam.G.end(), rest.begin(), rest.end());
  return fam;
}

FunctionFamily build_family(int rank, int radius, const EnumerationConfig& cfg, int threads) {
  SphereIndexing indexing(rank, radius, cfg);
  return build_family(enumerate_relations(rank, radius, cfg, threads), indexing);
}

double eval_function(const DisplacementFunction& f, const SimplexPoint& x) {
  return sigma_clamped(numerator_sum(f, x)) * sigma_clamped(x[f.t - 1]);
}

MaxResult eval_max(const FunctionFamily& family, FunctionTag which, const SimplexPoint& x) {
  if (x.dim() != family.dim) throw std::invalid_argument("point dimension does not match family");
  const auto& members = family.members(which);
  MaxResult r;
  std::vector<double> values(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    values[i] = eval_function(members[i], x);
    if (i == 0 || values[i] > r.value) {
      r.value = values[i];
      r.argmax = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    if (values[i] >= r.value * (1.0 - kTieRelTol)) r.tie_set.push_back(static_cast<int>(i));
  return r;
}

MaxResult eval_F(const FunctionFamily& family, const SimplexPoint& x) {
  return eval_max(family, FunctionTag::F, x);
}

MaxResult eval_G(const FunctionFamily& family, const SimplexPoint& x) {
  return eval_max(family, FunctionTag::G, x);
}

std::vector<double> gradient(const DisplacementFunction& f, const SimplexPoint& x) {
  std::vector<double> g(static_cast<std::size_t>(x.dim()), 0.0);
  accumulate_gradient(f, x, 1.0, g);
  return g;
}

void accumulate_gradient(const DisplacementFunction& f, const SimplexPoint& x, double weight,
                         std::vector<double>& grad) {
  const double sA = numerator_sum(f, x);
  const double xt = x[f.t - 1];
  // d/dx_l sigma(S_A) = -1/S_A^2 for l in A; d/dx_t sigma(x_t) = -1/x_t^2.
  const double dA = -weight * sigma_clamped(xt) / (sA * sA);
  const double dt = -weight * sigma_clamped(sA) / (xt * xt);
  if (f.complement) {
    for (int l = 1; l <= x.dim(); ++l) grad[static_cast<std::size_t>(l - 1)] += dA;
    for (int l = f.interval_lo; l <= f.interval_hi; ++l)
      grad[static_cast<std::size_t>(l - 1)] -= dA;
  } else {
    for (int l = f.interval_lo; l <= f.interval_hi; ++l)
      grad[static_cast<std::size_t>(l - 1)] += dA;
  }
  grad[static_cast<std::size_t>(f.t - 1)] += dt;
}

std::string tag_string(const DisplacementFunction& f) {
  if (f.is_F()) return "f";
  return "g" + std::to_string(f.product_length);
}

}  // namespace dispbound
