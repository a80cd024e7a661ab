#include "dispbound/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace dispbound {

namespace {

constexpr double kSubgradientTieRelTol = 1e-9;
constexpr double kResultTieRelTol = 1e-5;
constexpr double kCoordFloor = 1e-300;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Shared per-iteration state: member values from one prefix-sum pass and
// gradient accumulation through a range-update difference array.
class Evaluator {
 public:
  Evaluator(const FunctionFamily& fam, FunctionTag which)
      : fam_(fam), members_(fam.members(which)) {
    psum_.resize(static_cast<std::size_t>(fam.dim) + 1);
    values_.resize(members_.size());
    weights_.resize(members_.size());
    diff_.resize(static_cast<std::size_t>(fam.dim) + 2);
  }

  int dim() const { return fam_.dim; }
  const std::vector<double>& values() const { return values_; }

  void compute_values(const std::vector<double>& x) {
    psum_[0] = 0.0;
    for (int i = 0; i < fam_.dim; ++i)
      psum_[static_cast<std::size_t>(i) + 1] = psum_[static_cast<std::size_t>(i)] + x[static_cast<std::size_t>(i)];
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const DisplacementFunction& f = members_[m];
      double num = psum_[static_cast<std::size_t>(f.interval_hi)] -
                   psum_[static_cast<std::size_t>(f.interval_lo) - 1];
      if (f.complement) num = 1.0 - num;
      values_[m] = sigma_clamped(num) * sigma_clamped(x[static_cast<std::size_t>(f.t) - 1]);
    }
  }

  double true_max() const { return *std::max_element(values_.begin(), values_.end()); }

  // Log-sum-exp smoothed max; fills softmax weights.
  double smoothed(double temperature) {
    const double vmax = true_max();
    double z = 0.0;
    for (std::size_t m = 0; m < members_.size(); ++m) {
      weights_[m] = std::exp((values_[m] - vmax) / temperature);
      z += weights_[m];
    }
    for (double& w : weights_) w /= z;
    return vmax + temperature * std::log(z);
  }

  // Tie-averaged subgradient weights for the unsmoothed max.
  void subgradient_weights() {
    const double vmax = true_max();
    const double cut = vmax - std::abs(vmax) * kSubgradientTieRelTol;
    int ties = 0;
    for (std::size_t m = 0; m < members_.size(); ++m) {
      weights_[m] = values_[m] >= cut ? 1.0 : 0.0;
      if (weights_[m] > 0.0) ++ties;
    }
    for (double& w : weights_) w /= ties;
  }

  // grad = sum_m weights_[m] * grad f_m at x; compute_values must be current.
  void weighted_gradient(const std::vector<double>& x, std::vector<double>& grad) {
    std::fill(diff_.begin(), diff_.end(), 0.0);
    double everywhere = 0.0;
    for (std::size_t m = 0; m < members_.size(); ++m) {
      const double w = weights_[m];
      if (w <= 0.0) continue;
      const DisplacementFunction& f = members_[m];
      double num = psum_[static_cast<std::size_t>(f.interval_hi)] -
                   psum_[static_cast<std::size_t>(f.interval_lo) - 1];
      if (f.complement) num = 1.0 - num;
      const double xt = x[static_cast<std::size_t>(f.t) - 1];
      const double dA = -w * sigma_clamped(xt) / (num * num);
      const double dt = -w * sigma_clamped(num) / (xt * xt);
      if (f.complement) {
        everywhere += dA;
        diff_[static_cast<std::size_t>(f.interval_lo)] -= dA;
        diff_[static_cast<std::size_t>(f.interval_hi) + 1] += dA;
      } else {
        diff_[static_cast<std::size_t>(f.interval_lo)] += dA;
        diff_[static_cast<std::size_t>(f.interval_hi) + 1] -= dA;
      }
      diff_[static_cast<std::size_t>(f.t)] += dt;
      diff_[static_cast<std::size_t>(f.t) + 1] -= dt;
    }
    grad.assign(static_cast<std::size_t>(fam_.dim), 0.0);
    double run = 0.0;
    for (int i = 1; i <= fam_.dim; ++i) {
      run += diff_[static_cast<std::size_t>(i)];
      grad[static_cast<std::size_t>(i) - 1] = run + everywhere;
    }
  }

 private:
  const FunctionFamily& fam_;
  const std::vector<DisplacementFunction>& members_;
  std::vector<double> psum_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> diff_;
};

void renormalize(std::vector<double>& x) {
  double s = 0.0;
  for (double& c : x) {
    if (c < kCoordFloor) c = kCoordFloor;
    s += c;
  }
  for (double& c : x) c /= s;
}

// Multiplicative-weights step x_i <- x_i exp(-eta g_i), stabilized by
// shifting g to nonnegative range and capping the exponent: a coordinate can
// shrink by at most e^-60 per step, so a single overshoot stays recoverable
// and the line search decides the scale.
void md_step(const std::vector<double>& x, const std::vector<double>& g, double eta,
             std::vector<double>& out) {
  const double gmin = *std::min_element(g.begin(), g.end());
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::min(eta * (g[i] - gmin), 60.0);
    out[i] = x[i] * std::exp(-e);
  }
  renormalize(out);
}

double gradient_range(const std::vector<double>& g) {
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  return *hi - *lo;
}

std::vector<double> random_interior_start(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (double& c : x) c = expo(rng) + 1e-12;
  renormalize(x);
  return x;
}

void project_start(std::vector<double>& x) {
  const double floor = 1e-9 / static_cast<double>(x.size());
  for (double& c : x) c = std::max(c, floor);
  renormalize(x);
}

struct SingleRun {
  std::vector<double> x;
  double alpha = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> stage_best;
};

SingleRun solve_single(Evaluator& eval, std::vector<double> x, const SolverConfig& cfg) {
  SingleRun run;
  eval.compute_values(x);
  double best_alpha = eval.true_max();
  std::vector<double> best_x = x;
  std::vector<double> grad, trial;

  // The temperature schedule is relative to the objective's own scale,
  // tracked stage by stage: at the top the softmax blends the whole family
  // (a smooth surrogate), at the bottom it resolves the true max to a 1e-4
  // fraction of its current value.
  std::vector<double> temps;
  for (double T = cfg.temperature_start; T > cfg.temperature_end; T *= cfg.temperature_factor)
    temps.push_back(T);
  temps.push_back(cfg.temperature_end);

  bool final_stage_stalled = false;
  std::vector<double> direction, sorted;
  double eta = 1.0;  // adapts across stages; line search re-scales quickly
  for (std::size_t stage = 0; stage < temps.size(); ++stage) {
    const double T = temps[stage] * best_alpha;
    eval.compute_values(x);
    double ft = eval.smoothed(T);
    bool stage_settled = false;
    for (int it = 0; it < cfg.max_iter; ++it) {
      eval.weighted_gradient(x, grad);

      // Winsorize at a median/MAD scale: coordinates recovering from the
      // boundary carry gradients many orders beyond everyone else and would
      // otherwise erase the step's resolution. Clipping is monotone, so
      // Cov_x(g, d) >= 0 and the multiplicative step stays a descent step.
      sorted = grad;
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      const double med = sorted[sorted.size() / 2];
      for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = std::abs(grad[i] - med);
      std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
      const double mad = sorted[sorted.size() / 2];
      direction.resize(grad.size());
      if (mad > 0.0) {
        const double lo = med - 30.0 * mad, hi = med + 30.0 * mad;
        for (std::size_t i = 0; i < grad.size(); ++i) direction[i] = std::clamp(grad[i], lo, hi);
      } else {
        direction = grad;
      }

      // Directional derivative of the normalized multiplicative update:
      // dF/deta at 0 is -Cov_x(g, d).
      double eg = 0.0, ed = 0.0, egd = 0.0;
      for (std::size_t i = 0; i < grad.size(); ++i) {
        eg += x[i] * grad[i];
        ed += x[i] * direction[i];
        egd += x[i] * grad[i] * direction[i];
      }
      const double descent = -(egd - eg * ed);
      if (!(descent < -1e-14 * std::abs(ft))) {  // stationary at this noise level
        stage_settled = true;
        break;
      }

      bool accepted = false;
      for (int rejects = 0; rejects < 400; ++rejects) {
        md_step(x, direction, eta, trial);
        if (trial == x) break;  // step underflowed: nothing left to try
        eval.compute_values(trial);
        const double ft_trial = eval.smoothed(T);
        ++run.iterations;
        if (ft_trial <= ft + 0.1 * eta * descent + 4e-16 * std::abs(ft)) {
          const double truev = eval.true_max();
          if (truev < best_alpha) {
            best_alpha = truev;
            best_x = trial;
          }
          x.swap(trial);
          ft = ft_trial;
          eta *= 2.0;
          accepted = true;
          break;
        }
        eta *= 0.25;
      }
      if (!accepted) {
        stage_settled = true;  // no representable step helps any further
        break;
      }
      // restore weights/values for the accepted point before next gradient
      eval.compute_values(x);
      eval.smoothed(T);
    }
    if (stage + 1 == temps.size()) final_stage_stalled = stage_settled;
    run.stage_best.push_back(best_alpha);
  }

  // Subgradient polish: tie-averaged subgradient of the max, step c/sqrt(t).
  double improvement = 0.0;
  for (int t = 1; t <= cfg.subgradient_iters; ++t) {
    eval.compute_values(x);
    const double truev = eval.true_max();
    if (truev < best_alpha) {
      improvement = std::max(improvement, best_alpha - truev);
      best_alpha = truev;
      best_x = x;
    }
    eval.subgradient_weights();
    eval.weighted_gradient(x, grad);
    const double range = gradient_range(grad);
    if (range <= 0.0) break;
    const double step = 1e-3 / (range * std::sqrt(static_cast<double>(t)));
    md_step(x, grad, step, trial);
    x.swap(trial);
    ++run.iterations;
  }
  run.stage_best.push_back(best_alpha);

  run.converged = final_stage_stalled && improvement <= cfg.tol * std::abs(best_alpha);
  run.x = std::move(best_x);
  run.alpha = best_alpha;
  return run;
}

// min over convex weights w of || P G w ||_2 where P projects onto the
// sum-zero tangent space; Frank-Wolfe on the tiny simplex QP.
double kkt_residual(const FunctionFamily& fam, FunctionTag which, const std::vector<double>& x,
                    const std::vector<int>& tie_set) {
  if (tie_set.empty()) return 0.0;
  const auto& members = fam.members(which);
  const SimplexPoint p{std::vector<double>(x)};
  const int d = fam.dim;
  const std::size_t m = tie_set.size();

  std::vector<std::vector<double>> cols(m);
  for (std::size_t j = 0; j < m; ++j) {
    cols[j] = gradient(members[static_cast<std::size_t>(tie_set[j])], p);
    double mean = 0.0;
    for (double v : cols[j]) mean += v;
    mean /= d;
    for (double& v : cols[j]) v -= mean;  // apply P
  }

  std::vector<double> w(m, 1.0 / static_cast<double>(m));
  std::vector<double> r(static_cast<std::size_t>(d), 0.0);  // r = P G w
  auto refresh = [&]() {
    std::fill(r.begin(), r.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j)
      for (int i = 0; i < d; ++i) r[static_cast<std::size_t>(i)] += w[j] * cols[j][static_cast<std::size_t>(i)];
  };
  refresh();
  for (int it = 0; it < 400; ++it) {
    // linear minimization of the gradient 2 G^T r over the simplex
    std::size_t jbest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += cols[j][static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
      if (dot < best) {
        best = dot;
        jbest = j;
      }
    }
    // exact step for the quadratic along (e_j - w)
    double rr = 0.0, rc = 0.0, cc = 0.0;
    for (int i = 0; i < d; ++i) {
      const double ri = r[static_cast<std::size_t>(i)];
      const double ci = cols[jbest][static_cast<std::size_t>(i)];
      rr += ri * ri;
      rc += ri * ci;
      cc += ci * ci;
    }
    const double denom = rr - 2.0 * rc + cc;
    if (denom <= 0.0) break;
    const double step = std::clamp((rr - rc) / denom, 0.0, 1.0);
    if (step <= 0.0) break;
    for (std::size_t j = 0; j < m; ++j) w[j] *= 1.0 - step;
    w[jbest] += step;
    for (int i = 0; i < d; ++i)
      r[static_cast<std::size_t>(i)] =
          (1.0 - step) * r[static_cast<std::size_t>(i)] + step * cols[jbest][static_cast<std::size_t>(i)];
  }
  double norm = 0.0;
  for (double v : r) norm += v * v;
  return std::sqrt(norm);
}

MinimaxResult finalize(const FunctionFamily& fam, FunctionTag which, SingleRun run,
                       int restart_id, int restarts) {
  MinimaxResult res;
  res.restarts = restarts;
  res.best_restart = restart_id;
  res.iterations = run.iterations;
  res.converged = run.converged;
  res.stage_best = std::move(run.stage_best);
  res.alpha_star = run.alpha;
  res.x_star = std::move(run.x);

  SimplexPoint xs{std::vector<double>(res.x_star)};
  const auto& members = fam.members(which);
  std::vector<double> values(members.size());
  double vmax = -1.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    values[i] = eval_function(members[i], xs);
    vmax = std::max(vmax, values[i]);
  }
  for (std::size_t i = 0; i < members.size(); ++i)
    if (values[i] >= vmax * (1.0 - kResultTieRelTol)) res.tie_set.push_back(static_cast<int>(i));

  const double u = 1.0 / fam.dim;
  for (double c : res.x_star)
    res.max_deviation_from_uniform = std::max(res.max_deviation_from_uniform, std::abs(c - u));
  const double cf = closed_form_alpha(fam.rank, fam.radius);
  res.relative_gap_to_closed_form = std::abs(res.alpha_star - cf) / cf;
  res.kkt_residual = kkt_residual(fam, which, res.x_star, res.tie_set);
  return res;
}

}  // namespace

double closed_form_alpha(int rank, int radius) {
  if (rank < 2 || radius < 2) throw std::invalid_argument("need rank >= 2 and radius >= 2");
  const double q = 2.0 * rank - 1.0;
  return q * (2.0 * rank * std::pow(q, radius - 1) - 1.0);
}

MinimaxResult minimize(const FunctionFamily& family, FunctionTag which, const SolverConfig& cfg) {
  const int restarts = std::max(1, cfg.restarts);
  std::vector<SingleRun> runs(static_cast<std::size_t>(restarts));

  auto run_range = [&](int lo, int hi) {
    Evaluator eval(family, which);
    for (int r = lo; r < hi; ++r) {
      auto x0 = random_interior_start(family.dim, splitmix64(cfg.seed + static_cast<std::uint64_t>(r)));
      project_start(x0);
      runs[static_cast<std::size_t>(r)] = solve_single(eval, std::move(x0), cfg);
    }
  };

  const int threads = std::clamp(cfg.threads, 1, restarts);
  if (threads == 1) {
    run_range(0, restarts);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (restarts + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(run_range, t * chunk, std::min(restarts, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (runs[static_cast<std::size_t>(r)].alpha < runs[static_cast<std::size_t>(best)].alpha) best = r;
  long total_iters = 0;
  for (const auto& r : runs) total_iters += r.iterations;
  MinimaxResult res = finalize(family, which, std::move(runs[static_cast<std::size_t>(best)]), best, restarts);
  res.iterations = total_iters;
  bool all_converged = true;
  for (const auto& r : runs) all_converged = all_converged && r.converged;
  res.converged = all_converged;
  return res;
}

MinimaxResult minimize_from(const FunctionFamily& family, FunctionTag which,
                            const SimplexPoint& start, const SolverConfig& cfg) {
  if (start.dim() != family.dim) throw std::invalid_argument("start dimension mismatch");
  Evaluator eval(family, which);
  std::vector<double> x0 = start.coords();
  project_start(x0);
  return finalize(family, which, solve_single(eval, std::move(x0), cfg), 0, 1);
}

UniformValueReport verify_uniform_optimum(const FunctionFamily& family) {
  UniformValueReport rep;
  rep.closed_form = closed_form_alpha(family.rank, family.radius);
  const SimplexPoint u = SimplexPoint::uniform(family.dim);

  double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
  for (const auto& f : family.F) {
    const double v = eval_function(f, u);
    fmin = std::min(fmin, v);
    fmax = std::max(fmax, v);
  }
  rep.alpha = fmax;
  rep.max_F_relative_spread = (fmax - fmin) / fmax;
  rep.F_matches_closed_form = std::abs(fmax - rep.closed_form) <= 1e-9 * rep.closed_form &&
                              rep.max_F_relative_spread <= 1e-12;

  std::map<int, std::pair<double, double>> strata;  // m -> (min, max)
  for (const auto& g : family.G) {
    if (g.product_length == 0) continue;
    const double v = eval_function(g, u);
    auto it = strata.find(g.product_length);
    if (it == strata.end())
      strata[g.product_length] = {v, v};
    else {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  }
  rep.g_dominated = true;
  for (const auto& [m, mm] : strata) {
    rep.g_strata.push_back({m, {mm.second, (mm.second - mm.first) / mm.second}});
    if (mm.second >= rep.alpha) rep.g_dominated = false;
  }
  return rep;
}

bool preserves_family(const FunctionFamily& family, const IndexPermutation& tau) {
  if (static_cast<int>(tau.size()) != family.dim) return false;
  std::vector<bool> seen(tau.size() + 1, false);
  for (int v : tau) {
    if (v < 1 || v > family.dim || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  for (int i = 1; i <= family.dim; ++i) {
    const auto& Ai = family.F[static_cast<std::size_t>(i - 1)].A;
    const auto& Atarget = family.F[static_cast<std::size_t>(tau[static_cast<std::size_t>(i - 1)] - 1)].A;
    std::vector<int> image;
    image.reserve(Ai.size());
    for (int l : Ai) image.push_back(tau[static_cast<std::size_t>(l - 1)]);
    std::sort(image.begin(), image.end());
    if (image != Atarget) return false;
  }
  return true;
}

SimplexPoint apply_permutation(const IndexPermutation& tau, const SimplexPoint& x) {
  std::vector<double> y(static_cast<std::size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) y[static_cast<std::size_t>(i)] = x[tau[static_cast<std::size_t>(i)] - 1];
  return SimplexPoint(std::move(y));
}

std::vector<IndexPermutation> letter_bijection_permutations(const SphereIndexing& indexing) {
  const int n = indexing.rank();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

  std::vector<IndexPermutation> out;
  do {
    for (int signs = 0; signs < (1 << n); ++signs) {
      // phi(x_g) = x_{perm(g)}^{+/-}; extend letterwise over each sphere word.
      IndexPermutation tau(static_cast<std::size_t>(indexing.size()));
      bool ok = true;
      for (int p = 1; p <= indexing.size() && ok; ++p) {
        const Word& w = indexing.word_at(p);
        std::vector<Letter> image;
        image.reserve(static_cast<std::size_t>(w.length()));
        for (int i = 0; i < w.length(); ++i) {
          Letter l = w.letter(i);
          Letter m;
          m.generator = perm[static_cast<std::size_t>(l.generator - 1)] + 1;
          m.inverted = l.inverted != (((signs >> (l.generator - 1)) & 1) != 0);
          image.push_back(m);
        }
        const auto idx = indexing.index_of(reduce(indexing.rank(), image));
        if (!idx) ok = false;
        else tau[static_cast<std::size_t>(p - 1)] = *idx;
      }
      if (ok) out.push_back(std::move(tau));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<IndexPermutation> rank2_k2_symmetries() {
  auto from_cycles = [](std::vector<std::pair<int, int>> swaps) {
    IndexPermutation tau(12);
    for (int i = 0; i < 12; ++i) tau[static_cast<std::size_t>(i)] = i + 1;
    for (auto [a, b] : swaps) std::swap(tau[static_cast<std::size_t>(a - 1)], tau[static_cast<std::size_t>(b - 1)]);
    return tau;
  };
  return {
      from_cycles({{1, 12}, {2, 10}, {3, 11}, {4, 5}, {8, 9}}),
      from_cycles({{1, 9}, {2, 8}, {3, 7}, {4, 6}, {10, 12}}),
      from_cycles({{1, 5}, {2, 6}, {3, 4}, {7, 8}, {11, 12}}),
  };
}

SymmetryReport symmetry_check(const FunctionFamily& family, const SimplexPoint& x,
                              const IndexPermutation& tau) {
  if (!preserves_family(family, tau))
    throw std::invalid_argument("permutation does not preserve the displacement family");
  SymmetryReport rep;
  const SimplexPoint tx = apply_permutation(tau, x);
  const double before = eval_F(family, x).value;
  const double after = eval_F(family, tx).value;
  rep.max_value_mismatch = std::abs(after - before) / std::max(std::abs(before), 1e-300);
  for (int i = 0; i < x.dim(); ++i)
    rep.max_displacement = std::max(rep.max_displacement, std::abs(tx[i] - x[i]));
  rep.invariant = rep.max_value_mismatch <= 1e-12;
  return rep;
}

UniquenessReport uniqueness_probe(const FunctionFamily& family, FunctionTag which,
                                  const SolverConfig& cfg) {
  UniquenessReport rep;
  const int restarts = std::max(10, cfg.restarts);
  SolverConfig single = cfg;
  single.restarts = 1;
  Evaluator eval(family, which);
  for (int r = 0; r < restarts; ++r) {
    auto x0 = random_interior_start(family.dim, splitmix64(cfg.seed + static_cast<std::uint64_t>(r)));
    project_start(x0);
    rep.runs.push_back(finalize(family, which, solve_single(eval, std::move(x0), single), r, 1));
  }
  for (std::size_t a = 0; a < rep.runs.size(); ++a)
    for (std::size_t b = a + 1; b < rep.runs.size(); ++b)
      for (int i = 0; i < family.dim; ++i)
        rep.max_pairwise_distance =
            std::max(rep.max_pairwise_distance,
                     std::abs(rep.runs[a].x_star[static_cast<std::size_t>(i)] -
                              rep.runs[b].x_star[static_cast<std::size_t>(i)]));
  rep.agree = rep.max_pairwise_distance < 1e-5;
  return rep;
}

}  // namespace dispbound
