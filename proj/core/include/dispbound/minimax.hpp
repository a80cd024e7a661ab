#pragma once

#include <cstdint>
#include <vector>

#include "dispbound/dispfun.hpp"

namespace dispbound {

// (2n-1)(2n(2n-1)^{k-1} - 1); equals 12*3^{k-1} - 3 at rank 2.
double closed_form_alpha(int rank, int radius);

struct SolverConfig {
  double tol = 1e-9;             // relative objective stall for termination
  int max_iter = 4000;           // per annealing stage
  int subgradient_iters = 2000;
  int restarts = 10;
  std::uint64_t seed = 42;
  double kkt_tol = 1e-6;
  int threads = 1;
  double temperature_start = 1.0;
  double temperature_end = 1e-4;
  double temperature_factor = 0.7;
};

struct MinimaxResult {
  std::vector<double> x_star;
  double alpha_star = 0.0;
  long iterations = 0;
  int restarts = 0;
  int best_restart = 0;
  std::vector<int> tie_set;            // members within relative 1e-5 of the max
  bool converged = false;
  double max_deviation_from_uniform = 0.0;
  double relative_gap_to_closed_form = 0.0;
  double kkt_residual = 0.0;           // projected norm of the tie-gradient hull point
  std::vector<double> stage_best;      // best true objective after each stage
};

// Entropic mirror descent over the open simplex: a log-sum-exp smoothing
// stage with annealed temperature followed by a c/sqrt(t) subgradient polish
// (tie-averaged subgradient of the max). Deterministic given the seed.
// Non-convergence is flagged, never thrown.
MinimaxResult minimize(const FunctionFamily& family, FunctionTag which, const SolverConfig& cfg);

// Single descent from a caller-supplied interior start (restart machinery
// bypassed); used for adversarial-start studies.
MinimaxResult minimize_from(const FunctionFamily& family, FunctionTag which,
                            const SimplexPoint& start, const SolverConfig& cfg);

struct UniformValueReport {
  double alpha = 0.0;                       // common F value at the uniform point
  double closed_form = 0.0;
  double max_F_relative_spread = 0.0;
  bool F_matches_closed_form = false;
  // product length -> (value, max relative spread inside the stratum)
  std::vector<std::pair<int, std::pair<double, double>>> g_strata;
  bool g_dominated = false;                 // every g value strictly below alpha
};

// Evaluates every family member at the uniform point and checks the F-level
// closed form plus strict domination of the g strata.
UniformValueReport verify_uniform_optimum(const FunctionFamily& family);

// Index permutation in one-line form: tau[i-1] is the image of i (1-based).
using IndexPermutation = std::vector<int>;

// tau preserves the F family iff tau(A_i) = A_{tau(i)} for every member.
bool preserves_family(const FunctionFamily& family, const IndexPermutation& tau);

// y with y_i = x_{tau(i)}.
SimplexPoint apply_permutation(const IndexPermutation& tau, const SimplexPoint& x);

// Permutations of sphere indices induced by relabelings of the generator set
// (signed generator permutations); always family-preserving.
std::vector<IndexPermutation> letter_bijection_permutations(const SphereIndexing& indexing);

// The three explicit block-swapping cycles on d = 12 used by the rank-2,
// radius-2 uniqueness argument.
std::vector<IndexPermutation> rank2_k2_symmetries();

struct SymmetryReport {
  double max_value_mismatch = 0.0;   // relative |F(T x) - F(x)| over the checks
  double max_displacement = 0.0;     // ||T x - x||_inf
  bool invariant = false;            // mismatch below 1e-12
};

// Asserts eval invariance of the max under a family-preserving permutation;
// throws std::invalid_argument if tau does not preserve the family.
SymmetryReport symmetry_check(const FunctionFamily& family, const SimplexPoint& x,
                              const IndexPermutation& tau);

struct UniquenessReport {
  std::vector<MinimaxResult> runs;
  double max_pairwise_distance = 0.0;  // inf-norm over restart pairs
  bool agree = false;                  // below 1e-5
};

// Multi-start agreement probe (restarts >= 10 recommended).
UniquenessReport uniqueness_probe(const FunctionFamily& family, FunctionTag which,
                                  const SolverConfig& cfg);

}  // namespace dispbound
