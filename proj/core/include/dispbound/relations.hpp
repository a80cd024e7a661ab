#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dispbound/freegroup.hpp"

namespace dispbound {

// One group-theoretical relation (gamma, s(gamma), S(gamma)) of the
// symmetric decomposition: gamma carries the cone of s(gamma) onto the
// complement of the cones indexed by S(gamma).
struct Relation {
  Word gamma;
  Word s_gamma;                 // a sphere word, length exactly k
  std::vector<int> S;           // sorted sphere indices of the excluded cones
  int product_length = 0;       // length of reduce(gamma * s_gamma), in [0, k]
};

struct RelationCensus {
  int rank = 2;
  int radius = 2;
  std::vector<Relation> relations;             // sorted by (p(s), |gamma|, gamma)
  std::map<int, std::int64_t> count_by_product_length;

  std::int64_t total() const { return static_cast<std::int64_t>(relations.size()); }
};

// Relation count per sphere word, summed over the number i of cancellations
// in gamma*s(gamma): 1 + sum_{i=1}^{k-1} (1 + (2n-2) sum_{j=1}^{min(i,k-i)} (2n-1)^{j-1}).
std::int64_t r_k_sum_over_cancellations(int rank, int radius);

// Same count summed over the product length j instead; the two routes must
// agree for every (n, k).
std::int64_t r_k_sum_over_lengths(int rank, int radius);

// Enumerates every relation of the decomposition at radius k. S(gamma) is
// recomputed from cone disjointness against the ball of radius k+2 rather
// than taken from the parametrization that drives the loop.
RelationCensus enumerate_relations(int rank, int radius, const EnumerationConfig& cfg = {},
                                   int threads = 1);

// Finite certificate of the set identity gamma*J_s = complement(J_S): every
// reduced word u with k < |u| <= depth must lie in gamma*J_s exactly when it
// lies in no excluded cone. Requires depth >= k+1.
bool verify_relation(const SphereIndexing& indexing, const Relation& rel, int depth,
                     const EnumerationConfig& cfg = {});

// Batch form sharing one probe enumeration across the census; returns the
// number of relations failing the certificate.
std::int64_t verify_census(const SphereIndexing& indexing, const RelationCensus& census,
                           int depth, const EnumerationConfig& cfg = {}, int threads = 1);

// The |Psi^k| relations with s(gamma) = gamma^{-1} (product length 0).
std::vector<Relation> length_zero_census(int rank, int radius, const EnumerationConfig& cfg = {});

// Brute-force census oracle: scans every (gamma, psi) pair over the ball and
// sphere and keeps those whose product stays inside the ball. Independent of
// the parametrized enumeration; intended for tests.
std::int64_t count_relations_brute_force(int rank, int radius, const EnumerationConfig& cfg = {});

}  // namespace dispbound
