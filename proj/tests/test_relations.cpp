#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "dispbound/json_io.hpp"
#include "dispbound/relations.hpp"

using namespace dispbound;

#ifndef DISPBOUND_TABLES_DIR
#define DISPBOUND_TABLES_DIR "tables"
#endif

namespace {

const std::string kTables = DISPBOUND_TABLES_DIR;

std::vector<GoldenRelation> k2_tables() {
  auto all = load_golden_table(kTables + "/k2_table1.json");
  for (const char* name : {"/k2_table2.json", "/k2_table3.json"}) {
    auto next = load_golden_table(kTables + name);
    all.insert(all.end(), next.begin(), next.end());
  }
  return all;
}

}  // namespace

TEST_CASE("per-word relation count, summed over cancellations") {
  CHECK(r_k_sum_over_cancellations(2, 2) == 4);
  CHECK(r_k_sum_over_cancellations(2, 3) == 7);
  CHECK(r_k_sum_over_cancellations(2, 4) == 16);
}

TEST_CASE("per-word relation count, summed over product lengths") {
  // k=2: a = (1,1,2); k=3: a = (1,1,3,2)
  CHECK(r_k_sum_over_lengths(2, 2) == 4);
  CHECK(r_k_sum_over_lengths(2, 3) == 7);
}

TEST_CASE("the two counting routes agree") {
  for (int n = 2; n <= 4; ++n)
    for (int k = 2; k <= 8; ++k)
      CHECK(r_k_sum_over_cancellations(n, k) == r_k_sum_over_lengths(n, k));
}

TEST_CASE("census totals match the closed form and the brute-force scan") {
  for (int k = 2; k <= 4; ++k) {
    const auto census = enumerate_relations(2, k);
    CHECK(census.total() == r_k_sum_over_cancellations(2, k) * sphere_size(2, k));
    CHECK(census.total() == count_relations_brute_force(2, k));
  }
  CHECK(enumerate_relations(2, 2).total() == 48);
  CHECK(enumerate_relations(2, 3).total() == 252);
  CHECK(enumerate_relations(2, 4).total() == 1728);

  const auto census32 = enumerate_relations(3, 2);
  CHECK(census32.total() == 30 * r_k_sum_over_cancellations(3, 2));
  CHECK(census32.total() == count_relations_brute_force(3, 2));
}

TEST_CASE("radius-5 census total") {
  CHECK(enumerate_relations(2, 5).total() == 4 * r_k_sum_over_cancellations(2, 5) * 81);
}

TEST_CASE("product length histogram at radius 2") {
  const auto census = enumerate_relations(2, 2);
  REQUIRE(census.count_by_product_length.size() == 3);
  CHECK(census.count_by_product_length.at(0) == 12);
  CHECK(census.count_by_product_length.at(1) == 12);
  CHECK(census.count_by_product_length.at(2) == 24);
}

TEST_CASE("radius-2 census equals the transcribed tables") {
  const SphereIndexing indexing(2, 2);
  const auto census = enumerate_relations(2, 2);
  const auto diffs = diff_against_golden(census.relations, indexing, k2_tables());
  for (const auto& d : diffs) MESSAGE(d);
  CHECK(diffs.empty());
}

TEST_CASE("radius-3 inverse-pair census equals the transcribed table") {
  const SphereIndexing indexing(2, 3);
  const auto zero = length_zero_census(2, 3);
  REQUIRE(zero.size() == 36);
  const auto diffs =
      diff_against_golden(zero, indexing, load_golden_table(kTables + "/k3_table4.json"));
  for (const auto& d : diffs) MESSAGE(d);
  CHECK(diffs.empty());

  // and it agrees with the product-length-0 slice of the full census
  const auto census = enumerate_relations(2, 3);
  std::vector<Relation> slice;
  for (const auto& rel : census.relations)
    if (rel.product_length == 0) slice.push_back(rel);
  REQUIRE(slice.size() == 36);
  std::vector<GoldenRelation> as_golden;
  for (const auto& rel : zero) {
    GoldenRelation g;
    g.gamma = word_to_string(rel.gamma);
    g.s = word_to_string(rel.s_gamma);
    for (int idx : rel.S) g.S.push_back(word_to_string(indexing.word_at(idx)));
    as_golden.push_back(std::move(g));
  }
  CHECK(diff_against_golden(slice, indexing, as_golden).empty());
}

TEST_CASE("spotlight relations from the radius-2 tables") {
  const SphereIndexing indexing(2, 2);
  const auto census = enumerate_relations(2, 2);
  auto find = [&](const std::string& gamma, const std::string& s) -> const Relation& {
    for (const auto& rel : census.relations)
      if (word_to_string(rel.gamma) == gamma && word_to_string(rel.s_gamma) == s) return rel;
    REQUIRE(false);
    return census.relations.front();
  };

  // (x^2, x^-2, {x^2, xy, xY}) -> indices {1,2,3}
  const Relation& r1 = find("xx", "XX");
  CHECK(r1.S == std::vector<int>{1, 2, 3});
  CHECK(r1.product_length == 0);

  // (x^-1, x^2, complement of the x block)
  const Relation& r2 = find("X", "xx");
  CHECK(r2.S == std::vector<int>{4, 5, 6, 7, 8, 9, 10, 11, 12});
  CHECK(r2.product_length == 1);

  // (yx^-1, x^2, everything but yx); p(yx) = 9
  const Relation& r3 = find("yX", "xx");
  CHECK(r3.S == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12});
  CHECK(r3.product_length == 2);
}

TEST_CASE("every enumerated relation passes the cone identity check") {
  for (int k = 2; k <= 3; ++k) {
    const SphereIndexing indexing(2, k);
    const auto census = enumerate_relations(2, k);
    for (const auto& rel : census.relations) CHECK(verify_relation(indexing, rel, k + 2));
  }
}

TEST_CASE("corrupted relations fail verification") {
  const SphereIndexing indexing(2, 2);
  const auto census = enumerate_relations(2, 2);
  const Relation& good = census.relations.front();

  Relation dropped = good;
  dropped.S.pop_back();
  CHECK_FALSE(verify_relation(indexing, dropped, 4));

  Relation padded = good;
  for (int i = 1; i <= 12; ++i)
    if (!std::count(padded.S.begin(), padded.S.end(), i)) {
      padded.S.push_back(i);
      break;
    }
  std::sort(padded.S.begin(), padded.S.end());
  CHECK_FALSE(verify_relation(indexing, padded, 4));

  // the spec's corrupted example: (x^2, x^-2, {x^2, xy}) with one cone gone
  Relation spec_mutant;
  spec_mutant.gamma = word_from_string(2, "xx");
  spec_mutant.s_gamma = word_from_string(2, "XX");
  spec_mutant.S = {1, 3};
  spec_mutant.product_length = 0;
  CHECK_FALSE(verify_relation(indexing, spec_mutant, 4));
}

TEST_CASE("decomposition partition covers the ball exactly once") {
  const int k = 2;
  const SphereIndexing indexing(2, k);
  for (int len = 1; len <= k + 2; ++len) {
    const SphereIndexing outer(2, len);
    for (const Word& u : outer.words()) {
      int hits = u.length() < k ? 1 : 0;  // interior membership
      for (const Word& psi : indexing.words())
        if (has_prefix(u, psi)) ++hits;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("census order is deterministic") {
  const SphereIndexing indexing(2, 3);
  const auto census = enumerate_relations(2, 3);
  const auto threaded = enumerate_relations(2, 3, {}, 4);
  REQUIRE(census.total() == threaded.total());
  for (std::size_t i = 0; i < census.relations.size(); ++i) {
    CHECK(census.relations[i].gamma == threaded.relations[i].gamma);
    CHECK(census.relations[i].s_gamma == threaded.relations[i].s_gamma);
    CHECK(census.relations[i].S == threaded.relations[i].S);
  }
  for (std::size_t i = 1; i < census.relations.size(); ++i) {
    const auto& a = census.relations[i - 1];
    const auto& b = census.relations[i];
    const int pa = *indexing.index_of(a.s_gamma), pb = *indexing.index_of(b.s_gamma);
    const bool ordered =
        pa < pb || (pa == pb && (a.gamma.length() < b.gamma.length() ||
                                 (a.gamma.length() == b.gamma.length() && a.gamma < b.gamma)));
    CHECK(ordered);
  }
}

TEST_CASE("exactly one inverse-pair relation per sphere word") {
  const SphereIndexing indexing(2, 3);
  const auto census = enumerate_relations(2, 3);
  std::map<int, int> zero_per_target;
  for (const auto& rel : census.relations) {
    if (rel.product_length != 0) continue;
    const int p = *indexing.index_of(rel.s_gamma);
    ++zero_per_target[p];
    CHECK(rel.gamma == rel.s_gamma.inverse());
    CHECK(static_cast<int>(rel.S.size()) == indexing.block_size());
    // the excluded block shares the first letter of gamma
    const auto [lo, hi] = indexing.block_range((rel.gamma.code(0)) + 1);
    CHECK(rel.S.front() == lo);
    CHECK(rel.S.back() == hi);
  }
  CHECK(static_cast<int>(zero_per_target.size()) == indexing.size());
}
