#include "dispbound/relations.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace dispbound {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Words of the cones J_chi with k < |u| <= k+2, grouped by sphere index of
// their length-k prefix.
std::vector<std::vector<Word>> cone_probe_words(const SphereIndexing& indexing,
                                                const EnumerationConfig& cfg) {
  const int k = indexing.radius();
  std::vector<std::vector<Word>> probes(static_cast<std::size_t>(indexing.size()));
  for (int depth = k + 1; depth <= k + 2; ++depth) {
    SphereIndexing outer(indexing.rank(), depth, cfg);
    for (const Word& u : outer.words()) {
      const auto idx = indexing.index_of(u.prefix(k));
      probes[static_cast<std::size_t>(*idx - 1)].push_back(u);
    }
  }
  return probes;
}

// S(gamma) from first principles: the cones whose probe words all avoid
// gamma * J_s. The parametrization that produced the relation plays no part.
void compute_S(const SphereIndexing& indexing, const std::vector<std::vector<Word>>& probes,
               Relation& rel) {
  const Word gamma_inv = rel.gamma.inverse();
  rel.S.clear();
  for (int chi = 1; chi <= indexing.size(); ++chi) {
    bool meets = false;
    for (const Word& u : probes[static_cast<std::size_t>(chi - 1)]) {
      if (has_prefix(multiply(gamma_inv, u), rel.s_gamma)) {
        meets = true;
        break;
      }
    }
    if (!meets) rel.S.push_back(chi);
  }
}

// All admissible stems w for a fixed (psi, i): reduced words of length
// 1..max_len whose last letter avoids both psi_i (the concatenation
// w * (psi_1..psi_i)^{-1} must stay reduced) and psi_{i+1}^{-1} (the
// cancellation count must be exactly i). Letters are stored left to right.
std::vector<std::vector<std::uint8_t>> admissible_stems(const Word& psi, int i, int max_len) {
  const int rank = psi.rank();
  const int q = 2 * rank;
  std::vector<std::vector<std::uint8_t>> out;
  if (max_len < 1) return out;

  std::vector<std::vector<std::uint8_t>> layer;
  for (int c = 0; c < q; ++c) {
    if (c == letter_code(psi.letter(i - 1), rank)) continue;
    if (i < psi.length() && c == inverse_code(letter_code(psi.letter(i), rank), rank)) continue;
    layer.push_back({static_cast<std::uint8_t>(c)});
  }
  out.insert(out.end(), layer.begin(), layer.end());
  for (int len = 2; len <= max_len; ++len) {
    std::vector<std::vector<std::uint8_t>> grown;
    for (const auto& stem : layer) {
      for (int c = 0; c < q; ++c) {
        if (c == inverse_code(stem.front(), rank)) continue;
        std::vector<std::uint8_t> s;
        s.reserve(stem.size() + 1);
        s.push_back(static_cast<std::uint8_t>(c));
        s.insert(s.end(), stem.begin(), stem.end());
        grown.push_back(std::move(s));
      }
    }
    out.insert(out.end(), grown.begin(), grown.end());
    layer = std::move(grown);
  }
  return out;
}

}  // namespace

std::int64_t r_k_sum_over_cancellations(int rank, int radius) {
  if (rank < 2 || radius < 2) throw std::invalid_argument("need rank >= 2 and radius >= 2");
  const std::int64_t q = 2 * rank - 1;
  std::int64_t r = 1;  // the full cancellation gamma = psi^{-1}
  for (int i = 1; i <= radius - 1; ++i) {
    std::int64_t inner = 0;
    for (int j = 1; j <= std::min(i, radius - i); ++j) inner += ipow(q, j - 1);
    r += 1 + (q - 1) * inner;
  }
  return r;
}

std::int64_t r_k_sum_over_lengths(int rank, int radius) {
  if (rank < 2 || radius < 2) throw std::invalid_argument("need rank >= 2 and radius >= 2");
  const std::int64_t q = 2 * rank - 1;
  std::int64_t r = 0;
  for (int j = 0; j <= radius; ++j) {
    std::int64_t a;
    if (j <= 1) {
      a = 1;
    } else if (j < radius) {
      std::int64_t inner = 0;
      for (int i = 1; i <= j / 2; ++i) inner += ipow(q, i - 1);
      a = 1 + (q - 1) * inner;
    } else {
      std::int64_t inner = 0;
      for (int i = 1; i <= radius / 2; ++i) inner += ipow(q, i - 1);
      a = (q - 1) * inner;
    }
    r += a;
  }
  return r;
}

RelationCensus enumerate_relations(int rank, int radius, const EnumerationConfig& cfg,
                                   int threads) {
  if (rank < 2 || radius < 2) throw std::invalid_argument("need rank >= 2 and radius >= 2");
  SphereIndexing indexing(rank, radius, cfg);
  const auto probes = cone_probe_words(indexing, cfg);
  const int k = radius;

  std::vector<std::vector<Relation>> per_psi(static_cast<std::size_t>(indexing.size()));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int p = next.fetch_add(1);
      if (p >= indexing.size()) return;
      const Word& psi = indexing.word_at(p + 1);
      std::vector<Relation>& out = per_psi[static_cast<std::size_t>(p)];

      auto emit = [&](Word gamma) {
        Relation rel;
        rel.product_length = multiply(gamma, psi).length();
        rel.gamma = std::move(gamma);
        rel.s_gamma = psi;
        compute_S(indexing, probes, rel);
        out.push_back(std::move(rel));
      };

      for (int i = 1; i <= k; ++i) {
        const Word tail = psi.prefix(i).inverse();
        emit(tail);  // the w = 1 case
        for (const auto& stem : admissible_stems(psi, i, std::min(i, k - i)))
          emit(multiply(Word(rank, stem), tail));
      }

      std::sort(out.begin(), out.end(), [](const Relation& a, const Relation& b) {
        if (a.gamma.length() != b.gamma.length()) return a.gamma.length() < b.gamma.length();
        return a.gamma < b.gamma;
      });
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads && t < indexing.size(); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  RelationCensus census;
  census.rank = rank;
  census.radius = radius;
  for (auto& bucket : per_psi)
    for (auto& rel : bucket) {
      ++census.count_by_product_length[rel.product_length];
      census.relations.push_back(std::move(rel));
    }
  return census;
}

bool verify_relation(const SphereIndexing& indexing, const Relation& rel, int depth,
                     const EnumerationConfig& cfg) {
  const int k = indexing.radius();
  if (depth < k + 1) throw std::invalid_argument("verification depth must exceed the radius");
  std::vector<bool> excluded(static_cast<std::size_t>(indexing.size()) + 1, false);
  for (int chi : rel.S) excluded[static_cast<std::size_t>(chi)] = true;
  const Word gamma_inv = rel.gamma.inverse();
  for (int len = k + 1; len <= depth; ++len) {
    SphereIndexing outer(indexing.rank(), len, cfg);
    for (const Word& u : outer.words()) {
      const bool translated = has_prefix(multiply(gamma_inv, u), rel.s_gamma);
      const int prefix_idx = *indexing.index_of(u.prefix(k));
      const bool in_excluded = excluded[static_cast<std::size_t>(prefix_idx)];
      if (translated == in_excluded) return false;
    }
  }
  return true;
}

std::int64_t verify_census(const SphereIndexing& indexing, const RelationCensus& census,
                           int depth, const EnumerationConfig& cfg, int threads) {
  const int k = indexing.radius();
  if (depth < k + 1) throw std::invalid_argument("verification depth must exceed the radius");
  std::vector<Word> probes;
  std::vector<int> prefix_index;
  for (int len = k + 1; len <= depth; ++len) {
    SphereIndexing outer(indexing.rank(), len, cfg);
    for (const Word& u : outer.words()) {
      prefix_index.push_back(*indexing.index_of(u.prefix(k)));
      probes.push_back(u);
    }
  }

  std::atomic<std::int64_t> failures{0};
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<bool> excluded(static_cast<std::size_t>(indexing.size()) + 1, false);
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= census.relations.size()) return;
      const Relation& rel = census.relations[r];
      std::fill(excluded.begin(), excluded.end(), false);
      for (int chi : rel.S) excluded[static_cast<std::size_t>(chi)] = true;
      const Word gamma_inv = rel.gamma.inverse();
      for (std::size_t p = 0; p < probes.size(); ++p) {
        const bool translated = has_prefix(multiply(gamma_inv, probes[p]), rel.s_gamma);
        if (translated == excluded[static_cast<std::size_t>(prefix_index[p])]) {
          ++failures;
          break;
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return failures.load();
}

std::vector<Relation> length_zero_census(int rank, int radius, const EnumerationConfig& cfg) {
  SphereIndexing indexing(rank, radius, cfg);
  const auto probes = cone_probe_words(indexing, cfg);
  std::vector<Relation> out;
  out.reserve(static_cast<std::size_t>(indexing.size()));
  for (int p = 1; p <= indexing.size(); ++p) {
    Relation rel;
    rel.s_gamma = indexing.word_at(p);
    rel.gamma = rel.s_gamma.inverse();
    rel.product_length = 0;
    compute_S(indexing, probes, rel);
    out.push_back(std::move(rel));
  }
  return out;
}

std::int64_t count_relations_brute_force(int rank, int radius, const EnumerationConfig& cfg) {
  SphereIndexing indexing(rank, radius, cfg);
  std::vector<Word> ball = enumerate_ball_interior(rank, radius + 1, cfg);  // lengths 1..k
  std::int64_t count = 0;
  for (const Word& gamma : ball)
    for (const Word& psi : indexing.words())
      if (multiply(gamma, psi).length() <= radius) ++count;
  return count;
}

}  // namespace dispbound
