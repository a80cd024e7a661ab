#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dispbound {

// Thrown when an enumeration would exceed the configured word cap.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// One generator or inverse generator of the rank-n free group.
struct Letter {
  int generator = 1;      // 1-based generator index
  bool inverted = false;

  friend bool operator==(const Letter&, const Letter&) = default;
};

// Letters are ordered along an inverse-palindromic cycle of length 2n:
// for n=2 the cycle is (x, Y, y, X); positions j and 2n-1-j are inverses.
// All index arithmetic below (blocks, residue classes) lives on this cycle.
int letter_code(const Letter& l, int rank);
Letter code_letter(int code, int rank);
inline int inverse_code(int code, int rank) { return 2 * rank - 1 - code; }

// A reduced word in the rank-n free group. The empty word is the identity.
class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) { check_rank(rank); }
  Word(int rank, std::vector<std::uint8_t> reduced_codes);

  static Word identity(int rank) { return Word(rank); }
  static Word from_letters(int rank, const std::vector<Letter>& letters);

  int rank() const { return rank_; }
  int length() const { return static_cast<int>(codes_.size()); }
  bool is_identity() const { return codes_.empty(); }

  std::uint8_t code(int pos) const { return codes_[static_cast<std::size_t>(pos)]; }
  Letter letter(int pos) const { return code_letter(codes_[static_cast<std::size_t>(pos)], rank_); }
  const std::vector<std::uint8_t>& codes() const { return codes_; }

  Word inverse() const;
  Word prefix(int len) const;

  friend bool operator==(const Word&, const Word&) = default;
  // Lexicographic on letter codes, shorter words first on ties.
  friend bool operator<(const Word& a, const Word& b) {
    return a.codes_ < b.codes_;
  }

 private:
  static void check_rank(int rank) {
    if (rank < 2) throw std::invalid_argument("free group rank must be >= 2");
  }

  int rank_ = 2;
  std::vector<std::uint8_t> codes_;
};

// Free reduction of an arbitrary letter sequence; idempotent.
Word reduce(int rank, const std::vector<Letter>& seq);

// Group product: concatenate then cancel at the junction.
Word multiply(const Word& a, const Word& b);

// True iff the first length(psi) letters of u equal psi.
bool has_prefix(const Word& u, const Word& psi);

// Serialization over {"x","X","y","Y","z","Z","a","A",...}; uppercase marks
// the inverse ("xYX" is x y^-1 x^-1). Empty string is the identity.
std::string word_to_string(const Word& w);
Word word_from_string(int rank, const std::string& s);

struct EnumerationConfig {
  // Refuse sphere/ball enumerations beyond this many words.
  std::int64_t word_cap = 1'000'000;
};

// The sphere of radius k with the canonical index map p : words -> [1, d],
// d = 2n(2n-1)^{k-1}. Words at index i end with the cycle letter of class
// i mod 2n and first-letter groups occupy the contiguous blocks
// I_j = {(j-1)(2n-1)^{k-1}+1, ..., j(2n-1)^{k-1}}.
class SphereIndexing {
 public:
  SphereIndexing(int rank, int radius, const EnumerationConfig& cfg = {});

  int rank() const { return rank_; }
  int radius() const { return radius_; }
  int size() const { return static_cast<int>(words_.size()); }

  // 1-based index access; word_at(p) is the word with p(word) = p.
  const Word& word_at(int index) const { return words_[static_cast<std::size_t>(index - 1)]; }
  const std::vector<Word>& words() const { return words_; }

  // p(w), or nullopt if w does not lie on this sphere.
  std::optional<int> index_of(const Word& w) const;

  // Block of sphere indices sharing a fixed first letter (1-based block id
  // in cycle order; 2n blocks of size (2n-1)^{k-1}).
  std::pair<int, int> block_range(int block) const;
  int block_count() const { return 2 * rank_; }
  int block_size() const;

  // Indices of sphere words having `prefix` as initial word: a contiguous
  // range [lo, hi], empty (lo > hi) if no sphere word extends the prefix.
  std::pair<int, int> cone_range(const Word& prefix) const;

 private:
  int rank_;
  int radius_;
  std::vector<Word> words_;
};

// All non-identity words of length < k, ordered by (length, index within
// the length-l sphere).
std::vector<Word> enumerate_ball_interior(int rank, int radius,
                                          const EnumerationConfig& cfg = {});

// Number of reduced words of length exactly k: 2n(2n-1)^{k-1}.
std::int64_t sphere_size(int rank, int radius);

}  // namespace dispbound
