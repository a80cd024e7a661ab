#include "dispbound/freegroup.hpp"

#include <algorithm>
#include <cctype>

namespace dispbound {

namespace {

constexpr const char kGeneratorChars[] = "xyzabcdefghijklmnopqrstuvw";

void check_letter(const Letter& l, int rank) {
  if (l.generator < 1 || l.generator > rank)
    throw std::invalid_argument("letter generator index out of range");
}

}  // namespace

int letter_code(const Letter& l, int rank) {
  check_letter(l, rank);
  // First half of the cycle: x_1, x_2^-1, x_3, x_4^-1, ...; the second half
  // mirrors the first with inverses, so inverse_code(c) = 2n-1-c.
  const int g = l.generator - 1;
  const bool first_half_inverted = (g % 2 == 1);
  if (l.inverted == first_half_inverted) return g;
  return 2 * rank - 1 - g;
}

Letter code_letter(int code, int rank) {
  if (code < 0 || code >= 2 * rank) throw std::invalid_argument("letter code out of range");
  const int mirrored = (code < rank) ? code : 2 * rank - 1 - code;
  Letter l;
  l.generator = mirrored + 1;
  l.inverted = (code < rank) ? (mirrored % 2 == 1) : (mirrored % 2 == 0);
  return l;
}

Word::Word(int rank, std::vector<std::uint8_t> reduced_codes) : rank_(rank), codes_(std::move(reduced_codes)) {
  check_rank(rank);
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (codes_[i] >= 2 * rank) throw std::invalid_argument("letter code out of range");
    if (i > 0 && codes_[i] == inverse_code(codes_[i - 1], rank))
      throw std::invalid_argument("letter sequence is not reduced");
  }
}

Word Word::from_letters(int rank, const std::vector<Letter>& letters) {
  return reduce(rank, letters);
}

Word Word::inverse() const {
  std::vector<std::uint8_t> inv(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i)
    inv[codes_.size() - 1 - i] = static_cast<std::uint8_t>(inverse_code(codes_[i], rank_));
  Word w(rank_);
  w.codes_ = std::move(inv);
  return w;
}

Word Word::prefix(int len) const {
  if (len < 0 || len > length()) throw std::invalid_argument("prefix length out of range");
  Word w(rank_);
  w.codes_.assign(codes_.begin(), codes_.begin() + len);
  return w;
}

Word reduce(int rank, const std::vector<Letter>& seq) {
  Word w(rank);
  std::vector<std::uint8_t> stack;
  stack.reserve(seq.size());
  for (const Letter& l : seq) {
    const int c = letter_code(l, rank);
    if (!stack.empty() && stack.back() == inverse_code(c, rank))
      stack.pop_back();
    else
      stack.push_back(static_cast<std::uint8_t>(c));
  }
  return Word(rank, std::move(stack));
}

Word multiply(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("rank mismatch in word product");
  std::vector<std::uint8_t> out(a.codes());
  for (std::uint8_t c : b.codes()) {
    if (!out.empty() && out.back() == inverse_code(c, a.rank()))
      out.pop_back();
    else
      out.push_back(c);
  }
  return Word(a.rank(), std::move(out));
}

bool has_prefix(const Word& u, const Word& psi) {
  if (u.length() < psi.length()) return false;
  return std::equal(psi.codes().begin(), psi.codes().end(), u.codes().begin());
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(static_cast<std::size_t>(w.length()));
  for (int i = 0; i < w.length(); ++i) {
    const Letter l = w.letter(i);
    char c = kGeneratorChars[l.generator - 1];
    s.push_back(l.inverted ? static_cast<char>(std::toupper(c)) : c);
  }
  return s;
}

Word word_from_string(int rank, const std::string& s) {
  if (rank > static_cast<int>(sizeof(kGeneratorChars)) - 1)
    throw std::invalid_argument("rank too large for string encoding");
  std::vector<Letter> letters;
  letters.reserve(s.size());
  for (char c : s) {
    const bool inverted = std::isupper(static_cast<unsigned char>(c)) != 0;
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const char* pos = std::char_traits<char>::find(kGeneratorChars, sizeof(kGeneratorChars) - 1, lower);
    if (pos == nullptr || (pos - kGeneratorChars) >= rank)
      throw std::invalid_argument(std::string("unknown generator letter '") + c + "'");
    letters.push_back({static_cast<int>(pos - kGeneratorChars) + 1, inverted});
  }
  return reduce(rank, letters);
}

std::int64_t sphere_size(int rank, int radius) {
  if (rank < 2 || radius < 1) throw std::invalid_argument("need rank >= 2 and radius >= 1");
  std::int64_t s = 2 * rank;
  for (int i = 1; i < radius; ++i) s *= 2 * rank - 1;
  return s;
}

SphereIndexing::SphereIndexing(int rank, int radius, const EnumerationConfig& cfg)
    : rank_(rank), radius_(radius) {
  const std::int64_t d = sphere_size(rank, radius);
  if (d > cfg.word_cap)
    throw capacity_error("sphere of " + std::to_string(d) + " words exceeds cap " +
                         std::to_string(cfg.word_cap));

  // Level 1 is the letter cycle itself; each further level places the
  // extensions of the r-th word at positions (2n-1)(r-1)+1 .. (2n-1)r, and
  // position p gets the letter of cycle class p mod 2n. Exactly one class is
  // forbidden per row (the cancelling letter), and it is always the omitted
  // one, so the placement is total.
  const int q = 2 * rank;
  std::vector<Word> level;
  level.reserve(static_cast<std::size_t>(q));
  for (int c = 0; c < q; ++c) level.push_back(Word(rank, {static_cast<std::uint8_t>(c)}));

  for (int len = 2; len <= radius; ++len) {
    std::vector<Word> next(level.size() * static_cast<std::size_t>(q - 1), Word(rank));
    for (std::size_t r = 0; r < level.size(); ++r) {
      const Word& prefix = level[r];
      const int forbidden = inverse_code(prefix.code(prefix.length() - 1), rank);
      const std::int64_t row_lo = static_cast<std::int64_t>(q - 1) * static_cast<std::int64_t>(r) + 1;
      for (int c = 0; c < q; ++c) {
        if (c == forbidden) continue;
        // Unique position in the row whose 1-based index is congruent to the
        // letter's class: class(cycle position c) = c+1 mod 2n.
        const int cls = (c + 1) % q;
        std::int64_t p = row_lo + ((cls - row_lo) % q + q) % q;
        std::vector<std::uint8_t> codes = prefix.codes();
        codes.push_back(static_cast<std::uint8_t>(c));
        next[static_cast<std::size_t>(p - 1)] = Word(rank, std::move(codes));
      }
    }
    level = std::move(next);
  }
  words_ = std::move(level);
}

std::optional<int> SphereIndexing::index_of(const Word& w) const {
  if (w.rank() != rank_ || w.length() != radius_) return std::nullopt;
  const int q = 2 * rank_;
  // Same positional recursion as the constructor, one level at a time.
  std::int64_t r = w.code(0) + 1;
  for (int len = 1; len < radius_; ++len) {
    const std::int64_t row_lo = static_cast<std::int64_t>(q - 1) * (r - 1) + 1;
    const int cls = (w.code(len) + 1) % q;
    r = row_lo + ((cls - row_lo) % q + q) % q;
  }
  return static_cast<int>(r);
}

int SphereIndexing::block_size() const {
  std::int64_t s = 1;
  for (int i = 1; i < radius_; ++i) s *= 2 * rank_ - 1;
  return static_cast<int>(s);
}

std::pair<int, int> SphereIndexing::block_range(int block) const {
  if (block < 1 || block > block_count()) throw std::invalid_argument("block out of range");
  const int bs = block_size();
  return {(block - 1) * bs + 1, block * bs};
}

std::pair<int, int> SphereIndexing::cone_range(const Word& prefix) const {
  if (prefix.rank() != rank_ || prefix.is_identity() || prefix.length() > radius_)
    return {1, 0};
  const int q = 2 * rank_;
  std::int64_t r = prefix.code(0) + 1;
  for (int len = 1; len < prefix.length(); ++len) {
    const std::int64_t row_lo = static_cast<std::int64_t>(q - 1) * (r - 1) + 1;
    const int cls = (prefix.code(len) + 1) % q;
    r = row_lo + ((cls - row_lo) % q + q) % q;
  }
  std::int64_t span = 1;
  for (int i = prefix.length(); i < radius_; ++i) span *= q - 1;
  return {static_cast<int>((r - 1) * span + 1), static_cast<int>(r * span)};
}

std::vector<Word> enumerate_ball_interior(int rank, int radius, const EnumerationConfig& cfg) {
  if (radius < 2) throw std::invalid_argument("ball interior needs radius >= 2");
  std::int64_t total = 0;
  for (int l = 1; l < radius; ++l) total += sphere_size(rank, l);
  if (total > cfg.word_cap)
    throw capacity_error("ball of " + std::to_string(total) + " words exceeds cap " +
                         std::to_string(cfg.word_cap));
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(total));
  for (int l = 1; l < radius; ++l) {
    SphereIndexing sphere(rank, l, cfg);
    out.insert(out.end(), sphere.words().begin(), sphere.words().end());
  }
  return out;
}

}  // namespace dispbound
