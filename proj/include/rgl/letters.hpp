// Letters of the free group on m generators and reduced words. Words are the
// alphabet for relators and for the exhaustive counting oracles.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgl {

class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// A generator or its formal inverse, stored as a nonzero signed index:
// +g for the g-th generator, -g for its inverse. Generators are 1-based.
class Letter {
 public:
  constexpr Letter() = default;
  Letter(int gen, int sign) {
    if (gen < 1) throw std::invalid_argument("Letter: generator must be >= 1");
    if (sign != 1 && sign != -1) throw std::invalid_argument("Letter: sign must be +1 or -1");
    v_ = static_cast<std::int16_t>(sign > 0 ? gen : -gen);
  }

  static Letter from_value(int v) {
    if (v == 0) throw std::invalid_argument("Letter: zero value");
    Letter x;
    x.v_ = static_cast<std::int16_t>(v);
    return x;
  }

  // Dense index 0..2m-1 in the order a, a^-1, b, b^-1, ...
  static Letter from_index(int idx) {
    int gen = idx / 2 + 1;
    return Letter(gen, (idx & 1) ? -1 : 1);
  }

  static Letter from_char(char c);

  int gen() const { return v_ < 0 ? -v_ : v_; }
  int sign() const { return v_ < 0 ? -1 : 1; }
  int value() const { return v_; }
  int index() const { return (gen() - 1) * 2 + (v_ < 0 ? 1 : 0); }
  bool valid() const { return v_ != 0; }

  Letter inverse() const { return from_value(-v_); }

  // Lowercase for positive letters, uppercase for inverses; generators a..z.
  char to_char() const {
    int g = gen();
    if (g > 26) throw std::domain_error("Letter: only generators a..z serialize to text");
    return char((v_ < 0 ? 'A' : 'a') + g - 1);
  }

  friend bool operator==(Letter a, Letter b) { return a.v_ == b.v_; }
  friend bool operator!=(Letter a, Letter b) { return a.v_ != b.v_; }
  friend bool operator<(Letter a, Letter b) { return a.v_ < b.v_; }

 private:
  std::int16_t v_ = 0;
};

inline Letter Letter::from_char(char c) {
  if (c >= 'a' && c <= 'z') return Letter(c - 'a' + 1, 1);
  if (c >= 'A' && c <= 'Z') return Letter(c - 'A' + 1, -1);
  throw std::invalid_argument(std::string("Letter: bad character '") + c + "'");
}

using Word = std::vector<Letter>;

Letter inverse(Letter x);

// True iff no adjacent pair of mutually inverse letters.
bool is_reduced(std::span<const Letter> w);

// True iff additionally the first and last letters are not inverse.
bool is_cyclically_reduced(std::span<const Letter> w);

// True iff w is u^k as a literal concatenation for some k >= 2.
bool is_proper_power(const Word& w);

std::string word_to_string(std::span<const Letter> w);
Word word_from_string(std::string_view text);

// 2m * (2m-1)^(l-1), the number of reduced words of length l. Throws
// CapExceededError when above cap.
std::uint64_t reduced_word_count(int m, int l, std::uint64_t cap);

// All reduced words of length l in a fixed deterministic order (letters
// compared by dense index, lexicographically).
std::vector<Word> enumerate_reduced_words(int m, int l, std::uint64_t cap = 10'000'000);

}  // namespace rgl
