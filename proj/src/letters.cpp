#include "rgl/letters.hpp"

namespace rgl {

Letter inverse(Letter x) { return x.inverse(); }

bool is_reduced(std::span<const Letter> w) {
  for (size_t j = 0; j + 1 < w.size(); ++j)
    if (w[j + 1] == w[j].inverse()) return false;
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> w) {
  if (!is_reduced(w)) return false;
  if (w.size() >= 2 && w.front() == w.back().inverse()) return false;
  return true;
}

bool is_proper_power(const Word& w) {
  // Smallest period via the KMP border function; w = u^k iff the smallest
  // period divides |w| properly.
  const size_t n = w.size();
  if (n < 2) return false;
  std::vector<size_t> border(n + 1, 0);
  size_t k = 0;
  for (size_t i = 1; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = border[k];
    if (w[i] == w[k]) ++k;
    border[i + 1] = k;
  }
  size_t period = n - border[n];
  return period < n && n % period == 0;
}

std::string word_to_string(std::span<const Letter> w) {
  std::string s;
  s.reserve(w.size());
  for (Letter x : w) s.push_back(x.to_char());
  return s;
}

Word word_from_string(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(Letter::from_char(c));
  return w;
}

std::uint64_t reduced_word_count(int m, int l, std::uint64_t cap) {
  if (m < 1 || l < 0) throw std::invalid_argument("reduced_word_count: need m >= 1, l >= 0");
  if (l == 0) return 1;
  std::uint64_t count = std::uint64_t(2) * m;
  const std::uint64_t step = std::uint64_t(2) * m - 1;
  for (int i = 1; i < l; ++i) {
    if (step != 0 && count > cap / step + 1) count = cap + 1;
    else count *= step;
    if (count > cap)
      throw CapExceededError("reduced_word_count: 2m(2m-1)^(l-1) exceeds cap " +
                             std::to_string(cap));
  }
  if (count > cap)
    throw CapExceededError("reduced_word_count: 2m(2m-1)^(l-1) exceeds cap " +
                           std::to_string(cap));
  return count;
}

std::vector<Word> enumerate_reduced_words(int m, int l, std::uint64_t cap) {
  std::uint64_t total = reduced_word_count(m, l, cap);
  std::vector<Word> out;
  out.reserve(total);
  if (l == 0) {
    out.emplace_back();
    return out;
  }
  Word w(l);
  // Odometer over dense letter indices, skipping cancellations.
  std::vector<int> idx(l, 0);
  const int a = 2 * m;
  auto ok_at = [&](int pos) {
    if (pos == 0) return true;
    return idx[pos] != (idx[pos - 1] ^ 1);
  };
  int pos = 0;
  idx[0] = -1;
  for (;;) {
    // advance position `pos` to its next valid value
    bool moved = false;
    for (int v = idx[pos] + 1; v < a; ++v) {
      idx[pos] = v;
      if (ok_at(pos)) { moved = true; break; }
    }
    if (!moved) {
      if (pos == 0) break;
      --pos;
      continue;
    }
    if (pos + 1 == l) {
      for (int i = 0; i < l; ++i) w[i] = Letter::from_index(idx[i]);
      out.push_back(w);
    } else {
      ++pos;
      idx[pos] = -1;
    }
  }
  return out;
}

}  // namespace rgl
