#include "rgl/presentation.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "json.hpp"

namespace rgl {

std::uint64_t relator_count(int m, int l, const Rational& d, std::uint64_t cap) {
  if (m < 2) throw ValidationError("relator_count: need m >= 2");
  if (l < 2) throw ValidationError("relator_count: need l >= 2");
  if (!(Rational(0, 1) < d && d < Rational(1, 1)))
    throw ValidationError("relator_count: need 0 < d < 1");
  const long long base = 2LL * m - 1;
  const long long en = d.num() * (long long)l;
  const long long ed = d.den();
  std::uint64_t count;
  if (en % ed == 0) {
    long long e = en / ed;
    __int128 acc = 1;
    for (long long i = 0; i < e; ++i) {
      acc *= base;
      if (acc > (__int128)cap)
        throw CapExceededError("relator_count: (2m-1)^(dl) exceeds cap " + std::to_string(cap));
    }
    count = (std::uint64_t)acc;
  } else {
    long double v = powl((long double)base, (long double)en / (long double)ed);
    // pow is not exact; nudge by a relative epsilon so that mathematically
    // integral exponents never floor one short.
    long double nudged = v * (1.0L + 1e-15L) + 1e-12L;
    if (nudged > (long double)cap)
      throw CapExceededError("relator_count: (2m-1)^(dl) exceeds cap " + std::to_string(cap));
    count = (std::uint64_t)floorl(nudged);
  }
  if (count < 1)
    throw ValidationError("relator_count: floor((2m-1)^(dl)) < 1; raise d or l");
  if (count > cap)
    throw CapExceededError("relator_count: (2m-1)^(dl) exceeds cap " + std::to_string(cap));
  return count;
}

Word sample_reduced_word(int m, int l, Rng& rng) {
  if (m < 1 || l < 1) throw ValidationError("sample_reduced_word: need m >= 1, l >= 1");
  Word w;
  w.reserve(l);
  int prev_inv = -1;  // dense index forbidden at the current position
  for (int i = 0; i < l; ++i) {
    int idx;
    if (i == 0) {
      idx = (int)rng.below(2 * (std::uint64_t)m);
    } else {
      idx = (int)rng.below(2 * (std::uint64_t)m - 1);
      if (idx >= prev_inv) ++idx;
    }
    w.push_back(Letter::from_index(idx));
    prev_inv = idx ^ 1;
  }
  return w;
}

Word sample_cyclically_reduced_word(int m, int l, Rng& rng) {
  for (;;) {
    Word w = sample_reduced_word(m, l, rng);
    if (is_cyclically_reduced(w)) return w;
  }
}

Presentation sample_presentation(int m, int l, const Rational& d, Rng& rng,
                                 const SampleOptions& opts) {
  std::uint64_t n = relator_count(m, l, d, opts.relator_cap);
  Presentation p;
  p.m = m;
  p.l = l;
  p.d = d;
  p.relators.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    p.relators.push_back(opts.cyclically_reduced
                             ? sample_cyclically_reduced_word(m, l, rng)
                             : sample_reduced_word(m, l, rng));
  }
  std::map<Word, int> seen;
  for (int i = 0; i < (int)p.relators.size(); ++i) {
    auto [it, inserted] = seen.emplace(p.relators[i], i);
    if (!inserted) p.duplicate_pairs.emplace_back(it->second, i);
    if (is_proper_power(p.relators[i])) p.proper_power_indices.push_back(i);
  }
  if (opts.strict && !p.duplicate_pairs.empty())
    throw ValidationError("sample_presentation: duplicate relators under --strict (first pair: " +
                          std::to_string(p.duplicate_pairs[0].first) + "," +
                          std::to_string(p.duplicate_pairs[0].second) + ")");
  return p;
}

std::string presentation_to_json(const Presentation& p, std::optional<std::uint64_t> seed) {
  nlohmann::ordered_json j;
  j["m"] = p.m;
  j["l"] = p.l;
  j["d"] = p.d.to_double();
  j["d_exact"] = p.d.str();
  if (seed) j["seed"] = *seed;
  auto rel = nlohmann::ordered_json::array();
  for (const auto& w : p.relators) rel.push_back(word_to_string(w));
  j["relators"] = std::move(rel);
  return j.dump(2) + "\n";
}

Presentation presentation_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Presentation p;
  try {
    p.m = j.at("m").get<int>();
    p.l = j.at("l").get<int>();
    if (j.contains("d_exact"))
      p.d = Rational::from_decimal(j.at("d_exact").get<std::string>());
    else {
      // Shortest round-trip text, so 0.3 parses back to exactly 3/10.
      double dv = j.at("d").get<double>();
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, dv);
      p.d = Rational::from_decimal(std::string_view(buf, res.ptr - buf));
    }
    for (const auto& r : j.at("relators"))
      p.relators.push_back(word_from_string(r.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("presentation JSON: ") + e.what());
  }
  for (const auto& w : p.relators) {
    if ((int)w.size() != p.l)
      throw ValidationError("presentation JSON: relator length != l");
    if (!is_reduced(w)) throw ValidationError("presentation JSON: relator not reduced");
    for (Letter x : w)
      if (x.gen() > p.m) throw ValidationError("presentation JSON: generator out of range");
  }
  return p;
}

}  // namespace rgl
