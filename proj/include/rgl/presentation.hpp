// Random presentations at density d: floor((2m-1)^(dl)) independent random
// reduced relators of length l.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgl/letters.hpp"
#include "rgl/rational.hpp"
#include "rgl/rng.hpp"

namespace rgl {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct Presentation {
  int m = 2;
  int l = 2;
  Rational d{3, 10};
  std::vector<Word> relators;

  // Diagnostics filled by the sampler; duplicates and proper powers are
  // reported, never silently resampled.
  std::vector<std::pair<int, int>> duplicate_pairs;  // (i, j), i < j, equal words
  std::vector<int> proper_power_indices;

  std::uint64_t size() const { return relators.size(); }
};

struct SampleOptions {
  bool cyclically_reduced = false;  // resample until first/last letters are not inverse
  bool strict = false;              // reject presentations containing duplicate relators
  std::uint64_t relator_cap = 10'000'000;
};

// floor((2m-1)^(d*l)). Exact integer power when d*l is an integer.
std::uint64_t relator_count(int m, int l, const Rational& d, std::uint64_t cap);

// Uniform over reduced words of length l: first letter uniform over 2m,
// each next uniform over the 2m-1 non-cancelling letters.
Word sample_reduced_word(int m, int l, Rng& rng);

Word sample_cyclically_reduced_word(int m, int l, Rng& rng);

Presentation sample_presentation(int m, int l, const Rational& d, Rng& rng,
                                 const SampleOptions& opts = {});

// JSON: {"m":..,"l":..,"d":..,"relators":["aBa..",...]} plus any extra
// fields the writer adds (ignored on read).
std::string presentation_to_json(const Presentation& p,
                                 std::optional<std::uint64_t> seed = std::nullopt);
Presentation presentation_from_json(const std::string& text);

}  // namespace rgl
