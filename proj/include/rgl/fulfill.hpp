// Deciding whether an abstract diagram is fulfilled by a relator set, and
// the exact/Monte-Carlo probabilities that random words do so. Fulfillment
// requires every face boundary to read its assigned relator from its first
// edge in its orientation, fixed-edge letters to match, no reduction pair to
// be realized, and distinct classes to bear distinct relators.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rgl/decorate.hpp"
#include "rgl/rational.hpp"
#include "rgl/rng.hpp"

namespace rgl {

// The letter constraints a diagram imposes on the words of its classes:
// equalities (up to inversion) between letter slots, plus pinned letters
// from fixed edges. Contradictions (a letter forced equal to its own
// inverse, or two different pins on one slot) are recorded, not thrown;
// such a diagram is fulfillable by no relator set.
struct SlotSystem {
  struct Link {
    int cls_a = 0, pos_a = 0;
    int cls_b = 0, pos_b = 0;
    bool inverted = false;  // letters are mutually inverse
  };
  struct Pin {
    int cls = 0, pos = 0;
    Letter letter;
  };

  int n_classes = 0;
  int length = 0;
  std::vector<Link> links;  // one per glued side pair, in edge order
  std::vector<Pin> pins;    // one per (fixed edge, side)
  bool contradictory = false;
  std::string contradiction;

  // per class: the links/pins touching it, for candidate filtering
  std::vector<std::vector<int>> intra_links;  // link indices with cls_a == cls_b == c
  std::vector<std::vector<int>> cross_links;  // link indices with exactly one end == c
  std::vector<std::vector<int>> class_pins;   // pin indices

  bool word_fits_class(int cls, std::span<const Letter> w) const;
  bool words_compatible(int cls_a, std::span<const Letter> wa, int cls_b,
                        std::span<const Letter> wb) const;
};

// Compiles the bearing and fixing constraints of A. Requires the belongs
// order to exist (no duplicate (class,pos) on non-fixed edges) and no
// structural reduction pair; throws ReductionPairError otherwise.
SlotSystem build_slots(const DiagramView& A);

struct Fulfillment {
  std::vector<int> assignment;  // class c (1-based) -> index into R at [c-1]
  std::vector<Word> words;      // the assigned relators
};

// Verifies the assignment letter by letter against the gluing, the fixed
// edges, and the decoration. Returns false on any violation.
bool is_fulfilled_by(const DiagramView& A, std::span<const Word> relators,
                     std::span<const int> assignment);

// Backtracking over injective class->relator assignments, most-constrained
// class first. Returns the first witness in deterministic order, or nullopt
// (also when the slot system is contradictory).
std::optional<Fulfillment> find_fulfillment(const DiagramView& A,
                                            std::span<const Word> relators);

// Exact probability that i random reduced words w_1..w_i fulfill the
// subcomplex of faces bearing classes 1..i (classes in canonical order),
// with all slot and pin constraints restricted to those classes.
// p_0 = 1 by definition. Throws CapExceededError when W^i exceeds cap_tuples.
Rational partial_probability_exact(const DiagramView& A, int i, int m,
                                   std::uint64_t cap_words = 10'000'000,
                                   std::uint64_t cap_tuples = 100'000'000);

// All of p_0..p_n in one sweep (prefix counts of one DFS).
std::vector<Rational> partial_probabilities(const DiagramView& A, int m,
                                            std::uint64_t cap_words = 10'000'000,
                                            std::uint64_t cap_tuples = 100'000'000);

struct McEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
};

// Two-sided 95% Wilson score interval.
McEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials);

// Frequency, over presentations sampled at (m, l, d), of find_fulfillment
// succeeding. Trial t draws its presentation from substream(seed, t), so
// the result is independent of the job count.
McEstimate fulfillment_probability_mc(const DiagramView& A, int m, int l, const Rational& d,
                                      std::uint64_t trials, std::uint64_t seed, int jobs = 0);

std::string fulfillment_to_json(const Fulfillment& f);

}  // namespace rgl
