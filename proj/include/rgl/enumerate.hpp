// Exhaustive generation of small gluing codes, fixed-path sets, and
// decorations. Streams are deterministic: partitions of the side set are
// produced in restricted-growth order, parities and decorations as nested
// odometers. Counting conventions: a "labeled" count is the raw stream; the
// optional dedup keeps one code per orbit under face relabeling and per-face
// boundary rotation.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rgl/decorate.hpp"

namespace rgl {

// Dense partition form of a gluing code: edge_of[s] is the class of side s,
// dir_of[s] its direction relative to the class minimum (which gets +1).
struct PartitionCode {
  int K = 0;
  int l = 0;
  std::vector<int> edge_of;
  std::vector<int> dir_of;

  TwoComplex build() const { return TwoComplex::from_partition(K, l, edge_of, dir_of); }
  std::vector<GluingEntry> entries() const;
  // Sorted (a, b, parity) triples; equal iff the codes are equal.
  std::vector<int> encode() const;
  long long excess() const;  // sum over classes of (size - 1) == Cancel
};

struct EnumerationFilter {
  int max_identifications = 2;  // total Cancel budget of the code
  int min_identifications = 0;
  bool require_connected = true;
  // drop decorated diagrams with an undefined belongs order or a structural
  // reduction pair
  bool require_reduced = true;
  // keep only codes lexicographically minimal under face relabeling and
  // per-face rotation
  bool rotation_canonical = false;
  int max_classes = 0;  // 0 = unbounded
  int min_fixed_paths = 0;
  int path_max_len = 3;
  int alphabet_budget = 1;  // letters available to prescriptions: a, A, b, B, ...
  bool include_empty = false;
  std::uint64_t cap_diagrams = 200'000'000;
};

// All gluing codes with exactly K faces within the identification budget.
void enumerate_codes(int K, int l, const EnumerationFilter& filter,
                     const std::function<void(const PartitionCode&)>& fn);

// Complexes built from the codes above.
void enumerate_complexes(int K, int l, const EnumerationFilter& filter,
                         const std::function<void(const TwoComplex&)>& fn);

// All sets of at most L fixed paths on cx: boundary arcs of a host face with
// pairwise-distinct edges, prescribed from the filter's letter budget.
// Emits the empty set first. Path sets whose prescriptions clash are skipped.
void enumerate_fixed_path_sets(const TwoComplex& cx, int L, const EnumerationFilter& filter,
                               const std::function<void(const std::vector<FixedPath>&)>& fn);

// All decorations of K faces: canonical class partitions (multiplicity
// nonincreasing), every first-edge choice, every orientation.
void enumerate_decorations(int K, int l, const EnumerationFilter& filter,
                           const std::function<void(const Decoration&)>& fn);

// Full product stream. The view passed to fn borrows enumerator scratch and
// is valid only during the call; materialize() it to keep a diagram.
void enumerate_abstract(int K, int L, int l, const EnumerationFilter& filter,
                        const std::function<void(const DiagramView&)>& fn);

AbstractDiagram materialize(const DiagramView& view);

// Number of abstract diagrams with at most K faces (the empty complex
// counts 1 when include_empty), under the filter's conventions.
std::uint64_t count_abstract(int K, int L, int l, const EnumerationFilter& filter);

}  // namespace rgl
