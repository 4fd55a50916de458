// 2-complexes built from K l-gons whose boundary sides are identified in
// classes. Each side of a face either agrees with its geometric edge's
// direction (+1) or runs against it (-1). Vertices are derived from the
// corner identifications induced by the gluing, never given as input.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rgl/letters.hpp"
#include "rgl/presentation.hpp"

namespace rgl {

class BuildError : public std::runtime_error {
 public:
  explicit BuildError(const std::string& what) : std::runtime_error(what) {}
};

// The k-th boundary edge of a face; positions are 1-based (1..l).
struct Side {
  int face = 0;
  int pos = 1;
  friend bool operator==(const Side&, const Side&) = default;
};

// Identify the geometric edges under sides a and b. flip=false means both
// faces walk the shared edge in the same direction, flip=true opposite.
// Two faces of an oriented surface glued along an edge use flip=true.
struct GluingEntry {
  Side a, b;
  bool flip = false;
};

class TwoComplex {
 public:
  TwoComplex() = default;

  // Transitive closure of the entries; throws BuildError on dangling side
  // references or direction flags that cannot be satisfied within a class.
  static TwoComplex build(int K, int l, const std::vector<GluingEntry>& gluing);

  // Fast path for the enumerator: edge_of[s] is a dense class id per side
  // index, dir_of[s] in {+1,-1} with the minimum side of each class +1.
  static TwoComplex from_partition(int K, int l, const std::vector<int>& edge_of,
                                   const std::vector<int>& dir_of);

  int face_count() const { return K_; }
  int gon_size() const { return l_; }
  int side_count() const { return K_ * l_; }
  int edge_count() const { return (int)edge_sides_.size(); }
  int vertex_count() const { return n_vertices_; }

  int side_index(Side s) const { return s.face * l_ + (s.pos - 1); }
  Side side_at(int idx) const { return Side{idx / l_, idx % l_ + 1}; }

  int edge_of(Side s) const { return edge_of_side_[side_index(s)]; }
  int dir_of(Side s) const { return dir_of_side_[side_index(s)]; }
  const std::vector<int>& sides_of_edge(int e) const { return edge_sides_[e]; }
  int degree(int e) const { return (int)edge_sides_[e].size(); }

  // Vertex ids at the tail/head of the edge's intrinsic direction.
  std::pair<int, int> edge_endpoints(int e) const;
  int vertex_of_corner(int corner) const { return vertex_of_corner_[corner]; }

  // Canonical entry list: one chain (min side, other side, flip) per class,
  // sorted; rebuilding from it reproduces the same complex.
  std::vector<GluingEntry> canonical_gluing() const;

  bool valid_side(Side s) const {
    return s.face >= 0 && s.face < K_ && s.pos >= 1 && s.pos <= l_;
  }

 private:
  void derive(int K, int l);

  int K_ = 0, l_ = 0;
  std::vector<int> edge_of_side_;
  std::vector<int> dir_of_side_;
  std::vector<std::vector<int>> edge_sides_;  // per edge, sorted side indices
  std::vector<int> vertex_of_corner_;
  int n_vertices_ = 0;
};

TwoComplex build_complex(int K, int l, const std::vector<GluingEntry>& gluing);

// Sum over edges of (degree - 1); equals K*l - edge_count.
long long cancel(const TwoComplex& Y);

// Number of edge classes of degree exactly 1.
long long boundary_length(const TwoComplex& Y);

// An embedded edge path in the boundary of a host face, with one prescribed
// letter per edge. edge_refs name edges by any side contained in them; each
// letter is what the named side reads along its face-positive walk.
struct FixedPath {
  int face = 0;
  std::vector<Side> edge_refs;
  Word letters;
};

// Derived view of the fixed paths: which edges are fixed and which intrinsic
// letter each one carries.
struct FixedInfo {
  std::vector<FixedPath> paths;
  std::vector<std::uint8_t> edge_fixed;  // per edge id
  std::vector<Letter> edge_pin;          // intrinsic letter, valid iff fixed
  int n_fixed = 0;
  bool conflict = false;  // two paths prescribe different letters to one edge

  void rebuild(const TwoComplex& cx);
};

struct ComplexWithFixed {
  TwoComplex cx;
  FixedInfo fixed;

  static ComplexWithFixed make(TwoComplex cx, std::vector<FixedPath> paths);
};

// |Fix(Y)|: edges shared between paths count once.
long long fix_size(const ComplexWithFixed& Yf);

struct PathViolation {
  int path = 0;
  std::string kind;  // "dangling" | "embeddedness" | "containment" | "connectivity" | "consistency" | "length"
  std::string message;
};

struct ValidationReport {
  std::vector<PathViolation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_fixed_paths(const ComplexWithFixed& Yf);

// Diagram JSON: {"K":..,"l":..,"gluing":[{"a":[f,p],"b":[f,p],"flip":b},..],
// "fixed_paths":[{"face":..,"edges":[[f,p],..],"letters":"ab.."},..]}
std::string complex_to_json(const ComplexWithFixed& Yf);
ComplexWithFixed complex_from_json(const std::string& text);

}  // namespace rgl
