// Abstract-diagram decoration: which faces bear the same relator, which
// boundary edge carries its first letter, and which way each face reads.
// On top of that, the order-theoretic bookkeeping used by the bound
// experiments: the belongs-to relation, delta per face, kappa per class,
// and the cancellation accounting identity Cancel + N = sum delta.
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "rgl/complex.hpp"

namespace rgl {

class ReductionPairError : public std::runtime_error {
 public:
  explicit ReductionPairError(const std::string& what) : std::runtime_error(what) {}
};

struct Decoration {
  std::vector<int> class_of;    // face -> 1..n
  std::vector<int> first_edge;  // face -> 1..l
  std::vector<int> orient;      // face -> +1/-1
  int n_classes = 0;

  // Relabels classes so multiplicities are nonincreasing, ties broken by the
  // smallest face bearing the class. All derived quantities assume this.
  void canonicalize();

  static Decoration plain(int K, int l);  // distinct classes, first edge 1, orient +1
};

struct AbstractDiagram;

// Borrowed view used by the hot enumeration loops; fields must outlive it.
struct DiagramView {
  const TwoComplex& cx;
  const FixedInfo& fixed;
  const Decoration& deco;

  DiagramView(const TwoComplex& c, const FixedInfo& f, const Decoration& d)
      : cx(c), fixed(f), deco(d) {}
  DiagramView(const ComplexWithFixed& base, const Decoration& d)
      : cx(base.cx), fixed(base.fixed), deco(d) {}
  explicit DiagramView(const AbstractDiagram& a);
};

struct AbstractDiagram {
  ComplexWithFixed base;
  Decoration deco;

  DiagramView view() const { return DiagramView(base, deco); }
};

inline DiagramView::DiagramView(const AbstractDiagram& a)
    : cx(a.base.cx), fixed(a.base.fixed), deco(a.deco) {}

// Slot = letter position of a relator class. pos is the 1-based index of the
// letter this side carries; twist +1 when the geometric edge carries that
// letter itself, -1 when it carries the inverse.
struct SlotRef {
  int cls = 0;
  int pos = 0;
  int twist = 1;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

inline int slot_pos(int side_pos, int first_edge, int orient, int l) {
  int off = orient > 0 ? side_pos - first_edge : first_edge - side_pos;
  off %= l;
  if (off < 0) off += l;
  return 1 + off;
}

SlotRef slot_of(const DiagramView& A, Side s);

// One pass over the edges: the belongs-to relation evaluated per side, delta
// per face (number of boundary positions whose edge belongs to the face
// there), kappa per class, class multiplicities, and the audit sums.
struct BelongsAnalysis {
  bool orderable = true;  // no duplicate (class,pos) on a non-fixed edge
  bool has_reduction_pair = false;  // duplicate (class,pos) with equal twist
  std::optional<int> offending_edge;
  std::vector<std::uint8_t> side_belongs;  // per side index
  std::vector<int> delta;                  // per face
  std::vector<int> kappa;                  // per class, 1-based at index cls-1
  std::vector<int> multiplicity;           // per class
  long long cancel = 0;
  long long n_fixed = 0;
  long long sum_delta = 0;
  long long sum_m_kappa = 0;
};

// Scratch buffers reused across calls by the enumeration loops.
struct BelongsScratch {
  std::vector<int> cls, pos, twist;
};

void analyze_belongs(const DiagramView& A, BelongsScratch& scratch, BelongsAnalysis& out);
BelongsAnalysis analyze_belongs(const DiagramView& A);

// The set of sides to which edge e belongs: all adjacent sides when e is
// fixed, otherwise all but the lexicographic minimum of (class, pos).
// Throws ReductionPairError when the order is not defined.
std::vector<Side> belongs_to(const DiagramView& A, int edge);

int delta(const DiagramView& A, int face);
int kappa(const DiagramView& A, int cls);

struct Eq2Audit {
  long long lhs = 0;  // Cancel(Y) + N
  long long mid = 0;  // sum over faces of delta
  long long rhs = 0;  // sum over classes of multiplicity * kappa
};

// Callers assert lhs == mid and mid <= rhs.
Eq2Audit eq2_audit(const DiagramView& A);

// Structural test: some edge has two sides with the same (class, pos) and
// equal twist, which forces both faces onto the same target cell whenever
// the diagram is fulfilled without proper powers.
bool has_reduction_pair(const DiagramView& A);

// Decoration JSON extension: {"classes":[..],"first_edge":[..],"orient":[..]}
std::string diagram_to_json(const AbstractDiagram& A);
AbstractDiagram diagram_from_json(const std::string& text);

}  // namespace rgl
