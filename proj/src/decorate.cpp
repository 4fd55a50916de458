#include "rgl/decorate.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace rgl {

void Decoration::canonicalize() {
  const int K = (int)class_of.size();
  int n = 0;
  for (int c : class_of) n = std::max(n, c);
  std::vector<int> mult(n + 1, 0), first_face(n + 1, K);
  for (int f = 0; f < K; ++f) {
    ++mult[class_of[f]];
    first_face[class_of[f]] = std::min(first_face[class_of[f]], f);
  }
  std::vector<int> order;
  for (int c = 1; c <= n; ++c)
    if (mult[c] > 0) order.push_back(c);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (mult[a] != mult[b]) return mult[a] > mult[b];
    return first_face[a] < first_face[b];
  });
  std::vector<int> relabel(n + 1, 0);
  for (int i = 0; i < (int)order.size(); ++i) relabel[order[i]] = i + 1;
  for (int& c : class_of) c = relabel[c];
  n_classes = (int)order.size();
}

Decoration Decoration::plain(int K, int /*l*/) {
  Decoration d;
  d.class_of.resize(K);
  std::iota(d.class_of.begin(), d.class_of.end(), 1);
  d.first_edge.assign(K, 1);
  d.orient.assign(K, 1);
  d.n_classes = K;
  return d;
}

SlotRef slot_of(const DiagramView& A, Side s) {
  const int f = s.face;
  SlotRef r;
  r.cls = A.deco.class_of[f];
  r.pos = slot_pos(s.pos, A.deco.first_edge[f], A.deco.orient[f], A.cx.gon_size());
  r.twist = A.deco.orient[f] * A.cx.dir_of(s);
  return r;
}

void analyze_belongs(const DiagramView& A, BelongsScratch& sc, BelongsAnalysis& out) {
  const TwoComplex& cx = A.cx;
  const int K = cx.face_count();
  const int l = cx.gon_size();
  const int n = A.deco.n_classes;

  out.orderable = true;
  out.has_reduction_pair = false;
  out.offending_edge.reset();
  out.side_belongs.assign(cx.side_count(), 0);
  out.delta.assign(K, 0);
  out.kappa.assign(n, 0);
  out.multiplicity.assign(n, 0);
  for (int f = 0; f < K; ++f) ++out.multiplicity[A.deco.class_of[f] - 1];

  out.cancel = cancel(cx);
  out.n_fixed = 0;

  for (int e = 0; e < cx.edge_count(); ++e) {
    const auto& sides = cx.sides_of_edge(e);
    const bool fixed = !A.fixed.edge_fixed.empty() && A.fixed.edge_fixed[e];
    if (fixed) ++out.n_fixed;
    const int deg = (int)sides.size();
    sc.cls.resize(deg);
    sc.pos.resize(deg);
    sc.twist.resize(deg);
    for (int i = 0; i < deg; ++i) {
      int s = sides[i];
      int f = s / l;
      sc.cls[i] = A.deco.class_of[f];
      sc.pos[i] = slot_pos(s % l + 1, A.deco.first_edge[f], A.deco.orient[f], l);
      sc.twist[i] = A.deco.orient[f] * cx.dir_of(cx.side_at(s));
    }
    // duplicates of (class,pos) break the lexicographic order; equal twist on
    // top makes the pair a structural reduction pair
    int min_i = 0;
    bool dup = false;
    for (int i = 0; i < deg; ++i) {
      for (int j = i + 1; j < deg; ++j)
        if (sc.cls[i] == sc.cls[j] && sc.pos[i] == sc.pos[j]) {
          dup = true;
          if (sc.twist[i] == sc.twist[j]) out.has_reduction_pair = true;
        }
      if (sc.cls[i] < sc.cls[min_i] ||
          (sc.cls[i] == sc.cls[min_i] && sc.pos[i] < sc.pos[min_i]))
        min_i = i;
    }
    if (fixed) {
      for (int i = 0; i < deg; ++i) out.side_belongs[sides[i]] = 1;
    } else if (dup) {
      out.orderable = false;
      if (!out.offending_edge) out.offending_edge = e;
      continue;
    } else {
      for (int i = 0; i < deg; ++i)
        if (i != min_i) out.side_belongs[sides[i]] = 1;
    }
  }

  out.sum_delta = 0;
  for (int s = 0; s < cx.side_count(); ++s)
    if (out.side_belongs[s]) ++out.delta[s / l];
  for (int f = 0; f < K; ++f) {
    out.sum_delta += out.delta[f];
    int c = A.deco.class_of[f] - 1;
    out.kappa[c] = std::max(out.kappa[c], out.delta[f]);
  }
  out.sum_m_kappa = 0;
  for (int c = 0; c < n; ++c)
    out.sum_m_kappa += (long long)out.multiplicity[c] * out.kappa[c];
}

BelongsAnalysis analyze_belongs(const DiagramView& A) {
  BelongsScratch sc;
  BelongsAnalysis out;
  analyze_belongs(A, sc, out);
  return out;
}

namespace {
void require_orderable(const BelongsAnalysis& a) {
  if (!a.orderable)
    throw ReductionPairError(
        "two sides of edge " + std::to_string(a.offending_edge.value_or(-1)) +
        " carry the same (class, position); the belongs-to order is undefined");
}
}  // namespace

std::vector<Side> belongs_to(const DiagramView& A, int edge) {
  BelongsAnalysis a = analyze_belongs(A);
  const bool fixed = !A.fixed.edge_fixed.empty() && A.fixed.edge_fixed[edge];
  if (!fixed) {
    // only the order on this edge matters for the error
    const auto& sides = A.cx.sides_of_edge(edge);
    for (size_t i = 0; i < sides.size(); ++i)
      for (size_t j = i + 1; j < sides.size(); ++j) {
        SlotRef si = slot_of(A, A.cx.side_at(sides[i]));
        SlotRef sj = slot_of(A, A.cx.side_at(sides[j]));
        if (si.cls == sj.cls && si.pos == sj.pos)
          throw ReductionPairError("edge " + std::to_string(edge) +
                                   " has two sides with the same (class, position)");
      }
  }
  std::vector<Side> out;
  for (int s : A.cx.sides_of_edge(edge))
    if (a.side_belongs[s]) out.push_back(A.cx.side_at(s));
  return out;
}

int delta(const DiagramView& A, int face) {
  BelongsAnalysis a = analyze_belongs(A);
  require_orderable(a);
  return a.delta[face];
}

int kappa(const DiagramView& A, int cls) {
  if (cls < 1 || cls > A.deco.n_classes)
    throw std::out_of_range("kappa: class index " + std::to_string(cls) + " not used");
  BelongsAnalysis a = analyze_belongs(A);
  require_orderable(a);
  return a.kappa[cls - 1];
}

Eq2Audit eq2_audit(const DiagramView& A) {
  BelongsAnalysis a = analyze_belongs(A);
  require_orderable(a);
  return Eq2Audit{a.cancel + a.n_fixed, a.sum_delta, a.sum_m_kappa};
}

bool has_reduction_pair(const DiagramView& A) {
  BelongsScratch sc;
  BelongsAnalysis out;
  analyze_belongs(A, sc, out);
  return out.has_reduction_pair;
}

std::string diagram_to_json(const AbstractDiagram& A) {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(complex_to_json(A.base));
  j["classes"] = A.deco.class_of;
  j["first_edge"] = A.deco.first_edge;
  j["orient"] = A.deco.orient;
  return j.dump(2) + "\n";
}

AbstractDiagram diagram_from_json(const std::string& text) {
  AbstractDiagram A;
  A.base = complex_from_json(text);
  nlohmann::json j = nlohmann::json::parse(text);
  const int K = A.base.cx.face_count();
  try {
    if (j.contains("classes")) {
      A.deco.class_of = j.at("classes").get<std::vector<int>>();
      A.deco.first_edge = j.contains("first_edge") ? j.at("first_edge").get<std::vector<int>>()
                                                   : std::vector<int>(K, 1);
      A.deco.orient =
          j.contains("orient") ? j.at("orient").get<std::vector<int>>() : std::vector<int>(K, 1);
    } else {
      A.deco = Decoration::plain(K, A.base.cx.gon_size());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("decoration JSON: ") + e.what());
  }
  if ((int)A.deco.class_of.size() != K || (int)A.deco.first_edge.size() != K ||
      (int)A.deco.orient.size() != K)
    throw ValidationError("decoration JSON: per-face arrays must have K entries");
  for (int f = 0; f < K; ++f) {
    if (A.deco.class_of[f] < 1)
      throw ValidationError("decoration JSON: classes are 1-based");
    if (A.deco.first_edge[f] < 1 || A.deco.first_edge[f] > A.base.cx.gon_size())
      throw ValidationError("decoration JSON: first_edge out of range");
    if (A.deco.orient[f] != 1 && A.deco.orient[f] != -1)
      throw ValidationError("decoration JSON: orient entries must be +1 or -1");
  }
  A.deco.canonicalize();
  return A;
}

}  // namespace rgl
