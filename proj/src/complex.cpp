#include "rgl/complex.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace rgl {

namespace {

// Union-find with a parity bit on each link, tracking relative direction.
struct ParityUf {
  std::vector<int> parent;
  std::vector<std::uint8_t> parity;  // relative to parent

  explicit ParityUf(int n) : parent(n), parity(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::pair<int, int> find(int x) {
    int p = 0;
    int r = x;
    while (parent[r] != r) { p ^= parity[r]; r = parent[r]; }
    // path compression
    int cur = x;
    int cp = p;
    while (parent[cur] != r) {
      int next = parent[cur];
      int np = cp ^ parity[cur];
      parent[cur] = r;
      parity[cur] = (std::uint8_t)cp;
      cp = np;
      cur = next;
    }
    return {r, p};
  }

  // Returns false when a and b are already related with the opposite parity.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    parent[rb] = ra;
    parity[rb] = (std::uint8_t)(pa ^ pb ^ rel);
    return true;
  }
};

struct PlainUf {
  std::vector<int> parent;
  explicit PlainUf(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

std::string side_str(Side s) {
  return "(" + std::to_string(s.face) + "," + std::to_string(s.pos) + ")";
}

}  // namespace

TwoComplex TwoComplex::build(int K, int l, const std::vector<GluingEntry>& gluing) {
  if (K < 0 || l < 1) throw BuildError("build: need K >= 0 and l >= 1");
  TwoComplex Y;
  Y.K_ = K;
  Y.l_ = l;
  const int n = K * l;
  ParityUf uf(n);
  for (size_t i = 0; i < gluing.size(); ++i) {
    const auto& g = gluing[i];
    if (!Y.valid_side(g.a) || !Y.valid_side(g.b))
      throw BuildError("build: entry " + std::to_string(i) + " references side " +
                       side_str(Y.valid_side(g.a) ? g.b : g.a) + " outside K=" +
                       std::to_string(K) + ", l=" + std::to_string(l));
    if (!uf.unite(Y.side_index(g.a), Y.side_index(g.b), g.flip ? 1 : 0))
      throw BuildError("build: entry " + std::to_string(i) + " gluing " + side_str(g.a) +
                       "~" + side_str(g.b) + " has inconsistent direction flags");
  }
  // Dense edge ids ordered by the minimum side of each class; directions
  // relative to that side.
  std::vector<int> root_min(n, -1);
  Y.edge_of_side_.assign(n, -1);
  Y.dir_of_side_.assign(n, 1);
  for (int s = 0; s < n; ++s) {
    int r = uf.find(s).first;
    if (root_min[r] < 0) root_min[r] = s;
  }
  std::vector<int> edge_id(n, -1);
  int next_edge = 0;
  for (int s = 0; s < n; ++s) {
    auto [r, p] = uf.find(s);
    int min_side = root_min[r];
    if (edge_id[min_side] < 0) edge_id[min_side] = next_edge++;
    int e = edge_id[min_side];
    Y.edge_of_side_[s] = e;
    int min_parity = uf.find(min_side).second;
    Y.dir_of_side_[s] = (p ^ min_parity) ? -1 : 1;
  }
  Y.edge_sides_.assign(next_edge, {});
  for (int s = 0; s < n; ++s) Y.edge_sides_[Y.edge_of_side_[s]].push_back(s);
  Y.derive(K, l);
  return Y;
}

TwoComplex TwoComplex::from_partition(int K, int l, const std::vector<int>& edge_of,
                                      const std::vector<int>& dir_of) {
  TwoComplex Y;
  Y.K_ = K;
  Y.l_ = l;
  Y.edge_of_side_ = edge_of;
  Y.dir_of_side_ = dir_of;
  int n_edges = edge_of.empty() ? 0 : *std::max_element(edge_of.begin(), edge_of.end()) + 1;
  Y.edge_sides_.assign(n_edges, {});
  for (int s = 0; s < (int)edge_of.size(); ++s) Y.edge_sides_[edge_of[s]].push_back(s);
  Y.derive(K, l);
  return Y;
}

void TwoComplex::derive(int K, int l) {
  // Corner c(f,k) sits at the start of side (f,k); side (f,k) runs from
  // corner k to corner k%l+1 of the same face when walked positively.
  const int n = K * l;
  PlainUf corners(n);
  auto corner_start = [&](int side) { return side; };
  auto corner_end = [&](int side) {
    int f = side / l, k = side % l;
    return f * l + (k + 1) % l;
  };
  for (const auto& sides : edge_sides_) {
    int s0 = sides[0];
    for (size_t i = 1; i < sides.size(); ++i) {
      int si = sides[i];
      bool same_dir = dir_of_side_[s0] == dir_of_side_[si];
      if (same_dir) {
        corners.unite(corner_start(s0), corner_start(si));
        corners.unite(corner_end(s0), corner_end(si));
      } else {
        corners.unite(corner_start(s0), corner_end(si));
        corners.unite(corner_end(s0), corner_start(si));
      }
    }
  }
  vertex_of_corner_.assign(n, -1);
  int next_vertex = 0;
  for (int c = 0; c < n; ++c) {
    int r = corners.find(c);
    if (vertex_of_corner_[r] < 0) vertex_of_corner_[r] = next_vertex++;
    vertex_of_corner_[c] = vertex_of_corner_[r];
  }
  n_vertices_ = next_vertex;
}

std::pair<int, int> TwoComplex::edge_endpoints(int e) const {
  int s = edge_sides_[e][0];  // the minimum side, direction +1 by construction
  int f = s / l_, k = s % l_;
  int tail = vertex_of_corner_[s];
  int head = vertex_of_corner_[f * l_ + (k + 1) % l_];
  return {tail, head};
}

std::vector<GluingEntry> TwoComplex::canonical_gluing() const {
  std::vector<GluingEntry> out;
  for (const auto& sides : edge_sides_) {
    int s0 = sides[0];
    for (size_t i = 1; i < sides.size(); ++i) {
      int si = sides[i];
      out.push_back(GluingEntry{side_at(s0), side_at(si),
                                dir_of_side_[s0] != dir_of_side_[si]});
    }
  }
  return out;
}

TwoComplex build_complex(int K, int l, const std::vector<GluingEntry>& gluing) {
  return TwoComplex::build(K, l, gluing);
}

long long cancel(const TwoComplex& Y) {
  return (long long)Y.side_count() - Y.edge_count();
}

long long boundary_length(const TwoComplex& Y) {
  long long n = 0;
  for (int e = 0; e < Y.edge_count(); ++e)
    if (Y.degree(e) == 1) ++n;
  return n;
}

void FixedInfo::rebuild(const TwoComplex& cx) {
  edge_fixed.assign(cx.edge_count(), 0);
  edge_pin.assign(cx.edge_count(), Letter());
  n_fixed = 0;
  conflict = false;
  for (const auto& path : paths) {
    for (size_t i = 0; i < path.edge_refs.size(); ++i) {
      Side ref = path.edge_refs[i];
      if (!cx.valid_side(ref)) continue;  // reported by validate_fixed_paths
      if (i >= path.letters.size()) continue;
      int e = cx.edge_of(ref);
      // The prescription letter is read along the referenced side's walk;
      // convert to the edge's intrinsic direction.
      Letter intrinsic = cx.dir_of(ref) > 0 ? path.letters[i] : path.letters[i].inverse();
      if (!edge_fixed[e]) {
        edge_fixed[e] = 1;
        edge_pin[e] = intrinsic;
        ++n_fixed;
      } else if (edge_pin[e] != intrinsic) {
        conflict = true;
      }
    }
  }
}

ComplexWithFixed ComplexWithFixed::make(TwoComplex cx, std::vector<FixedPath> paths) {
  ComplexWithFixed out;
  out.cx = std::move(cx);
  out.fixed.paths = std::move(paths);
  out.fixed.rebuild(out.cx);
  return out;
}

long long fix_size(const ComplexWithFixed& Yf) { return Yf.fixed.n_fixed; }

ValidationReport validate_fixed_paths(const ComplexWithFixed& Yf) {
  ValidationReport report;
  const TwoComplex& cx = Yf.cx;
  // consistency is tracked across paths on the intrinsic letter of each edge
  std::vector<Letter> pin(cx.edge_count());
  for (int pi = 0; pi < (int)Yf.fixed.paths.size(); ++pi) {
    const FixedPath& path = Yf.fixed.paths[pi];
    if (path.face < 0 || path.face >= cx.face_count()) {
      report.violations.push_back({pi, "dangling", "host face out of range"});
      continue;
    }
    if (path.letters.size() != path.edge_refs.size())
      report.violations.push_back({pi, "length", "one letter per edge required"});
    std::vector<int> edges;
    bool refs_ok = true;
    for (Side ref : path.edge_refs) {
      if (!cx.valid_side(ref)) {
        report.violations.push_back({pi, "dangling", "edge reference " + side_str(ref) +
                                                         " out of range"});
        refs_ok = false;
        continue;
      }
      edges.push_back(cx.edge_of(ref));
    }
    if (!refs_ok) continue;
    // embeddedness: no repeated edge
    for (size_t i = 0; i < edges.size(); ++i)
      for (size_t j = i + 1; j < edges.size(); ++j)
        if (edges[i] == edges[j]) {
          report.violations.push_back(
              {pi, "embeddedness", "edge repeated at steps " + std::to_string(i) + " and " +
                                       std::to_string(j)});
          j = edges.size();
          i = edges.size();
        }
    // containment: every edge lies on the host face's boundary
    for (size_t i = 0; i < edges.size(); ++i) {
      bool on_host = false;
      for (int s : cx.sides_of_edge(edges[i]))
        if (s / cx.gon_size() == path.face) { on_host = true; break; }
      if (!on_host)
        report.violations.push_back({pi, "containment", "edge at step " + std::to_string(i) +
                                                            " not on host face boundary"});
    }
    // consecutive edges share a vertex
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
      auto [a1, a2] = cx.edge_endpoints(edges[i]);
      auto [b1, b2] = cx.edge_endpoints(edges[i + 1]);
      if (a1 != b1 && a1 != b2 && a2 != b1 && a2 != b2)
        report.violations.push_back({pi, "connectivity", "edges at steps " + std::to_string(i) +
                                                             "," + std::to_string(i + 1) +
                                                             " share no vertex"});
    }
    // prescriptions on shared edges must agree
    for (size_t i = 0; i < edges.size() && i < path.letters.size(); ++i) {
      Side ref = path.edge_refs[i];
      Letter intrinsic = cx.dir_of(ref) > 0 ? path.letters[i] : path.letters[i].inverse();
      Letter& slot = pin[edges[i]];
      if (!slot.valid())
        slot = intrinsic;
      else if (slot != intrinsic)
        report.violations.push_back({pi, "consistency", "edge at step " + std::to_string(i) +
                                                            " already prescribed a different letter"});
    }
  }
  return report;
}

std::string complex_to_json(const ComplexWithFixed& Yf) {
  nlohmann::ordered_json j;
  j["K"] = Yf.cx.face_count();
  j["l"] = Yf.cx.gon_size();
  auto entries = nlohmann::ordered_json::array();
  for (const auto& g : Yf.cx.canonical_gluing()) {
    nlohmann::ordered_json e;
    e["a"] = {g.a.face, g.a.pos};
    e["b"] = {g.b.face, g.b.pos};
    e["flip"] = g.flip;
    entries.push_back(std::move(e));
  }
  j["gluing"] = std::move(entries);
  auto paths = nlohmann::ordered_json::array();
  for (const auto& p : Yf.fixed.paths) {
    nlohmann::ordered_json pj;
    pj["face"] = p.face;
    auto edges = nlohmann::ordered_json::array();
    for (Side s : p.edge_refs) edges.push_back({s.face, s.pos});
    pj["edges"] = std::move(edges);
    pj["letters"] = word_to_string(p.letters);
    paths.push_back(std::move(pj));
  }
  j["fixed_paths"] = std::move(paths);
  return j.dump(2) + "\n";
}

ComplexWithFixed complex_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int K, l;
  std::vector<GluingEntry> gluing;
  std::vector<FixedPath> paths;
  try {
    K = j.at("K").get<int>();
    l = j.at("l").get<int>();
    if (j.contains("gluing"))
      for (const auto& e : j.at("gluing")) {
        GluingEntry g;
        g.a = Side{e.at("a").at(0).get<int>(), e.at("a").at(1).get<int>()};
        g.b = Side{e.at("b").at(0).get<int>(), e.at("b").at(1).get<int>()};
        g.flip = e.value("flip", false);
        gluing.push_back(g);
      }
    if (j.contains("fixed_paths"))
      for (const auto& pj : j.at("fixed_paths")) {
        FixedPath p;
        p.face = pj.at("face").get<int>();
        for (const auto& s : pj.at("edges"))
          p.edge_refs.push_back(Side{s.at(0).get<int>(), s.at(1).get<int>()});
        p.letters = word_from_string(pj.at("letters").get<std::string>());
        paths.push_back(std::move(p));
      }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("diagram JSON: ") + e.what());
  }
  TwoComplex cx = TwoComplex::build(K, l, gluing);
  auto out = ComplexWithFixed::make(std::move(cx), std::move(paths));
  auto report = validate_fixed_paths(out);
  if (!report.ok())
    throw ValidationError("diagram JSON: fixed path " + std::to_string(report.violations[0].path) +
                          ": " + report.violations[0].kind + ": " +
                          report.violations[0].message);
  return out;
}

}  // namespace rgl
