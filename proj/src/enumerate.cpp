#include "rgl/enumerate.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace rgl {

std::vector<GluingEntry> PartitionCode::entries() const {
  std::vector<std::vector<int>> members;
  for (int s = 0; s < (int)edge_of.size(); ++s) {
    if (edge_of[s] >= (int)members.size()) members.resize(edge_of[s] + 1);
    members[edge_of[s]].push_back(s);
  }
  std::vector<GluingEntry> out;
  for (const auto& cls : members) {
    for (size_t i = 1; i < cls.size(); ++i) {
      Side a{cls[0] / l, cls[0] % l + 1};
      Side b{cls[i] / l, cls[i] % l + 1};
      out.push_back(GluingEntry{a, b, dir_of[cls[i]] != dir_of[cls[0]]});
    }
  }
  return out;
}

std::vector<int> PartitionCode::encode() const {
  std::vector<std::array<int, 3>> triples;
  std::vector<std::vector<int>> members;
  for (int s = 0; s < (int)edge_of.size(); ++s) {
    if (edge_of[s] >= (int)members.size()) members.resize(edge_of[s] + 1);
    members[edge_of[s]].push_back(s);
  }
  for (const auto& cls : members)
    for (size_t i = 1; i < cls.size(); ++i)
      triples.push_back({cls[0], cls[i], dir_of[cls[i]] != dir_of[cls[0]] ? 1 : 0});
  std::sort(triples.begin(), triples.end());
  std::vector<int> flat;
  flat.reserve(triples.size() * 3);
  for (const auto& t : triples) { flat.push_back(t[0]); flat.push_back(t[1]); flat.push_back(t[2]); }
  return flat;
}

long long PartitionCode::excess() const {
  int n_classes = 0;
  for (int e : edge_of) n_classes = std::max(n_classes, e + 1);
  return (long long)edge_of.size() - n_classes;
}

namespace {

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

// Transforms a code by a face permutation and per-face boundary rotations,
// returning its sorted-triple encoding.
std::vector<int> transformed_encoding(const PartitionCode& code, const std::vector<int>& perm,
                                      const std::vector<int>& rot) {
  const int l = code.l;
  const int S = (int)code.edge_of.size();
  int n_classes = 0;
  for (int e : code.edge_of) n_classes = std::max(n_classes, e + 1);
  // collect transformed members per class
  std::vector<std::vector<std::pair<int, int>>> members(n_classes);  // (new side, old dir)
  for (int s = 0; s < S; ++s) {
    int f = s / l, k = s % l;
    int ns = perm[f] * l + (k + rot[f]) % l;
    members[code.edge_of[s]].push_back({ns, code.dir_of[s]});
  }
  std::vector<std::array<int, 3>> triples;
  for (auto& cls : members) {
    std::sort(cls.begin(), cls.end());
    for (size_t i = 1; i < cls.size(); ++i)
      triples.push_back({cls[0].first, cls[i].first, cls[i].second != cls[0].second ? 1 : 0});
  }
  std::sort(triples.begin(), triples.end());
  std::vector<int> flat;
  flat.reserve(triples.size() * 3);
  for (const auto& t : triples) { flat.push_back(t[0]); flat.push_back(t[1]); flat.push_back(t[2]); }
  return flat;
}

bool is_rotation_canonical(const PartitionCode& code) {
  std::vector<int> base = code.encode();
  const int K = code.K, l = code.l;
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> rot(K, 0);
    for (;;) {
      if (transformed_encoding(code, perm, rot) < base) return false;
      int i = 0;
      while (i < K && ++rot[i] == l) rot[i++] = 0;
      if (i == K) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return true;
}

struct CodeEnumState {
  int K, l, S;
  const EnumerationFilter* filter;
  const std::function<void(const PartitionCode&)>* fn;
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of_side;
  PartitionCode code;

  void emit_parities(int excess) {
    // one direction bit per non-minimum member
    code.edge_of.assign(S, -1);
    code.dir_of.assign(S, 1);
    for (int c = 0; c < (int)classes.size(); ++c)
      for (int s : classes[c]) code.edge_of[s] = c;
    std::vector<int> bit_side;
    bit_side.reserve(excess);
    for (const auto& cls : classes)
      for (size_t i = 1; i < cls.size(); ++i) bit_side.push_back(cls[i]);
    const std::uint64_t patterns = std::uint64_t(1) << bit_side.size();
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
      for (size_t i = 0; i < bit_side.size(); ++i)
        code.dir_of[bit_side[i]] = (bits >> i) & 1 ? -1 : 1;
      if (filter->rotation_canonical && !is_rotation_canonical(code)) continue;
      (*fn)(code);
    }
  }

  void rec(int s, int excess) {
    if (s == S) {
      if (excess < filter->min_identifications) return;
      if (filter->require_connected && !faces_connected_now()) return;
      emit_parities(excess);
      return;
    }
    if (excess + (S - s) < filter->min_identifications) return;
    // new singleton class
    classes.push_back({s});
    rec(s + 1, excess);
    classes.pop_back();
    // join an existing class
    if (excess + 1 <= filter->max_identifications) {
      for (auto& cls : classes) {
        cls.push_back(s);
        rec(s + 1, excess + 1);
        cls.pop_back();
      }
    }
  }

  bool faces_connected_now() {
    if (K <= 1) return true;
    PlainUf uf(K);
    for (const auto& cls : classes) {
      int f0 = cls[0] / l;
      for (size_t i = 1; i < cls.size(); ++i) uf.unite(f0, cls[i] / l);
    }
    int root = uf.find(0);
    for (int f = 1; f < K; ++f)
      if (uf.find(f) != root) return false;
    return true;
  }
};

}  // namespace

void enumerate_codes(int K, int l, const EnumerationFilter& filter,
                     const std::function<void(const PartitionCode&)>& fn) {
  if (K == 0) return;
  CodeEnumState st;
  st.K = K;
  st.l = l;
  st.S = K * l;
  st.filter = &filter;
  st.fn = &fn;
  st.code.K = K;
  st.code.l = l;
  st.rec(0, 0);
}

void enumerate_complexes(int K, int l, const EnumerationFilter& filter,
                         const std::function<void(const TwoComplex&)>& fn) {
  enumerate_codes(K, l, filter, [&](const PartitionCode& code) { fn(code.build()); });
}

namespace {

// Boundary arcs of a host face: start position, length, pairwise-distinct
// edges, letters drawn from the filter's alphabet budget.
void enumerate_arcs(const TwoComplex& cx, const EnumerationFilter& filter,
                    const std::function<void(const FixedPath&)>& fn) {
  const int l = cx.gon_size();
  const int max_len = std::min(filter.path_max_len, l);
  std::vector<Letter> alphabet;
  for (int i = 0; i < filter.alphabet_budget; ++i) alphabet.push_back(Letter::from_index(i));
  FixedPath path;
  for (int host = 0; host < cx.face_count(); ++host) {
    path.face = host;
    for (int start = 1; start <= l; ++start) {
      for (int len = 1; len <= max_len; ++len) {
        path.edge_refs.clear();
        bool distinct = true;
        for (int i = 0; i < len && distinct; ++i) {
          Side s{host, (start - 1 + i) % l + 1};
          int e = cx.edge_of(s);
          for (Side prev : path.edge_refs)
            if (cx.edge_of(prev) == e) { distinct = false; break; }
          path.edge_refs.push_back(s);
        }
        if (!distinct) break;  // longer arcs from this start repeat the edge too
        // letter odometer
        path.letters.assign(len, alphabet[0]);
        std::vector<int> li(len, 0);
        for (;;) {
          for (int i = 0; i < len; ++i) path.letters[i] = alphabet[li[i]];
          fn(path);
          int i = 0;
          while (i < len && ++li[i] == (int)alphabet.size()) li[i++] = 0;
          if (i == len) break;
        }
      }
    }
  }
}

}  // namespace

void enumerate_fixed_path_sets(const TwoComplex& cx, int L, const EnumerationFilter& filter,
                               const std::function<void(const std::vector<FixedPath>&)>& fn) {
  if (filter.min_fixed_paths <= 0) {
    std::vector<FixedPath> empty;
    fn(empty);
  }
  if (L <= 0 || filter.alphabet_budget <= 0) return;
  // collect all arcs once, then choose increasing tuples of them
  std::vector<FixedPath> arcs;
  enumerate_arcs(cx, filter, [&](const FixedPath& p) { arcs.push_back(p); });
  std::vector<FixedPath> chosen;
  FixedInfo probe;
  std::function<void(int, int)> rec = [&](int from, int depth) {
    if (depth > 0) {
      probe.paths = chosen;
      probe.rebuild(cx);
      if (probe.conflict) return;  // adding more paths cannot resolve a clash
      if (depth >= filter.min_fixed_paths) fn(chosen);
    }
    if (depth == L) return;
    for (int i = from; i < (int)arcs.size(); ++i) {
      chosen.push_back(arcs[i]);
      rec(i + 1, depth + 1);
      chosen.pop_back();
    }
  };
  rec(0, 0);
}

void enumerate_decorations(int K, int l, const EnumerationFilter& filter,
                           const std::function<void(const Decoration&)>& fn) {
  if (K == 0) return;
  // set partitions of the faces as restricted growth strings
  std::vector<int> rgs(K, 0);
  Decoration deco;
  deco.class_of.resize(K);
  deco.first_edge.assign(K, 1);
  deco.orient.assign(K, 1);
  std::function<void(int, int)> rec = [&](int f, int maxc) {
    if (f == K) {
      int n = maxc + 1;
      if (filter.max_classes > 0 && n > filter.max_classes) return;
      for (int i = 0; i < K; ++i) deco.class_of[i] = rgs[i] + 1;
      deco.n_classes = n;
      deco.canonicalize();
      // first-edge odometer
      std::fill(deco.first_edge.begin(), deco.first_edge.end(), 1);
      for (;;) {
        // orientation odometer
        std::fill(deco.orient.begin(), deco.orient.end(), 1);
        for (;;) {
          fn(deco);
          int i = 0;
          while (i < K && deco.orient[i] == -1) deco.orient[i++] = 1;
          if (i == K) break;
          deco.orient[i] = -1;
        }
        int i = 0;
        while (i < K && ++deco.first_edge[i] > l) deco.first_edge[i++] = 1;
        if (i == K) break;
      }
      return;
    }
    for (int c = 0; c <= maxc + 1; ++c) {
      rgs[f] = c;
      rec(f + 1, std::max(maxc, c));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
}

AbstractDiagram materialize(const DiagramView& view) {
  AbstractDiagram out;
  out.base.cx = view.cx;
  out.base.fixed = view.fixed;
  out.deco = view.deco;
  return out;
}

void enumerate_abstract(int K, int L, int l, const EnumerationFilter& filter,
                        const std::function<void(const DiagramView&)>& fn) {
  if (K == 0) return;
  std::uint64_t emitted = 0;
  BelongsScratch scratch;
  BelongsAnalysis analysis;
  enumerate_codes(K, l, filter, [&](const PartitionCode& code) {
    TwoComplex cx = code.build();
    FixedInfo fixed;
    enumerate_fixed_path_sets(cx, L, filter, [&](const std::vector<FixedPath>& paths) {
      fixed.paths = paths;
      fixed.rebuild(cx);
      if (fixed.conflict) return;
      enumerate_decorations(K, l, filter, [&](const Decoration& deco) {
        DiagramView view(cx, fixed, deco);
        if (filter.require_reduced) {
          analyze_belongs(view, scratch, analysis);
          if (!analysis.orderable || analysis.has_reduction_pair) return;
        }
        if (++emitted > filter.cap_diagrams)
          throw CapExceededError("enumerate_abstract: more than " +
                                 std::to_string(filter.cap_diagrams) +
                                 " diagrams (cap-diagrams)");
        fn(view);
      });
    });
  });
}

std::uint64_t count_abstract(int K, int L, int l, const EnumerationFilter& filter) {
  std::uint64_t total = filter.include_empty ? 1 : 0;
  for (int k = 1; k <= K; ++k) {
    std::uint64_t here = 0;
    enumerate_abstract(k, L, l, filter, [&](const DiagramView&) { ++here; });
    total += here;
  }
  return total;
}

}  // namespace rgl
