#include "rgl/fulfill.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "rgl/parallel.hpp"
#include "rgl/presentation.hpp"

namespace rgl {

namespace {

inline Letter apply_twist(Letter x, int twist) { return twist > 0 ? x : x.inverse(); }

// Union-find with parity over slots, used only to detect contradictions and
// merge pins while compiling the system.
struct SlotUf {
  std::vector<int> parent;
  std::vector<std::uint8_t> parity;
  std::vector<Letter> pin;  // valid iff the root's class has a pinned letter

  explicit SlotUf(int n) : parent(n), parity(n, 0), pin(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }

  std::pair<int, int> find(int x) {
    int p = 0, r = x;
    while (parent[r] != r) { p ^= parity[r]; r = parent[r]; }
    int cur = x, cp = p;
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

  // rel = 1 when the two slot letters are mutually inverse
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    parent[rb] = ra;
    parity[rb] = (std::uint8_t)(pa ^ pb ^ rel);
    if (pin[rb].valid()) {
      Letter moved = parity[rb] ? pin[rb].inverse() : pin[rb];
      if (pin[ra].valid() && pin[ra] != moved) return false;
      pin[ra] = moved;
    }
    return true;
  }

  // letter the slot must carry
  bool set_pin(int x, Letter value) {
    auto [r, p] = find(x);
    Letter at_root = p ? value.inverse() : value;
    if (pin[r].valid()) return pin[r] == at_root;
    pin[r] = at_root;
    return true;
  }
};

}  // namespace

bool SlotSystem::word_fits_class(int cls, std::span<const Letter> w) const {
  for (int li : intra_links[cls - 1]) {
    const Link& lk = links[li];
    Letter a = w[lk.pos_a - 1];
    Letter b = w[lk.pos_b - 1];
    if (a != (lk.inverted ? b.inverse() : b)) return false;
  }
  for (int pi : class_pins[cls - 1]) {
    const Pin& p = pins[pi];
    if (w[p.pos - 1] != p.letter) return false;
  }
  return true;
}

bool SlotSystem::words_compatible(int cls_a, std::span<const Letter> wa, int cls_b,
                                  std::span<const Letter> wb) const {
  for (int li : cross_links[cls_a - 1]) {
    const Link& lk = links[li];
    int ca = lk.cls_a, cb = lk.cls_b;
    if (!((ca == cls_a && cb == cls_b) || (ca == cls_b && cb == cls_a))) continue;
    std::span<const Letter> w1 = ca == cls_a ? wa : wb;
    std::span<const Letter> w2 = cb == cls_b ? wb : wa;
    Letter a = w1[lk.pos_a - 1];
    Letter b = w2[lk.pos_b - 1];
    if (a != (lk.inverted ? b.inverse() : b)) return false;
  }
  return true;
}

SlotSystem build_slots(const DiagramView& A) {
  BelongsAnalysis ba = analyze_belongs(A);
  if (!ba.orderable)
    throw ReductionPairError("build_slots: duplicate (class, position) on edge " +
                             std::to_string(ba.offending_edge.value_or(-1)));
  if (ba.has_reduction_pair)
    throw ReductionPairError("build_slots: diagram has a structural reduction pair");

  const TwoComplex& cx = A.cx;
  const int l = cx.gon_size();
  SlotSystem sys;
  sys.n_classes = A.deco.n_classes;
  sys.length = l;
  sys.intra_links.resize(sys.n_classes);
  sys.cross_links.resize(sys.n_classes);
  sys.class_pins.resize(sys.n_classes);

  SlotUf uf(sys.n_classes * l);
  auto slot_id = [&](int cls, int pos) { return (cls - 1) * l + (pos - 1); };

  // Chain each edge's sides in (class, pos) order so that restricting the
  // system to a class prefix keeps its constraints transitively closed.
  std::vector<SlotRef> slots;
  for (int e = 0; e < cx.edge_count(); ++e) {
    const auto& sides = cx.sides_of_edge(e);
    slots.clear();
    for (int s : sides) slots.push_back(slot_of(A, cx.side_at(s)));
    std::sort(slots.begin(), slots.end(), [](const SlotRef& a, const SlotRef& b) {
      if (a.cls != b.cls) return a.cls < b.cls;
      if (a.pos != b.pos) return a.pos < b.pos;
      return a.twist > b.twist;
    });
    for (size_t i = 1; i < slots.size(); ++i) {
      const SlotRef& s0 = slots[i - 1];
      const SlotRef& si = slots[i];
      // both sides read the same geometric letter: w[s0] = w[si]^(t0*ti)
      bool inverted = s0.twist != si.twist;
      SlotSystem::Link link{s0.cls, s0.pos, si.cls, si.pos, inverted};
      int li = (int)sys.links.size();
      sys.links.push_back(link);
      if (link.cls_a == link.cls_b) {
        sys.intra_links[link.cls_a - 1].push_back(li);
      } else {
        sys.cross_links[link.cls_a - 1].push_back(li);
        sys.cross_links[link.cls_b - 1].push_back(li);
      }
      if (!sys.contradictory &&
          !uf.unite(slot_id(s0.cls, s0.pos), slot_id(si.cls, si.pos), inverted ? 1 : 0)) {
        sys.contradictory = true;
        sys.contradiction = "a letter of class " + std::to_string(s0.cls) +
                            " is forced equal to its own inverse (edge " + std::to_string(e) +
                            ")";
      }
    }
    if (!A.fixed.edge_fixed.empty() && A.fixed.edge_fixed[e]) {
      Letter intrinsic = A.fixed.edge_pin[e];
      for (int s : sides) {
        SlotRef sr = slot_of(A, cx.side_at(s));
        Letter pinned = apply_twist(intrinsic, sr.twist);
        int pi = (int)sys.pins.size();
        sys.pins.push_back(SlotSystem::Pin{sr.cls, sr.pos, pinned});
        sys.class_pins[sr.cls - 1].push_back(pi);
        if (!sys.contradictory && !uf.set_pin(slot_id(sr.cls, sr.pos), pinned)) {
          sys.contradictory = true;
          sys.contradiction = "conflicting pinned letters reach slot (" +
                              std::to_string(sr.cls) + "," + std::to_string(sr.pos) + ")";
        }
      }
    }
  }
  return sys;
}

bool is_fulfilled_by(const DiagramView& A, std::span<const Word> relators,
                     std::span<const int> assignment) {
  const TwoComplex& cx = A.cx;
  const int n = A.deco.n_classes;
  if ((int)assignment.size() != n) return false;
  for (int c = 0; c < n; ++c) {
    int idx = assignment[c];
    if (idx < 0 || idx >= (int)relators.size()) return false;
    for (int c2 = c + 1; c2 < n; ++c2)
      if (assignment[c2] == idx) return false;
  }
  // each word must be a reduced relator of the right length, and distinct
  // classes must bear distinct words
  for (int c = 0; c < n; ++c) {
    const Word& w = relators[assignment[c]];
    if ((int)w.size() != cx.gon_size()) return false;
    if (!is_reduced(w)) return false;
    for (int c2 = c + 1; c2 < n; ++c2)
      if (relators[assignment[c2]] == w) return false;
  }
  auto word_of = [&](int cls) -> const Word& { return relators[assignment[cls - 1]]; };
  for (int e = 0; e < cx.edge_count(); ++e) {
    const auto& sides = cx.sides_of_edge(e);
    Letter intrinsic;
    bool fixed = !A.fixed.edge_fixed.empty() && A.fixed.edge_fixed[e];
    if (fixed) intrinsic = A.fixed.edge_pin[e];
    for (int s : sides) {
      SlotRef sr = slot_of(A, cx.side_at(s));
      Letter implied = apply_twist(word_of(sr.cls)[sr.pos - 1], sr.twist);
      if (!intrinsic.valid())
        intrinsic = implied;
      else if (intrinsic != implied)
        return false;
    }
  }
  return true;
}

std::optional<Fulfillment> find_fulfillment(const DiagramView& A,
                                            std::span<const Word> relators) {
  SlotSystem sys = build_slots(A);
  if (sys.contradictory) return std::nullopt;
  const int n = sys.n_classes;

  // most-constrained class first; ties by class index for determinism
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  auto weight = [&](int cls) {
    return 2 * (int)sys.intra_links[cls - 1].size() + 2 * (int)sys.class_pins[cls - 1].size() +
           (int)sys.cross_links[cls - 1].size();
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa > wb;
    return a < b;
  });

  // per-class candidate lists from the intra constraints alone
  std::vector<std::vector<int>> candidates(n);
  for (int c = 1; c <= n; ++c) {
    for (int i = 0; i < (int)relators.size(); ++i) {
      const Word& w = relators[i];
      if ((int)w.size() != sys.length) continue;
      if (sys.word_fits_class(c, w)) candidates[c - 1].push_back(i);
    }
    if (candidates[c - 1].empty()) return std::nullopt;
  }

  std::vector<int> assignment(n, -1);
  std::vector<std::uint8_t> used(relators.size(), 0);

  std::function<bool(int)> dfs = [&](int depth) -> bool {
    if (depth == n) return true;
    int cls = order[depth];
    for (int idx : candidates[cls - 1]) {
      if (used[idx]) continue;
      const Word& w = relators[idx];
      bool ok = true;
      for (int d2 = 0; d2 < depth && ok; ++d2) {
        int other = order[d2];
        const Word& wo = relators[assignment[other - 1]];
        if (wo == w) ok = false;  // distinct classes bear distinct relators
        else ok = sys.words_compatible(cls, w, other, wo);
      }
      if (!ok) continue;
      assignment[cls - 1] = idx;
      used[idx] = 1;
      if (dfs(depth + 1)) return true;
      used[idx] = 0;
      assignment[cls - 1] = -1;
    }
    return false;
  };
  if (!dfs(0)) return std::nullopt;

  Fulfillment out;
  out.assignment = assignment;
  out.words.reserve(n);
  for (int c = 0; c < n; ++c) out.words.push_back(relators[assignment[c]]);
  return out;
}

namespace {

// Restriction of the slot system to classes 1..i: links with both ends
// inside, pins inside.
struct RestrictedSystem {
  const SlotSystem* sys = nullptr;
  int limit = 0;

  bool link_active(const SlotSystem::Link& lk) const {
    return lk.cls_a <= limit && lk.cls_b <= limit;
  }
};

}  // namespace

std::vector<Rational> partial_probabilities(const DiagramView& A, int m,
                                            std::uint64_t cap_words,
                                            std::uint64_t cap_tuples) {
  SlotSystem sys = build_slots(A);
  const int n = sys.n_classes;
  const int l = sys.length;
  std::uint64_t W = reduced_word_count(m, l, cap_words);
  // W^n against the tuple cap
  std::uint64_t space = 1;
  for (int i = 0; i < n; ++i) {
    if (space > cap_tuples / W)
      throw CapExceededError("partial_probabilities: W^i exceeds cap " +
                             std::to_string(cap_tuples));
    space *= W;
  }
  std::vector<Word> words = enumerate_reduced_words(m, l, cap_words);

  // prefix counts: tuples of (w_1..w_i) satisfying all constraints among
  // classes <= i, including pairwise distinctness
  std::vector<std::uint64_t> counts(n + 1, 0);
  counts[0] = 1;
  std::vector<int> chosen(n, -1);

  std::function<void(int)> dfs = [&](int depth) {
    int cls = depth + 1;
    for (int wi = 0; wi < (int)words.size(); ++wi) {
      const Word& w = words[wi];
      if (!sys.word_fits_class(cls, w)) continue;
      bool ok = true;
      for (int c2 = 1; c2 <= depth && ok; ++c2) {
        if (chosen[c2 - 1] == wi) ok = false;
        else ok = sys.words_compatible(cls, w, c2, words[chosen[c2 - 1]]);
      }
      if (!ok) continue;
      ++counts[depth + 1];
      if (depth + 1 < n) {
        chosen[depth] = wi;
        dfs(depth + 1);
        chosen[depth] = -1;
      }
    }
  };
  // A contradiction may involve only classes beyond some prefix, so the
  // prefix counts come from the DFS alone; impossible constraints simply
  // leave zero extensions at the depth where they bind.
  if (n > 0) dfs(0);

  std::vector<Rational> out(n + 1);
  out[0] = Rational(1, 1);
  std::uint64_t denom = 1;
  for (int i = 1; i <= n; ++i) {
    denom *= W;
    out[i] = Rational((long long)counts[i], (long long)denom);
  }
  return out;
}

Rational partial_probability_exact(const DiagramView& A, int i, int m,
                                   std::uint64_t cap_words, std::uint64_t cap_tuples) {
  if (i == 0) return Rational(1, 1);
  auto ps = partial_probabilities(A, m, cap_words, cap_tuples);
  if (i < 0 || i >= (int)ps.size())
    throw std::out_of_range("partial_probability_exact: class index out of range");
  return ps[i];
}

McEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  McEstimate e;
  e.trials = trials;
  e.successes = successes;
  if (trials == 0) { e.wilson_high = 1.0; return e; }
  const double z = 1.959963984540054;  // two-sided 95%
  double nd = (double)trials;
  double p = (double)successes / nd;
  e.p_hat = p;
  double z2 = z * z;
  double denom = 1.0 + z2 / nd;
  double center = p + z2 / (2.0 * nd);
  double spread = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
  e.wilson_low = std::max(0.0, (center - spread) / denom);
  e.wilson_high = std::min(1.0, (center + spread) / denom);
  return e;
}

McEstimate fulfillment_probability_mc(const DiagramView& A, int m, int l, const Rational& d,
                                      std::uint64_t trials, std::uint64_t seed, int jobs) {
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, jobs, [&](std::uint64_t t) {
    Rng rng = Rng::substream(seed, t);
    Presentation p = sample_presentation(m, l, d, rng);
    hit[t] = find_fulfillment(A, p.relators).has_value() ? 1 : 0;
  });
  std::uint64_t successes = 0;
  for (auto h : hit) successes += h;
  return wilson_interval(successes, trials);
}

std::string fulfillment_to_json(const Fulfillment& f) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json asg;
  for (int c = 0; c < (int)f.assignment.size(); ++c)
    asg[std::to_string(c + 1)] = f.assignment[c];
  j["assignment"] = std::move(asg);
  auto words = nlohmann::ordered_json::array();
  for (const auto& w : f.words) words.push_back(word_to_string(w));
  j["words"] = std::move(words);
  return j.dump(2) + "\n";
}

}  // namespace rgl
