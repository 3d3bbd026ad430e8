#include "scube/hfi.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>

namespace scube {

void HFI::init(int domains) {
  n = domains;
  len.assign(n, 0);
  rel.assign(n, std::vector<char>(n, kRelNone));
  cluster.assign(n, std::vector<int>(n, -1));
  midval.assign(n, std::vector<int>(n, -1));
}

int HFI::proj(int u, int v, int t) const {
  int c = cluster[u][v];
  if (t < c) return 0;
  if (t > c) return len[v];
  return midval[u][v];
}

int HFI::height(int u) const {
  int best = 0;
  for (int v = 0; v < n; ++v)
    if (rel[v][u] == kRelNested) best = std::max(best, 1 + height(v));
  return best;
}

bool HFI::consistent(const std::vector<int>& x) const {
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (rel[u][v] == kRelTrans) {
        if (x[u] != cluster[u][v] && x[v] != cluster[v][u]) return false;
      } else if (rel[u][v] == kRelNested) {  // u nested in v
        if (x[v] != cluster[v][u] && x[u] != proj(v, u, x[v])) return false;
      } else if (rel[u][v] == kRelContains) {
        if (x[u] != cluster[u][v] && x[v] != proj(u, v, x[u])) return false;
      }
    }
  return true;
}

Report validate_hfi(const HFI& h) {
  Report r;
  auto dom = [](int u) { return "domain " + std::to_string(u); };
  auto pair_wit = [](int u, int v) {
    return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
  };
  bool shape = (int)h.len.size() == h.n && (int)h.rel.size() == h.n &&
               (int)h.cluster.size() == h.n && (int)h.midval.size() == h.n;
  for (int u = 0; u < h.n && shape; ++u)
    shape = (int)h.rel[u].size() == h.n && (int)h.cluster[u].size() == h.n &&
            (int)h.midval[u].size() == h.n;
  r.check("shape", shape, "");
  if (!shape) return r;

  // length 0 allowed: a fully-clustered interval collapses to a point
  for (int u = 0; u < h.n; ++u)
    if (h.len[u] < 0) r.check("interval-nondegenerate", false, dom(u));

  // relation trichotomy and mirror symmetry
  for (int u = 0; u < h.n; ++u) {
    if (h.rel[u][u] != kRelNone) r.check("relations-irreflexive", false, dom(u));
    for (int v = 0; v < h.n; ++v) {
      if (u == v) continue;
      char a = h.rel[u][v], b = h.rel[v][u];
      bool mirror = (a == kRelNested && b == kRelContains) ||
                    (a == kRelContains && b == kRelNested) ||
                    (a == kRelOrth && b == kRelOrth) || (a == kRelTrans && b == kRelTrans);
      if (!mirror) r.check("relation-trichotomy", false, pair_wit(u, v));
    }
  }
  if (!r.ok()) return r;

  // nesting is a partial order with a unique maximum
  for (int u = 0; u < h.n; ++u)
    for (int v = 0; v < h.n; ++v)
      for (int w = 0; w < h.n; ++w)
        if (h.nested(u, v) && h.nested(v, w) && !h.nested(u, w))
          r.check("nesting-transitive", false,
                  pair_wit(u, v) + "," + std::to_string(w));
  int n_max = 0, top = -1;
  for (int u = 0; u < h.n; ++u) {
    bool maximal = true;
    for (int v = 0; v < h.n; ++v)
      if (h.nested(u, v)) maximal = false;
    if (maximal) {
      ++n_max;
      top = u;
    }
  }
  // Families arising from relevant-domain sets can have several maximal
  // domains (the global top need not be relevant), so multiplicity is
  // reported rather than rejected.
  r.check("has-maximal", n_max >= 1, std::to_string(n_max) + " maximal domains");
  r.measure("n_maximal", n_max);
  if (top >= 0) r.measure("nesting_height", h.height(top));

  // bounded orthogonal cliques: measure the exact maximum
  {
    int best = 0;
    std::vector<int> cur;
    auto grow = [&](auto&& self, int next) -> void {
      best = std::max(best, (int)cur.size());
      for (int u = next; u < h.n; ++u) {
        bool ok = true;
        for (int v : cur)
          if (h.rel[v][u] != kRelOrth) ok = false;
        if (!ok) continue;
        cur.push_back(u);
        self(self, u + 1);
        cur.pop_back();
      }
    };
    grow(grow, 0);
    r.measure("max_orth_clique", best);
  }

  // cluster points and projections
  for (int u = 0; u < h.n; ++u)
    for (int v = 0; v < h.n; ++v) {
      bool wants_cluster = h.rel[u][v] == kRelContains || h.rel[u][v] == kRelTrans;
      if (wants_cluster) {
        if (h.cluster[u][v] < 0 || h.cluster[u][v] > h.len[u])
          r.check("cluster-point-range", false, pair_wit(u, v));
      } else if (h.cluster[u][v] != -1) {
        r.check("cluster-point-spurious", false, pair_wit(u, v));
      }
      if (h.rel[u][v] == kRelContains) {
        int m = h.midval[u][v], c = h.cluster[u][v];
        if (m < 0 || m > h.len[v]) {
          r.check("projection-range", false, pair_wit(u, v));
          continue;
        }
        // consistency at the marked points
        if (c == 0 && m != 0) r.check("projection-consistency", false, pair_wit(u, v));
        if (c == h.len[u] && m != h.len[v])
          r.check("projection-consistency", false, pair_wit(u, v));
        // BGI on both components of T_u minus the cluster point
        for (int t = 0; t < c; ++t)
          if (h.proj(u, v, t) != 0) r.check("bgi", false, pair_wit(u, v));
        for (int t = c + 1; t <= h.len[u]; ++t)
          if (h.proj(u, v, t) != h.len[v]) r.check("bgi", false, pair_wit(u, v));
      } else if (h.midval[u][v] != -1) {
        r.check("projection-spurious", false, pair_wit(u, v));
      }
    }

  // item (7): transverse siblings inside a common parent
  for (int u = 0; u < h.n; ++u)
    for (int v = 0; v < h.n; ++v)
      for (int w = 0; w < h.n; ++w) {
        if (v == w || h.rel[u][v] != kRelContains || h.rel[u][w] != kRelContains)
          continue;
        if (h.rel[v][w] != kRelTrans) continue;
        if (h.cluster[u][v] == h.cluster[u][w]) continue;
        if (h.proj(u, v, h.cluster[u][w]) != h.cluster[v][w])
          r.check("nested-transverse-compatibility", false,
                  pair_wit(u, v) + " vs " + std::to_string(w));
      }

  // the two marked tuples must be 0-consistent
  {
    std::vector<int> a(h.n, 0), b = h.len;
    r.check("marked-tuples-consistent", h.consistent(a) && h.consistent(b), "");
  }
  if (r.ok()) r.check("hfi-axioms", true, "");
  return r;
}

int QComplex::index_of(const std::vector<int>& t) const {
  auto it = std::lower_bound(verts.begin(), verts.end(), t);
  if (it == verts.end() || *it != t) return -1;
  return (int)(it - verts.begin());
}

int QComplex::dist(int i, int j) const {
  int d = 0;
  for (int u = 0; u < h.n; ++u) d += std::abs(verts[i][u] - verts[j][u]);
  return d;
}

Vertex QComplex::mask(const std::vector<int>& t) const {
  Vertex out = 0;
  for (int u = 0; u < h.n; ++u)
    for (int e = 0; e < h.len[u]; ++e)
      if (t[u] > e) out |= Vertex(1) << (wall_off[u] + e);
  return out;
}

CubeComplex QComplex::realize() const {
  if (n_walls > kMaxWalls)
    throw SpecError("InvalidHFI", "realization capped at " + std::to_string(kMaxWalls) + " walls");
  std::vector<Vertex> masks;
  for (auto& t : verts) masks.push_back(mask(t));
  int H = 2 * n_walls;
  // membership tables per half-space
  std::vector<std::vector<char>> in(H, std::vector<char>(masks.size(), 0));
  for (size_t i = 0; i < masks.size(); ++i)
    for (int w = 0; w < n_walls; ++w)
      in[Pocset::hs(w, (masks[i] >> w) & 1)][i] = 1;
  for (int hh = 0; hh < H; ++hh) {
    bool some = false;
    for (char c : in[hh]) some |= c;
    if (!some) throw SpecError("InvalidHFI", "factor edge not crossed");
  }
  CubeComplex cc;
  cc.p.n = n_walls;
  cc.p.above.assign(H, 0);
  for (int a = 0; a < H; ++a)
    for (int b = 0; b < H; ++b) {
      if (Pocset::wall_of(a) == Pocset::wall_of(b)) continue;
      bool subset = true, proper = false;
      for (size_t i = 0; i < masks.size(); ++i) {
        if (in[a][i] && !in[b][i]) subset = false;
        if (!in[a][i] && in[b][i]) proper = true;
      }
      if (subset && !proper) throw SpecError("InvalidHFI", "duplicate hyperplane");
      if (subset) cc.p.above[a] |= 1ull << b;
    }
  cc.verts = masks;
  std::sort(cc.verts.begin(), cc.verts.end());
  cc.dimension = pocset_width(cc.p);
  return cc;
}

namespace {

bool partial_ok(const HFI& h, const std::vector<int>& x, int assigned) {
  int u = assigned - 1;
  for (int v = 0; v < u; ++v) {
    if (h.rel[u][v] == kRelTrans) {
      if (x[u] != h.cluster[u][v] && x[v] != h.cluster[v][u]) return false;
    } else if (h.rel[u][v] == kRelNested) {
      if (x[v] != h.cluster[v][u] && x[u] != h.proj(v, u, x[v])) return false;
    } else if (h.rel[u][v] == kRelContains) {
      if (x[u] != h.cluster[u][v] && x[v] != h.proj(u, v, x[u])) return false;
    }
  }
  return true;
}

void enumerate_q(const HFI& h, std::vector<int>& x, int u,
                 std::vector<std::vector<int>>& out) {
  if (u == h.n) {
    out.push_back(x);
    return;
  }
  for (int t = 0; t <= h.len[u]; ++t) {
    x[u] = t;
    if (partial_ok(h, x, u + 1)) enumerate_q(h, x, u + 1, out);
  }
}

}  // namespace

QComplex build_q_complex(const HFI& h) {
  Report v = validate_hfi(h);
  if (!v.ok()) throw SpecError("InvalidHFI", v.first_failure());
  QComplex q;
  q.h = h;
  std::vector<int> x(h.n, 0);
  enumerate_q(h, x, 0, q.verts);
  std::sort(q.verts.begin(), q.verts.end());

  // brute-force oracle on the full product when feasible
  long long prod = 1;
  for (int u = 0; u < h.n; ++u) {
    prod *= h.len[u] + 1;
    if (prod > 200000) break;
  }
  if (prod <= 200000) {
    std::vector<std::vector<int>> oracle;
    std::vector<int> t(h.n, 0);
    for (;;) {
      if (h.consistent(t)) oracle.push_back(t);
      int u = h.n - 1;
      while (u >= 0 && t[u] == h.len[u]) t[u--] = 0;
      if (u < 0) break;
      ++t[u];
    }
    if (oracle != q.verts) throw SpecError("OracleMismatch", "0-consistent enumeration");
  }

  q.idx_a = q.index_of(std::vector<int>(h.n, 0));
  q.idx_b = q.index_of(h.len);
  if (q.idx_a < 0 || q.idx_b < 0)
    throw SpecError("InvalidHFI", "marked tuple not 0-consistent");
  q.wall_off.assign(h.n, 0);
  for (int u = 1; u < h.n; ++u) q.wall_off[u] = q.wall_off[u - 1] + h.len[u - 1];
  q.n_walls = q.wall_off[h.n - 1] + h.len[h.n - 1];
  return q;
}

std::vector<int> q_median(const QComplex& q, const std::vector<int>& p,
                          const std::vector<int>& r, const std::vector<int>& s) {
  if (q.index_of(p) < 0 || q.index_of(r) < 0 || q.index_of(s) < 0)
    throw SpecError("NotInQ", "median argument");
  std::vector<int> m(q.h.n);
  for (int u = 0; u < q.h.n; ++u)
    m[u] = p[u] + r[u] + s[u] - std::max({p[u], r[u], s[u]}) -
           std::min({p[u], r[u], s[u]});
  if (q.index_of(m) < 0) throw SpecError("OracleMismatch", "median not 0-consistent");
  return m;
}

namespace {

// exhaustive lexicographically-minimal 0-consistent preimage over the boxes
bool section_search(const HFI& h, const std::vector<std::pair<int, int>>& box,
                    std::vector<int>& x, int u) {
  if (u == h.n) return true;
  for (int t = box[u].first; t <= box[u].second; ++t) {
    x[u] = t;
    if (!partial_ok(h, x, u + 1)) continue;
    if (section_search(h, box, x, u + 1)) return true;
  }
  return false;
}

}  // namespace

TrimResult trim_hfi(const HFI& h, const TrimmingSetup& setup) {
  Report hv = validate_hfi(h);
  if (!hv.ok()) throw SpecError("InvalidHFI", hv.first_failure());
  if ((int)setup.segs.size() >= setup.B)
    throw SpecError("InadmissibleSetup", "too many trimming intervals");
  std::vector<std::vector<std::pair<int, int>>> per(h.n);
  for (auto& s : setup.segs) {
    if (s.u < 0 || s.u >= h.n) throw SpecError("InadmissibleSetup", "unknown domain");
    int l = s.hi - s.lo;
    if (l < 1 || l > setup.B || s.lo < 0 || s.hi > h.len[s.u])
      throw SpecError("InadmissibleSetup", "bad segment length");
    // open interval must avoid marked and cluster points
    for (int v = 0; v < h.n; ++v) {
      int c = h.cluster[s.u][v];
      if (c > s.lo && c < s.hi)
        throw SpecError("InadmissibleSetup", "segment crosses a cluster point");
    }
    per[s.u].push_back({s.lo, s.hi});
  }
  for (auto& v : per) {
    std::sort(v.begin(), v.end());
    for (size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i].second > v[i + 1].first)
        throw SpecError("InadmissibleSetup", "overlapping segments");
  }

  TrimResult res;
  res.delta_map.resize(h.n);
  std::vector<int> new_len(h.n);
  for (int u = 0; u < h.n; ++u) {
    res.delta_map[u].resize(h.len[u] + 1);
    for (int t = 0; t <= h.len[u]; ++t) {
      int cut = 0;
      for (auto& s : per[u]) cut += std::max(0, std::min(t, s.second) - s.first);
      res.delta_map[u][t] = t - cut;
    }
    new_len[u] = res.delta_map[u][h.len[u]];
    if (new_len[u] == 0) {
      res.dropped.push_back(u);
      res.dropped_diam.push_back(h.len[u]);
    } else {
      res.live.push_back(u);
    }
  }

  HFI& tr = res.trimmed;
  tr.init((int)res.live.size());
  for (int i = 0; i < tr.n; ++i) {
    int u = res.live[i];
    tr.len[i] = new_len[u];
    for (int j = 0; j < tr.n; ++j) {
      int v = res.live[j];
      tr.rel[i][j] = h.rel[u][v];
      if (h.cluster[u][v] >= 0) tr.cluster[i][j] = res.delta_map[u][h.cluster[u][v]];
      if (h.midval[u][v] >= 0) {
        tr.midval[i][j] = res.delta_map[v][h.midval[u][v]];
        // a cluster point collapsed onto a marked endpoint pins the
        // projection value there (endpoint consistency of the quotient)
        if (tr.cluster[i][j] == 0) tr.midval[i][j] = 0;
        if (tr.cluster[i][j] == new_len[u]) tr.midval[i][j] = new_len[v];
      }
    }
  }

  res.q = build_q_complex(h);
  res.qp = build_q_complex(tr);

  auto collapse_tuple = [&](const std::vector<int>& t) {
    std::vector<int> out(tr.n);
    for (int i = 0; i < tr.n; ++i) out[i] = res.delta_map[res.live[i]][t[res.live[i]]];
    return out;
  };
  res.delta.resize(res.q.verts.size());
  std::vector<char> hit(res.qp.verts.size(), 0);
  bool delta_in = true;
  for (size_t i = 0; i < res.q.verts.size(); ++i) {
    int j = res.qp.index_of(collapse_tuple(res.q.verts[i]));
    if (j < 0) {
      delta_in = false;
      break;
    }
    res.delta[i] = j;
    hit[j] = 1;
  }
  res.report.check("delta-into-qprime", delta_in, "");
  bool surj = delta_in;
  for (char c : hit) surj = surj && c;
  res.report.check("delta-surjective", surj, "");

  // the section, appendix case analysis with an exhaustive fallback
  std::vector<int> order(h.n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h.height(a) < h.height(b); });
  std::vector<int> live_index(h.n, -1);
  for (int i = 0; i < tr.n; ++i) live_index[res.live[i]] = i;

  bool xi_ok = true, id_ok = true;
  for (size_t yi = 0; yi < res.qp.verts.size(); ++yi) {
    const std::vector<int>& yp = res.qp.verts[yi];
    auto ycoord = [&](int u) { return live_index[u] < 0 ? 0 : yp[live_index[u]]; };
    std::vector<std::pair<int, int>> box(h.n);
    for (int u = 0; u < h.n; ++u) {
      int lo = h.len[u], hi = 0, y = ycoord(u);
      for (int t = 0; t <= h.len[u]; ++t)
        if (res.delta_map[u][t] == y) {
          lo = std::min(lo, t);
          hi = std::max(hi, t);
        }
      box[u] = {lo, hi};
    }
    std::vector<int> x(h.n, -1);
    bool need_fallback = false;
    for (int u : order) {
      if (box[u].first == box[u].second) {
        x[u] = box[u].first;
        continue;
      }
      // candidates forced by transverse and nested neighbors of u
      int cand = -1;
      bool conflict = false;
      for (int v = 0; v < h.n && !conflict; ++v) {
        int want = -1;
        if (h.rel[u][v] == kRelTrans && live_index[v] >= 0) {
          if (ycoord(v) != res.delta_map[v][h.cluster[v][u]]) want = h.cluster[u][v];
        } else if (h.rel[u][v] == kRelContains && live_index[u] >= 0 &&
                   live_index[v] >= 0) {
          // collapsed projection of y_u compared against y_v
          int c0 = res.delta_map[u][h.cluster[u][v]], yv;
          if (ycoord(u) < c0)
            yv = 0;
          else if (ycoord(u) > c0)
            yv = tr.len[live_index[v]];
          else
            yv = res.delta_map[v][h.midval[u][v]];
          if (ycoord(v) != yv) want = h.cluster[u][v];
        }
        if (want < 0) continue;
        if (cand >= 0 && cand != want) conflict = true;
        cand = want;
      }
      if (conflict || (cand >= 0 && (cand < box[u].first || cand > box[u].second))) {
        need_fallback = true;
        break;
      }
      if (cand >= 0) {
        x[u] = cand;
        continue;
      }
      // free choice: prefer a point that is neither marked nor a cluster point
      int pick = -1;
      for (int t = box[u].first; t <= box[u].second && pick < 0; ++t) {
        bool special = t == 0 || t == h.len[u];
        for (int v = 0; v < h.n; ++v)
          if (h.cluster[u][v] == t) special = true;
        if (!special) pick = t;
      }
      x[u] = pick >= 0 ? pick : box[u].first;
    }
    if (need_fallback || !h.consistent(x)) {
      ++res.fallbacks;
      std::fill(x.begin(), x.end(), -1);
      if (!section_search(h, box, x, 0))
        throw SpecError("SectionFailure",
                        "no 0-consistent preimage for vertex " + std::to_string(yi));
    }
    int xi_idx = res.q.index_of(x);
    if (xi_idx < 0) xi_ok = false;
    if (xi_idx >= 0 && res.delta[xi_idx] != (int)yi) id_ok = false;
    res.xi.push_back(x);
  }
  res.report.check("xi-in-q", xi_ok, "");
  res.report.check("delta-xi-identity", id_ok, "");

  int before = 0, after = 0;
  for (int u = 0; u < h.n; ++u) before += h.len[u];
  for (int i = 0; i < tr.n; ++i) after += tr.len[i];
  res.deleted_hyperplanes = before - after;
  res.report.measure("deleted_hyperplanes", res.deleted_hyperplanes);
  res.report.check("deleted-bound", res.deleted_hyperplanes <= setup.B * setup.B,
                   std::to_string(res.deleted_hyperplanes));

  int worst = 0;
  if (delta_in)
    for (size_t i = 0; i < res.q.verts.size(); ++i)
      for (size_t j = i + 1; j < res.q.verts.size(); ++j)
        worst = std::max(worst, std::abs(res.q.dist((int)i, (int)j) -
                                         res.qp.dist(res.delta[i], res.delta[j])));
  res.report.measure("metric_distortion", worst);
  res.report.check("metric-distortion-bound", worst <= setup.B * setup.B,
                   std::to_string(worst));
  res.report.measure("section_fallbacks", res.fallbacks);
  return res;
}

CubicalIso induce_isomorphism(const HFI& ha, const HFI& hb,
                              const std::vector<std::vector<int>>& maps) {
  if (ha.n != hb.n || ha.rel != hb.rel)
    throw SpecError("ConditionViolated", "index sets or relations differ");
  if ((int)maps.size() != ha.n)
    throw SpecError("ConditionViolated", "one map per domain required");
  auto viol = [](int u, int item) {
    return SpecError("ConditionViolated",
                     "domain " + std::to_string(u) + " item " + std::to_string(item));
  };
  for (int u = 0; u < ha.n; ++u) {
    if (ha.len[u] != hb.len[u] || (int)maps[u].size() != ha.len[u] + 1)
      throw viol(u, 0);
    for (int t = 0; t <= ha.len[u]; ++t)
      if (maps[u][t] < 0 || maps[u][t] > hb.len[u]) throw viol(u, 0);
    for (int t = 0; t < ha.len[u]; ++t)
      if (std::abs(maps[u][t + 1] - maps[u][t]) != 1) throw viol(u, 0);
    // item 1: marked points
    if (maps[u][0] != 0 || maps[u][ha.len[u]] != hb.len[u]) throw viol(u, 1);
  }
  for (int u = 0; u < ha.n; ++u)
    for (int v = 0; v < ha.n; ++v)
      if (ha.cluster[u][v] >= 0 && maps[u][ha.cluster[u][v]] != hb.cluster[u][v])
        throw viol(u, 2);  // item 2: cluster points
  for (int u = 0; u < ha.n; ++u)
    for (int v = 0; v < ha.n; ++v)
      if (ha.rel[u][v] == kRelContains)  // item 3: projection equivariance
        for (int t = 0; t <= ha.len[u]; ++t)
          if (hb.proj(u, v, maps[u][t]) != maps[v][ha.proj(u, v, t)]) throw viol(v, 3);

  QComplex qa = build_q_complex(ha), qb = build_q_complex(hb);
  CubicalIso iso;
  std::vector<char> hit(qb.verts.size(), 0);
  bool vmap_ok = true;
  for (auto& t : qa.verts) {
    std::vector<int> img(ha.n);
    for (int u = 0; u < ha.n; ++u) img[u] = maps[u][t[u]];
    int j = qb.index_of(img);
    if (j < 0) {
      vmap_ok = false;
      break;
    }
    iso.vmap.push_back(j);
    hit[j] = 1;
  }
  for (char c : hit) vmap_ok = vmap_ok && c;
  iso.report.check("vertex-bijection",
                   vmap_ok && iso.vmap.size() == qa.verts.size() &&
                       qa.verts.size() == qb.verts.size(),
                   "");

  if (qa.n_walls <= kMaxWalls) {
    // certify on the realized wallspaces
    CubeComplex ca = qa.realize(), cb = qb.realize();
    std::vector<int> bij(2 * qa.n_walls);
    for (int u = 0; u < ha.n; ++u)
      for (int e = 0; e < ha.len[u]; ++e) {
        int w = qa.wall_off[u] + e;
        int lo = std::min(maps[u][e], maps[u][e + 1]);
        int flip = maps[u][e + 1] < maps[u][e];
        int w2 = qb.wall_off[u] + lo;
        bij[Pocset::hs(w, 0)] = Pocset::hs(w2, flip);
        bij[Pocset::hs(w, 1)] = Pocset::hs(w2, 1 - flip);
      }
    iso.cert = check_halfspace_isomorphism(ca, cb, bij);
    iso.report.check("halfspace-isomorphism", iso.cert.ok, iso.cert.violation);
    return iso;
  }
  // over the mask cap: a bijection of median graphs preserving edges both
  // ways is a cubical isomorphism, so certify on the 1-skeleta
  bool edges_ok = vmap_ok;
  for (size_t i = 0; i < qa.verts.size() && edges_ok; ++i) {
    int deg_a = 0, deg_b = 0;
    auto t = qa.verts[i];
    auto s = qb.verts[iso.vmap[i]];
    for (int u = 0; u < ha.n && edges_ok; ++u)
      for (int d : {-1, 1}) {
        t[u] += d;
        int j = qa.index_of(t);
        t[u] -= d;
        if (j >= 0) {
          ++deg_a;
          if (qb.dist(iso.vmap[i], iso.vmap[j]) != 1) edges_ok = false;
        }
        s[u] += d;
        if (qb.index_of(s) >= 0) ++deg_b;
        s[u] -= d;
      }
    if (deg_a != deg_b) edges_ok = false;
  }
  iso.cert.ok = edges_ok;
  if (!edges_ok) iso.cert.violation = "edge not preserved";
  iso.report.check("skeleton-isomorphism", edges_ok, iso.cert.violation);
  return iso;
}

bool projection_is_geodesic(const QComplex& q, const std::vector<int>& path, int u) {
  if (path.empty()) throw SpecError("NotAGeodesic", "empty path");
  for (int i : path)
    if (i < 0 || i >= (int)q.verts.size()) throw SpecError("NotAGeodesic", "unknown vertex");
  for (size_t i = 0; i + 1 < path.size(); ++i)
    if (q.dist(path[i], path[i + 1]) != 1)
      throw SpecError("NotAGeodesic", "non-edge step " + std::to_string(i));
  if ((int)path.size() - 1 != q.dist(path.front(), path.back()))
    throw SpecError("NotAGeodesic", "path longer than the distance");
  bool up = true, down = true;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    int a = q.verts[path[i]][u], b = q.verts[path[i + 1]][u];
    if (b < a) up = false;
    if (b > a) down = false;
  }
  return up || down;
}

HFI random_hfi(std::uint64_t seed, int max_domains, int max_len) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 17);
  int n = 2 + (int)(rng() % std::max(1, max_domains - 1));
  HFI h;
  h.init(n);
  h.len[0] = 2 + (int)(rng() % std::max(1, max_len - 1));
  for (int u = 1; u < n; ++u) {
    h.len[u] = 1 + (int)(rng() % max_len);
    h.rel[u][0] = kRelNested;
    h.rel[0][u] = kRelContains;
    h.cluster[0][u] = 1 + (int)(rng() % (h.len[0] - 1));
    h.midval[0][u] = (int)(rng() % (h.len[u] + 1));
  }
  // Transverse orientations must come from a single linear order on the
  // children (as for subintervals laid out along a common geodesic): per-pair
  // random orientations can produce a cyclic pinning pattern, which no
  // interval system realizes and which disconnects the 0-consistent set.
  std::vector<int> pri(n);
  for (int u = 1; u < n; ++u) pri[u] = (int)(rng() % 1024);
  for (int v = 1; v < n; ++v)
    for (int w = v + 1; w < n; ++w) {
      int cv = h.cluster[0][v], cw = h.cluster[0][w];
      bool orth = (rng() % 2) == 0;
      if (orth) {
        h.rel[v][w] = h.rel[w][v] = kRelOrth;
        continue;
      }
      h.rel[v][w] = h.rel[w][v] = kRelTrans;
      bool v_first = cv < cw || (cv == cw && (pri[v] < pri[w] ||
                                              (pri[v] == pri[w] && v < w)));
      if (v_first) {
        h.cluster[v][w] = h.len[v];
        h.cluster[w][v] = 0;
      } else {
        h.cluster[v][w] = 0;
        h.cluster[w][v] = h.len[w];
      }
    }
  return h;
}

}  // namespace scube
