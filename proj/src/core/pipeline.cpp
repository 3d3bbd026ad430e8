#include "scube/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <string>

#include "scube/stable_decomposition.hpp"

namespace scube {

namespace {

std::uint64_t mix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// smallest B with x <= B*y + B, i.e. ceil(x / (y+1))
int qi_const(int x, int y) { return (x + y) / (y + 1); }

int linf(const std::vector<int>& x, const std::vector<int>& y) {
  int d = 0;
  for (size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace

int pair_distance(const HHSInstance& inst, const Point& x, const Point& y) {
  if (x == y) return 0;
  Hull h = build_hull(inst, x, y, inst.c.theta);
  return h.dist(h.index_of(x), h.index_of(y));
}

// ---------------------------------------------------------------------------
// NR paths in Q coordinates

std::vector<std::vector<int>> q_nr_path(const QComplex& q,
                                        const std::vector<int>& from,
                                        const std::vector<int>& to) {
  if (q.index_of(from) < 0 || q.index_of(to) < 0)
    throw SpecError("NotInQ", "q_nr_path endpoint");
  int m = q.h.n;
  int nv = (int)q.verts.size();
  int words = (nv + 63) / 64;

  // oriented walls separating from and to, with their to-side vertex sets
  struct Wall {
    int u, t;  // to-side is {x_u > t} when up, {x_u <= t} when !up
    bool up;
    std::vector<std::uint64_t> side;
    int count = 0;
  };
  std::vector<Wall> walls;
  for (int u = 0; u < m; ++u) {
    int lo = std::min(from[u], to[u]), hi = std::max(from[u], to[u]);
    for (int t = lo; t < hi; ++t) {
      Wall w;
      w.u = u;
      w.t = t;
      w.up = to[u] > t;
      w.side.assign(words, 0);
      for (int i = 0; i < nv; ++i) {
        bool in = w.up ? q.verts[i][u] > t : q.verts[i][u] <= t;
        if (in) {
          w.side[i >> 6] |= 1ull << (i & 63);
          ++w.count;
        }
      }
      walls.push_back(std::move(w));
    }
  }
  int W = (int)walls.size();
  auto proper_sub = [&](int a, int b) {
    if (walls[a].count >= walls[b].count) return false;
    for (int k = 0; k < words; ++k)
      if (walls[a].side[k] & ~walls[b].side[k]) return false;
    return true;
  };
  std::vector<std::vector<char>> sub(W, std::vector<char>(W, 0));
  for (int a = 0; a < W; ++a)
    for (int b = 0; b < W; ++b)
      if (a != b) sub[a][b] = proper_sub(a, b);

  std::vector<std::vector<int>> path = {from};
  std::vector<int> p = from;
  for (int guard = 0; p != to; ++guard) {
    if (guard > W + 1) throw SpecError("NotAGeodesic", "nr path failed to terminate");
    std::vector<int> sep;
    for (int w = 0; w < W; ++w) {
      int pu = p[walls[w].u];
      bool p_side = walls[w].up ? pu > walls[w].t : pu <= walls[w].t;
      if (!p_side) sep.push_back(w);
    }
    std::vector<int> step(m, 0);
    for (int w : sep) {
      bool maximal = true;  // no separating wall with a strictly larger b-side
      for (int w2 : sep)
        if (w2 != w && sub[w][w2]) maximal = false;
      if (!maximal) continue;
      const Wall& wa = walls[w];
      int want = wa.up ? p[wa.u] : p[wa.u] - 1;  // must be adjacent to p
      if (wa.t != want)
        throw SpecError("NotAGeodesic", "transitional wall not adjacent");
      step[wa.u] = wa.up ? 1 : -1;
    }
    for (int u = 0; u < m; ++u) p[u] += step[u];
    if (q.index_of(p) < 0)
      throw SpecError("NotAGeodesic", "nr step left the 0-consistent set");
    path.push_back(p);
  }

  // oracle: the realized complex when it fits in the bitmask cap
  if (q.n_walls <= kMaxWalls && q.n_walls > 0) {
    try {
      CubeComplex cc = q.realize();
      HullComplex hc = hull_complex(cc, q.mask(from), q.mask(to));
      NormalPath np = nr_path(hc.cc, hc.a, hc.b);
      if ((int)np.vertices.size() != (int)path.size())
        throw SpecError("OracleMismatch", "nr path length");
      for (size_t i = 0; i < path.size(); ++i)
        if (hc.restriction.apply(q.mask(path[i])) != np.vertices[i])
          throw SpecError("OracleMismatch", "nr path vertex " + std::to_string(i));
    } catch (const SpecError& e) {
      if (e.kind == "OracleMismatch") throw;
      // realization rejected (duplicate hyperplanes etc); skip the cross-check
    }
  }
  return path;
}

namespace {

// one-coordinate-at-a-time refinement of a path with multi-wall steps
std::vector<int> l1_refine(const QComplex& q,
                           const std::vector<std::vector<int>>& path) {
  std::vector<int> out = {q.index_of(path[0])};
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    std::vector<int> cur = path[i];
    for (size_t u = 0; u < cur.size(); ++u) {
      while (cur[u] != path[i + 1][u]) {
        cur[u] += path[i + 1][u] > cur[u] ? 1 : -1;
        int id = q.index_of(cur);
        if (id < 0) throw SpecError("NotAGeodesic", "refinement left Q");
        out.push_back(id);
      }
    }
  }
  return out;
}

// random monotone staircase of the given length, or empty on failure
std::vector<std::vector<int>> sample_linf_geodesic(const QComplex& q,
                                                   const std::vector<int>& from,
                                                   const std::vector<int>& to,
                                                   int n, std::uint64_t& s) {
  int m = q.h.n;
  std::vector<std::vector<int>> path = {from};
  std::vector<int> p = from;
  for (int k = 0; k < n; ++k) {
    int r = n - k;
    std::vector<int> forced(m, 0), optional_move(m, 0);
    for (int u = 0; u < m; ++u) {
      int diff = to[u] - p[u];
      if (diff == 0) continue;
      int sgn = diff > 0 ? 1 : -1;
      if (std::abs(diff) >= r)
        forced[u] = sgn;
      else
        optional_move[u] = sgn;
    }
    bool placed = false;
    for (int attempt = 0; attempt < 6 && !placed; ++attempt) {
      std::vector<int> cand = p;
      for (int u = 0; u < m; ++u) {
        int mv = forced[u];
        if (!mv && optional_move[u] && (attempt == 4 || (mix(s) & 1)))
          mv = optional_move[u];
        if (attempt == 5) mv = forced[u];  // last resort: forced only
        cand[u] += mv;
      }
      if (q.index_of(cand) >= 0) {
        p = cand;
        placed = true;
      }
    }
    if (!placed) return {};
    path.push_back(p);
  }
  if (p != to) return {};
  return path;
}

int path_zeta(const Hull& hull, const std::vector<int>& omega_idx,
              const std::vector<std::vector<int>>& qpath, const QComplex& q) {
  int z = 1;
  std::vector<int> ids;
  for (const auto& v : qpath) ids.push_back(q.index_of(v));
  for (size_t i = 0; i < ids.size(); ++i)
    for (size_t j = i + 1; j < ids.size(); ++j) {
      int dx = hull.dist(omega_idx[ids[i]], omega_idx[ids[j]]);
      int dt = (int)(j - i);
      z = std::max({z, qi_const(dx, dt), qi_const(dt, dx)});
    }
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// cubical models

CubicalModel build_cubical_model(const HHSInstance& inst, const Point& a,
                                 const Point& b) {
  CubicalModel md;
  md.in.inst = inst;
  md.in.a = a;
  md.in.b = b;
  auto sys = build_interval_system(inst, a, b, inst.c.K);
  if (!sys.report.ok())
    throw SpecError("InvalidIntervalSystem", sys.report.first_failure());
  md.cs = collapse_system(sys, inst.c.r1, inst.c.r2);
  const HHSInstance& in = md.in.inst;
  const QComplex& q = md.cs.q;
  Report& r = md.report;

  std::vector<int> omega_idx;
  for (const auto& v : q.verts) {
    Point x = lift_omega_hat(md.cs, v);
    int hi = md.cs.hull.index_of(x);
    r.check("omega-in-hull", hi >= 0, "");
    md.omega.push_back(x);
    omega_idx.push_back(hi);
  }

  int nv = (int)q.verts.size();
  md.nr = nv > 1 ? q_nr_path(q, q.verts[q.idx_a], q.verts[q.idx_b])
                 : std::vector<std::vector<int>>{q.verts[q.idx_a]};
  r.check("nr-endpoints",
          q.index_of(md.nr.front()) == q.idx_a && q.index_of(md.nr.back()) == q.idx_b,
          "");

  // dimension: largest pairwise orthogonal family
  int dim = q.h.n == 0 ? 0 : 1;
  {
    int m = q.h.n;
    std::vector<int> cur;
    auto grow = [&](auto&& self, int next) -> void {
      dim = std::max(dim, (int)cur.size());
      for (int u = next; u < m; ++u) {
        bool ok = true;
        for (int v : cur)
          if (q.h.rel[v][u] != kRelOrth) ok = false;
        if (!ok) continue;
        cur.push_back(u);
        self(self, u + 1);
        cur.pop_back();
      }
    };
    grow(grow, 0);
  }

  // quasi-isometry constants of Omega-hat over a seeded source sample
  int b_qi = 1;
  {
    std::vector<int> sources;
    if (nv <= 48) {
      sources.resize(nv);
      std::iota(sources.begin(), sources.end(), 0);
    } else {
      std::uint64_t s = 4242;
      std::vector<char> used(nv, 0);
      sources = {q.idx_a, q.idx_b};
      used[q.idx_a] = used[q.idx_b] = 1;
      while ((int)sources.size() < 48) {
        int i = (int)(mix(s) % nv);
        if (!used[i]) {
          used[i] = 1;
          sources.push_back(i);
        }
      }
    }
    for (int i : sources)
      for (int j = 0; j < nv; ++j) {
        if (i == j) continue;
        int dq = q.dist(i, j);
        int dx = md.cs.hull.dist(omega_idx[i], omega_idx[j]);
        b_qi = std::max({b_qi, qi_const(dx, dq), qi_const(dq, dx)});
      }
  }

  // quasi-geodesic constants of the NR path plus sampled linf geodesics
  int zeta = md.nr.size() > 1 ? path_zeta(md.cs.hull, omega_idx, md.nr, q) : 1;
  int sampled = 0;
  if (md.nr.size() > 1) {
    std::uint64_t s = 99;
    int n = (int)md.nr.size() - 1;
    for (int k = 0; k < 6; ++k) {
      auto g = sample_linf_geodesic(q, md.nr.front(), md.nr.back(), n, s);
      if (g.empty()) continue;
      ++sampled;
      zeta = std::max(zeta, path_zeta(md.cs.hull, omega_idx, g, q));
    }
  }

  md.B0 = std::max({1, dim, b_qi, zeta});
  r.measure("B0", md.B0);
  r.measure("dimension", dim);
  r.measure("qi_constant", b_qi);
  r.measure("zeta", zeta);
  r.measure("nr_length", (int)md.nr.size() - 1);
  r.measure("linf_samples", sampled);
  // the lqc-pair inequalities against the recorded constant
  r.check("qi-bound", b_qi <= md.B0, "");
  r.check("quasi-geodesic-bound", zeta <= md.B0, "");
  (void)in;
  return md;
}

BicombingPath bicombing_path(const CubicalModel& model) {
  BicombingPath out;
  out.q_path = model.nr;
  const QComplex& q = model.cs.q;
  const Hull& hull = model.cs.hull;
  for (const auto& v : out.q_path) out.gamma.push_back(model.omega[q.index_of(v)]);
  // anchor: Gamma(0) = a and Gamma(n) = b exactly; Omega-hat only promises
  // the endpoint clusters, so record the drift and override
  Point ga = gate(hull, model.in.a), gb = gate(hull, model.in.b);
  int drift = std::max(hull.dist(hull.index_of(ga), hull.index_of(out.gamma.front())),
                       hull.dist(hull.index_of(gb), hull.index_of(out.gamma.back())));
  out.report.measure("endpoint_drift", drift);
  out.gamma.front() = ga;
  if (out.gamma.size() == 1 && ga != gb) out.gamma.push_back(gb);
  out.gamma.back() = gb;
  out.report.check("endpoints", out.gamma.front() == ga && out.gamma.back() == gb, "");
  if (out.gamma.size() > 1) {
    std::vector<int> ids;
    for (const auto& x : out.gamma) ids.push_back(hull.index_of(x));
    out.zeta = 1;
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j) {
        int dx = hull.dist(ids[i], ids[j]);
        int dt = (int)(j - i);
        out.zeta = std::max({out.zeta, qi_const(dx, dt), qi_const(dt, dx)});
      }
  } else {
    out.zeta = 1;
  }
  out.report.measure("zeta", out.zeta);
  // per-domain monotonicity along the l1 refinement
  if (out.q_path.size() > 1) {
    auto refined = l1_refine(q, out.q_path);
    for (int u = 0; u < q.h.n; ++u)
      out.report.check("projection-monotone", projection_is_geodesic(q, refined, u),
                       "domain " + std::to_string(u));
  }
  return out;
}

// ---------------------------------------------------------------------------
// stable diagrams

namespace {

int coord_sum_dist(const HHSInstance& inst, const Point& x, const Point& y) {
  int d = 0;
  for (int u = 0; u < inst.n; ++u) d += inst.tree[u].dist(x[u], y[u]);
  return d;
}

std::vector<int> chain_set(const HHSInstance& inst, const std::vector<int>& doms,
                           int U) {
  std::vector<int> Y;
  for (int V : doms)
    if (inst.rel[U][V] == kRelContains)
      for (int p : inst.rho_set[U][V]) Y.push_back(p);
  std::sort(Y.begin(), Y.end());
  Y.erase(std::unique(Y.begin(), Y.end()), Y.end());
  return Y;
}

// trimming segments for one collapsed interval: the qmap images of the
// complement components, split at registered cluster points
void push_segments(const CollapsedSystem& cs, int i,
                   const std::vector<std::pair<int, int>>& comps,
                   std::vector<TrimSegment>& out) {
  for (auto [lo, hi] : comps) {
    int ql = cs.qmap[i][lo], qh = cs.qmap[i][hi];
    if (qh <= ql) continue;
    std::vector<int> cuts = {ql};
    for (int j = 0; j < (int)cs.sys.doms.size(); ++j) {
      int c = cs.h.cluster[i][j];
      if (c > ql && c < qh) cuts.push_back(c);
    }
    cuts.push_back(qh);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t k = 0; k + 1 < cuts.size(); ++k)
      out.push_back({i, cuts[k], cuts[k + 1]});
  }
}

}  // namespace

Point StableCubulationDiagram::omega0(int q0) const {
  return m1.omega[m1.cs.q.index_of(trim1.xi[q0])];
}

Point StableCubulationDiagram::omega0p(int q0p) const {
  return m2.omega[m2.cs.q.index_of(trim2.xi[q0p])];
}

StableCubulationDiagram build_stable_diagram(const HHSInstance& inst,
                                             const Point& a, const Point& b,
                                             const Point& a2, const Point& b2) {
  if (!inst.consistent(a2, inst.c.theta) || !inst.consistent(b2, inst.c.theta) ||
      coord_sum_dist(inst, a, a2) > 1 || coord_sum_dist(inst, b, b2) > 1)
    throw SpecError("NotAPerturbation", "endpoints moved more than one step");

  StableCubulationDiagram dg;
  dg.m1 = build_cubical_model(inst, a, b);
  dg.m2 = build_cubical_model(inst, a2, b2);
  Report& r = dg.report;
  const auto& U1 = dg.m1.cs.sys.doms;
  const auto& U2 = dg.m2.cs.sys.doms;

  std::vector<int> sym, shared0;
  std::set_symmetric_difference(U1.begin(), U1.end(), U2.begin(), U2.end(),
                                std::back_inserter(sym));
  std::set_intersection(U1.begin(), U1.end(), U2.begin(), U2.end(),
                        std::back_inserter(shared0));
  if ((int)sym.size() >= inst.c.N0)
    throw SpecError("PreconditionFailed",
                    "|U symdiff U'| = " + std::to_string(sym.size()));

  std::vector<int> involved;
  for (int U : shared0)
    if (chain_set(inst, U1, U) != chain_set(inst, U2, U) || a[U] != a2[U] ||
        b[U] != b2[U])
      involved.push_back(U);
  if ((int)involved.size() > inst.c.N0)
    throw SpecError("PreconditionFailed",
                    std::to_string(involved.size()) + " involved domains");
  r.measure("n_symdiff", (int)sym.size());
  r.measure("n_involved", (int)involved.size());

  int Kp = 0;
  for (int V : sym)
    Kp = std::max({Kp, inst.tree[V].dist(a[V], b[V]),
                   inst.tree[V].dist(a2[V], b2[V])});

  // stable pairs on the involved shared domains
  std::map<int, BuildResult> pairs;
  int L2 = 0, moves = 0;
  for (int U : involved) {
    EpsilonSetup s = build_setup(inst.tree[U], a[U], b[U],
                                 chain_set(inst, U1, U), inst.c.eps);
    EpsilonSetup sp = build_setup(inst.tree[U], a2[U], b2[U],
                                  chain_set(inst, U2, U), inst.c.eps);
    BuildResult br = build_stable_pair(s, sp, inst.c.r1, inst.c.r2, inst.c.N0,
                                       inst.c.E, inst.c.eps_prime);
    if (!br.thick.report.ok())
      throw SpecError("PreconditionFailed", br.thick.report.first_failure());
    int i1 = dg.m1.cs.sys.idx(U), i2 = dg.m2.cs.sys.idx(U);
    r.check("pair-matches-system",
            br.thick.s1.T.total_length() == dg.m1.cs.sys.T[i1].total_length() &&
                br.thick.s2.T.total_length() == dg.m2.cs.sys.T[i2].total_length(),
            "domain " + std::to_string(U));
    L2 = std::max(L2, br.thick.L);
    moves += br.moves;
    pairs.emplace(U, std::move(br));
  }
  r.measure("L2", L2);
  r.measure("moves", moves);

  // trimming setups: unstable material on shared domains, whole intervals on
  // the symmetric difference
  TrimmingSetup set1, set2;
  for (int U : involved) {
    const StablePair& p = pairs.at(U).thick;
    int i1 = dg.m1.cs.sys.idx(U), i2 = dg.m2.cs.sys.idx(U);
    push_segments(dg.m1.cs, i1,
                  complement_components(p.s1.T.total_length(), p.s1.stable), set1.segs);
    push_segments(dg.m2.cs, i2,
                  complement_components(p.s2.T.total_length(), p.s2.stable), set2.segs);
  }
  for (int V : sym) {
    int i1 = dg.m1.cs.sys.idx(V);
    if (i1 >= 0)
      push_segments(dg.m1.cs, i1, {{0, dg.m1.cs.sys.T[i1].total_length()}}, set1.segs);
    int i2 = dg.m2.cs.sys.idx(V);
    if (i2 >= 0)
      push_segments(dg.m2.cs, i2, {{0, dg.m2.cs.sys.T[i2].total_length()}}, set2.segs);
  }
  int maxseg = 0;
  for (auto& s : set1.segs) maxseg = std::max(maxseg, s.hi - s.lo);
  for (auto& s : set2.segs) maxseg = std::max(maxseg, s.hi - s.lo);
  dg.S0 = std::max({L2 * L2 + 2 * Kp * inst.c.N0, maxseg,
                    (int)set1.segs.size() + 1, (int)set2.segs.size() + 1, 1});
  set1.B = set2.B = dg.S0;
  r.measure("S0", dg.S0);

  dg.trim1 = trim_hfi(dg.m1.cs.h, set1);
  dg.trim2 = trim_hfi(dg.m2.cs.h, set2);
  r.check("trim1", dg.trim1.report.ok(), dg.trim1.report.first_failure());
  r.check("trim2", dg.trim2.report.ok(), dg.trim2.report.first_failure());
  r.measure("deleted1", dg.trim1.deleted_hyperplanes);
  r.measure("deleted2", dg.trim2.deleted_hyperplanes);
  r.check("deleted-bound", dg.trim1.deleted_hyperplanes <= dg.S0 * dg.S0 &&
                               dg.trim2.deleted_hyperplanes <= dg.S0 * dg.S0,
          "");

  // surviving domains must coincide as global ids
  std::vector<int> live1, live2;
  for (int i : dg.trim1.live) live1.push_back(U1[i]);
  for (int i : dg.trim2.live) live2.push_back(U2[i]);
  r.check("live-domains-match", live1 == live2, "");
  if (live1 != live2)
    throw SpecError("PreconditionFailed", "surviving domains differ");
  dg.shared = live1;

  // distinguished vertices survive to distinguished vertices
  r.check("distinguished",
          dg.trim1.delta[dg.m1.cs.q.idx_a] == dg.trim1.qp.idx_a &&
              dg.trim1.delta[dg.m1.cs.q.idx_b] == dg.trim1.qp.idx_b &&
              dg.trim2.delta[dg.m2.cs.q.idx_a] == dg.trim2.qp.idx_a &&
              dg.trim2.delta[dg.m2.cs.q.idx_b] == dg.trim2.qp.idx_b,
          "");

  // per-domain isometries
  std::vector<std::vector<int>> maps;
  for (size_t k = 0; k < dg.shared.size(); ++k) {
    int U = dg.shared[k];
    int i1 = dg.m1.cs.sys.idx(U), i2 = dg.m2.cs.sys.idx(U);
    int len1 = dg.trim1.trimmed.len[k], len2 = dg.trim2.trimmed.len[k];
    if (!pairs.count(U)) {  // uninvolved: identical intervals
      r.check("uninvolved-identical", len1 == len2, "domain " + std::to_string(U));
      std::vector<int> idm(len1 + 1);
      std::iota(idm.begin(), idm.end(), 0);
      maps.push_back(idm);
      continue;
    }
    const StablePair& p = pairs.at(U).thick;
    auto [ci1, ci2, ii] = collapse_to_isometry(p);
    int L1g = p.s1.T.total_length(), L2g = p.s2.T.total_length();
    bool agree = ci1.length == len1 && ci2.length == len2;
    for (int t = 0; t <= L1g && agree; ++t)
      agree = ci1.delta[t] == dg.trim1.delta_map[i1][dg.m1.cs.qmap[i1][t]];
    for (int t = 0; t <= L2g && agree; ++t)
      agree = ci2.delta[t] == dg.trim2.delta_map[i2][dg.m2.cs.qmap[i2][t]];
    r.check("collapse-agrees", agree, "domain " + std::to_string(U));
    if (!agree) throw SpecError("PreconditionFailed", "collapse maps disagree");
    std::vector<int> mp(len1 + 1, -1);
    for (size_t si = 0; si < p.s1.stable.size(); ++si)
      for (int t = p.s1.stable[si].first; t <= p.s1.stable[si].second; ++t)
        mp[ci1.delta[t]] = ci2.delta[p.s2.stable[si].first + t - p.s1.stable[si].first];
    for (size_t c = 0; c < ci1.comp_pos.size(); ++c)
      mp[ci1.comp_pos[c]] = ci2.comp_pos[ii.comp_map[c]];
    bool total = std::find(mp.begin(), mp.end(), -1) == mp.end();
    r.check("isometry-total", total, "domain " + std::to_string(U));
    if (!total) throw SpecError("PreconditionFailed", "partial interval isometry");
    maps.push_back(mp);
  }
  dg.iso = induce_isomorphism(dg.trim1.trimmed, dg.trim2.trimmed, maps);
  r.check("iso-certified", dg.iso.cert.ok, dg.iso.cert.violation);
  if (!dg.iso.cert.ok) throw SpecError("PreconditionFailed", dg.iso.cert.violation);

  // NR transfer, one hyperplane at a time: each single-wall deletion moves
  // the NR path by at most 1 in linf and changes its length by at most 1;
  // intermediate paths are computed, never assumed
  auto transfer = [&](const CubicalModel& md, const TrimmingSetup& setup,
                      const TrimResult& tr, const char* tag) {
    HFI cur = md.cs.h;
    std::vector<TrimSegment> segs = setup.segs;
    std::vector<std::vector<int>> path = md.nr;
    int step_drift = 0, deletions = 0, len_defect = 0;
    while (!segs.empty()) {
      TrimmingSetup one;
      one.B = 2;
      one.segs = {{segs.front().u, segs.front().lo, segs.front().lo + 1}};
      TrimResult step = trim_hfi(cur, one);
      if (!step.report.ok())
        throw SpecError("PreconditionFailed", step.report.first_failure());
      ++deletions;
      std::vector<std::vector<int>> mapped;
      for (const auto& v : path)
        mapped.push_back(step.qp.verts[step.delta[step.q.index_of(v)]]);
      auto next = step.qp.verts.size() > 1
                      ? q_nr_path(step.qp, step.qp.verts[step.qp.idx_a],
                                  step.qp.verts[step.qp.idx_b])
                      : std::vector<std::vector<int>>{step.qp.verts[0]};
      len_defect = std::max(len_defect,
                            (int)next.size() - (int)mapped.size());
      for (size_t i = 0; i < std::min(next.size(), mapped.size()); ++i)
        step_drift = std::max(step_drift, linf(next[i], mapped[i]));
      // rewrite the remaining segments in the new coordinates
      std::vector<int> new_idx(cur.n, -1);
      for (size_t k = 0; k < step.live.size(); ++k) new_idx[step.live[k]] = (int)k;
      std::vector<TrimSegment> nsegs;
      for (const auto& s : segs) {
        if (new_idx[s.u] < 0) continue;
        int lo = step.delta_map[s.u][s.lo], hi = step.delta_map[s.u][s.hi];
        if (hi > lo) nsegs.push_back({new_idx[s.u], lo, hi});
      }
      segs = std::move(nsegs);
      cur = step.trimmed;
      path = std::move(next);
    }
    // zero-length domains never carried a coordinate; drop them to line up
    // with the one-shot trim, which removes them outright
    std::vector<int> keep;
    for (int u = 0; u < cur.n; ++u)
      if (cur.len[u] > 0) keep.push_back(u);
    if ((int)keep.size() < cur.n) {
      std::vector<int> lens;
      for (int u : keep) lens.push_back(cur.len[u]);
      for (auto& v : path) {
        std::vector<int> t;
        for (int u : keep) t.push_back(v[u]);
        v = std::move(t);
      }
      cur.len = lens;  // only the lengths are compared below
    }
    r.check(std::string(tag) + "-composition", cur.len == tr.trimmed.len, "");
    r.check(std::string(tag) + "-length", len_defect <= 1,
            std::to_string(len_defect));
    r.check(std::string(tag) + "-drift", step_drift <= 1,
            std::to_string(step_drift));
    r.measure(std::string(tag) + "_deletions", deletions);
    // composed drift against the one-shot trim, recorded only
    std::vector<std::vector<int>> mapped;
    for (const auto& v : md.nr)
      mapped.push_back(tr.qp.verts[tr.delta[md.cs.q.index_of(v)]]);
    int composed = 0;
    for (size_t i = 0; i < std::min(path.size(), mapped.size()); ++i)
      composed = std::max(composed, linf(path[i], mapped[i]));
    r.measure(std::string(tag) + "_composed_drift", composed);
    return path;
  };
  auto nr0 = transfer(dg.m1, set1, dg.trim1, "transfer1");
  auto nr0p = transfer(dg.m2, set2, dg.trim2, "transfer2");

  // I_0 carries the downstairs NR path vertex-for-vertex
  if (nr0.size() == nr0p.size()) {
    bool vfv = true;
    for (size_t i = 0; i < nr0.size(); ++i) {
      int i1 = dg.trim1.qp.index_of(nr0[i]);
      int i2 = dg.trim2.qp.index_of(nr0p[i]);
      if (i1 < 0 || i2 < 0 || dg.iso.vmap[i1] != i2) vfv = false;
    }
    r.check("nr-iso-vertexwise", vfv, "");
  } else {
    r.check("nr-iso-vertexwise", false,
            std::to_string(nr0.size()) + " vs " + std::to_string(nr0p.size()));
  }

  // triangle defects in the hull metric, over a seeded vertex sample
  auto sample_ids = [&](int n) {
    std::vector<int> ids;
    if (n <= 400) {
      ids.resize(n);
      std::iota(ids.begin(), ids.end(), 0);
    } else {
      std::uint64_t s = 777;
      std::vector<char> used(n, 0);
      while ((int)ids.size() < 400) {
        int i = (int)(mix(s) % n);
        if (!used[i]) {
          used[i] = 1;
          ids.push_back(i);
        }
      }
    }
    return ids;
  };
  for (int v : sample_ids((int)dg.m1.cs.q.verts.size()))
    dg.top_defect = std::max(
        dg.top_defect, pair_distance(inst, dg.m1.omega[v],
                                     dg.omega0(dg.trim1.delta[v])));
  for (int v : sample_ids((int)dg.m2.cs.q.verts.size()))
    dg.bottom_defect = std::max(
        dg.bottom_defect, pair_distance(inst, dg.m2.omega[v],
                                        dg.omega0p(dg.trim2.delta[v])));
  for (int v : sample_ids((int)dg.trim1.qp.verts.size()))
    dg.Sigma = std::max(dg.Sigma,
                        pair_distance(inst, dg.omega0(v), dg.omega0p(dg.iso.vmap[v])));
  r.measure("top_defect", dg.top_defect);
  r.measure("bottom_defect", dg.bottom_defect);
  r.measure("Sigma", dg.Sigma);
  r.check("top-defect-bound", dg.top_defect <= dg.S0, std::to_string(dg.top_defect));
  r.check("bottom-defect-bound", dg.bottom_defect <= dg.S0,
          std::to_string(dg.bottom_defect));
  return dg;
}

// ---------------------------------------------------------------------------
// fellow traveling

FellowTravelReport fellow_traveling(const HHSInstance& inst, const Point& a,
                                    const Point& b, const Point& a2,
                                    const Point& b2) {
  FellowTravelReport ft;
  ft.diagram = build_stable_diagram(inst, a, b, a2, b2);
  StableCubulationDiagram& dg = ft.diagram;
  Report& r = ft.report;

  auto omega_of = [&](const CubicalModel& md, const std::vector<int>& v) {
    return md.omega[md.cs.q.index_of(v)];
  };
  ft.gamma1 = bicombing_path(dg.m1).gamma;
  ft.gamma2 = bicombing_path(dg.m2).gamma;
  size_t n = std::max(ft.gamma1.size(), ft.gamma2.size());
  while (ft.gamma1.size() < n) ft.gamma1.push_back(ft.gamma1.back());
  while (ft.gamma2.size() < n) ft.gamma2.push_back(ft.gamma2.back());

  auto nr0 = dg.trim1.qp.verts.size() > 1 && dg.trim1.trimmed.n > 0
                 ? q_nr_path(dg.trim1.qp, dg.trim1.qp.verts[dg.trim1.qp.idx_a],
                             dg.trim1.qp.verts[dg.trim1.qp.idx_b])
                 : std::vector<std::vector<int>>{
                       dg.trim1.qp.verts.empty() ? std::vector<int>{}
                                                 : dg.trim1.qp.verts[0]};
  auto nr0p = dg.trim2.qp.verts.size() > 1 && dg.trim2.trimmed.n > 0
                  ? q_nr_path(dg.trim2.qp, dg.trim2.qp.verts[dg.trim2.qp.idx_a],
                              dg.trim2.qp.verts[dg.trim2.qp.idx_b])
                  : std::vector<std::vector<int>>{
                        dg.trim2.qp.verts.empty() ? std::vector<int>{}
                                                  : dg.trim2.qp.verts[0]};

  auto at = [](const std::vector<std::vector<int>>& p, size_t t) {
    return p[std::min(t, p.size() - 1)];
  };
  for (size_t t = 0; t < n; ++t) {
    // (1) top triangle along the path
    Point x1 = omega_of(dg.m1, at(dg.m1.nr, t));
    Point y1 = dg.omega0(dg.trim1.delta[dg.m1.cs.q.index_of(at(dg.m1.nr, t))]);
    ft.terms[0] = std::max(ft.terms[0], pair_distance(inst, x1, y1));
    // (2) NR transfer downstairs
    Point z1 = dg.omega0(dg.trim1.qp.index_of(at(nr0, t)));
    ft.terms[1] = std::max(ft.terms[1], pair_distance(inst, y1, z1));
    // (3) middle triangle along the downstairs path
    Point z2 = dg.omega0p(dg.iso.vmap[dg.trim1.qp.index_of(at(nr0, t))]);
    ft.terms[2] = std::max(ft.terms[2], pair_distance(inst, z1, z2));
    // (4) primed NR transfer
    Point y2 = dg.omega0p(dg.trim2.delta[dg.m2.cs.q.index_of(at(dg.m2.nr, t))]);
    ft.terms[3] = std::max(ft.terms[3], pair_distance(inst, z2, y2));
    // (5) bottom triangle
    Point x2 = omega_of(dg.m2, at(dg.m2.nr, t));
    ft.terms[4] = std::max(ft.terms[4], pair_distance(inst, y2, x2));

    ft.sup = std::max(ft.sup, pair_distance(inst, ft.gamma1[t], ft.gamma2[t]));
  }

  ft.B0 = std::max({dg.m1.B0, dg.m2.B0, dg.S0, dg.Sigma, ft.terms[0], ft.terms[1],
                    ft.terms[2], ft.terms[3], ft.terms[4]});
  r.measure("sup", ft.sup);
  r.measure("B0", ft.B0);
  for (int k = 0; k < 5; ++k)
    r.measure("term" + std::to_string(k + 1), ft.terms[k]);
  r.check("fellow-traveling", ft.sup <= 5 * ft.B0,
          std::to_string(ft.sup) + " > 5*" + std::to_string(ft.B0));
  return ft;
}

void perturb_pair(const GeneratedInstance& g, std::uint64_t seed, Point& a2,
                  Point& b2) {
  std::uint64_t s = seed;
  // candidate single-edge moves toward the interior of a path domain
  std::vector<std::pair<int, int>> cands;  // (domain, which endpoint)
  for (int u = 0; u < g.inst.n; ++u) {
    if (g.inst.tree[u].dist(g.a[u], g.b[u]) < 2) continue;
    cands.push_back({u, 0});
    cands.push_back({u, 1});
  }
  for (size_t i = cands.size(); i > 1; --i)
    std::swap(cands[i - 1], cands[mix(s) % i]);
  for (auto [u, which] : cands) {
    Point na = g.a, nb = g.b;
    Point& p = which ? nb : na;
    // step along the geodesic toward the other endpoint
    GeodesicChooser ch{&g.inst.tree[u]};
    auto geo = ch.between(which ? g.b[u] : g.a[u], which ? g.a[u] : g.b[u]);
    p[u] = geo[1];
    if (!g.inst.consistent(na, g.inst.c.theta) ||
        !g.inst.consistent(nb, g.inst.c.theta))
      continue;
    try {
      build_interval_system(g.inst, na, nb, g.inst.c.K);
    } catch (const SpecError&) {
      continue;
    }
    a2 = na;
    b2 = nb;
    return;
  }
  a2 = g.a;  // fall back to the identity perturbation
  b2 = g.b;
}

}  // namespace scube
