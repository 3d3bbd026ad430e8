#include "scube/toy_hhs.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <queue>
#include <string>

namespace scube {

namespace {

std::uint64_t mix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string pair_wit(int u, int v) {
  return "(" + std::to_string(u) + "," + std::to_string(v) + ")";
}

int set_dist(const HypGraph& g, int x, const std::vector<int>& s) {
  int best = -1;
  for (int p : s) {
    int d = g.dist(x, p);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

int set_set_dist(const HypGraph& g, const std::vector<int>& a, const std::vector<int>& b) {
  int best = -1;
  for (int p : a) {
    int d = set_dist(g, p, b);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

int set_diam(const HypGraph& g, const std::vector<int>& s) {
  int best = 0;
  for (int p : s)
    for (int q : s) best = std::max(best, g.dist(p, q));
  return best;
}

}  // namespace

void HHSInstance::init(int domains) {
  n = domains;
  tree.assign(n, HypGraph(0));
  rel.assign(n, std::vector<char>(n, kRelNone));
  rho_set.assign(n, std::vector<std::vector<int>>(n));
  rho_map.assign(n, std::vector<std::vector<int>>(n));
}

int HHSInstance::d_set(int u, int x, int v) const { return set_dist(tree[u], x, rho_set[u][v]); }

bool HHSInstance::consistent(const Point& x, int theta) const {
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      char r = rel[u][v];
      if (r == kRelTrans) {
        if (d_set(u, x[u], v) > theta && d_set(v, x[v], u) > theta) return false;
      } else if (r == kRelContains) {  // v nested in u
        if (d_set(u, x[u], v) > theta &&
            tree[v].dist(x[v], rho_map[u][v][x[u]]) > theta)
          return false;
      } else if (r == kRelNested) {  // u nested in v
        if (d_set(v, x[v], u) > theta &&
            tree[u].dist(x[u], rho_map[v][u][x[v]]) > theta)
          return false;
      }
    }
  return true;
}

Report validate_instance(const HHSInstance& inst) {
  Report r;
  int n = inst.n;
  r.check("shape", n >= 1 && (int)inst.tree.size() == n && (int)inst.rel.size() == n,
          "domain count");
  if (!r.ok()) return r;
  for (int u = 0; u < n; ++u) {
    r.check("tree-nonempty", inst.tree[u].n >= 1, std::to_string(u));
    if (inst.tree[u].n >= 1)
      r.check("tree-is-tree", inst.tree[u].is_tree(), std::to_string(u));
  }
  if (!r.ok()) return r;

  // relation trichotomy
  for (int u = 0; u < n; ++u) {
    r.check("relation-irreflexive", inst.rel[u][u] == kRelNone, std::to_string(u));
    for (int v = u + 1; v < n; ++v) {
      char a = inst.rel[u][v], b = inst.rel[v][u];
      bool okpair = (a == kRelNested && b == kRelContains) ||
                    (a == kRelContains && b == kRelNested) ||
                    (a == kRelOrth && b == kRelOrth) || (a == kRelTrans && b == kRelTrans);
      r.check("relation-trichotomy", okpair, pair_wit(u, v));
    }
  }
  if (!r.ok()) return r;

  auto nested = [&](int u, int v) { return inst.rel[u][v] == kRelNested; };
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w)
        if (nested(u, v) && nested(v, w) && !nested(u, w))
          r.check("nesting-transitive", false, pair_wit(u, v) + "," + std::to_string(w));

  int n_max = 0, top = -1;
  for (int u = 0; u < n; ++u) {
    bool maximal = true;
    for (int v = 0; v < n; ++v)
      if (nested(u, v)) maximal = false;
    if (maximal) {
      ++n_max;
      top = u;
    }
  }
  r.check("unique-maximal", n_max == 1, std::to_string(n_max) + " maximal domains");
  if (n_max == 1)
    for (int u = 0; u < n; ++u)
      if (u != top)
        r.check("nested-in-top", nested(u, top), std::to_string(u));

  // complexity: largest pairwise non-transverse collection
  {
    int best = 0;
    std::vector<int> cur;
    auto grow = [&](auto&& self, int next) -> void {
      best = std::max(best, (int)cur.size());
      for (int u = next; u < n; ++u) {
        bool ok = true;
        for (int v : cur)
          if (inst.rel[v][u] == kRelTrans) ok = false;
        if (!ok) continue;
        cur.push_back(u);
        self(self, u + 1);
        cur.pop_back();
      }
    };
    grow(grow, 0);
    r.measure("complexity", best);
  }

  // orthogonal containers
  for (int u = 0; u < n; ++u) {
    bool has_orth = false;
    for (int v = 0; v < n; ++v)
      if (inst.rel[u][v] == kRelOrth) has_orth = true;
    if (!has_orth) continue;
    bool found = false;
    for (int w = 0; w < n && !found; ++w) {
      bool all = true;
      for (int v = 0; v < n; ++v)
        if (inst.rel[u][v] == kRelOrth && v != w && !nested(v, w)) all = false;
      if (all) found = true;
    }
    r.check("orthogonal-container", found, std::to_string(u));
  }

  // rho data shape
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      bool want_set = inst.rel[u][v] == kRelContains || inst.rel[u][v] == kRelTrans;
      bool want_map = inst.rel[u][v] == kRelContains;
      r.check("rho-set-present", inst.rho_set[u][v].empty() != want_set, pair_wit(u, v));
      if (want_set && !inst.rho_set[u][v].empty()) {
        for (int p : inst.rho_set[u][v])
          r.check("rho-set-range", 0 <= p && p < inst.tree[u].n, pair_wit(u, v));
        r.check("rho-set-diam", set_diam(inst.tree[u], inst.rho_set[u][v]) <= inst.c.E_S,
                pair_wit(u, v));
      }
      r.check("rho-map-present", inst.rho_map[u][v].empty() != want_map, pair_wit(u, v));
      if (want_map && !inst.rho_map[u][v].empty()) {
        r.check("rho-map-size", (int)inst.rho_map[u][v].size() == inst.tree[u].n,
                pair_wit(u, v));
        for (int p : inst.rho_map[u][v])
          r.check("rho-map-range", 0 <= p && p < inst.tree[v].n, pair_wit(u, v));
      }
    }
  if (!r.ok()) return r;

  // BGIA, exhaustive over tree geodesics
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (inst.rel[u][v] != kRelContains) continue;
      GeodesicChooser ch{&inst.tree[u]};
      bool pass = true;
      std::string wit;
      for (int x = 0; x < inst.tree[u].n && pass; ++x)
        for (int y = x; y < inst.tree[u].n && pass; ++y) {
          auto path = ch.between(x, y);
          int mind = -1;
          for (int p : path) {
            int d = inst.d_set(u, p, v);
            if (mind < 0 || d < mind) mind = d;
          }
          if (mind <= inst.c.E_S) continue;
          std::vector<int> img;
          for (int p : path) img.push_back(inst.rho_map[u][v][p]);
          if (set_diam(inst.tree[v], img) > inst.c.E_S) {
            pass = false;
            wit = pair_wit(u, v) + " geodesic " + pair_wit(x, y);
          }
        }
      r.check("bgia", pass, wit);
    }

  // rho control (1): co-nested non-transverse pairs share their rho set
  for (int w = 0; w < n; ++w)
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) {
        if (inst.rel[w][u] != kRelContains || inst.rel[w][v] != kRelContains) continue;
        if (inst.rel[u][v] == kRelTrans) continue;
        r.check("rho-control-1",
                set_set_dist(inst.tree[w], inst.rho_set[w][u], inst.rho_set[w][v]) <
                    inst.c.E_S,
                std::to_string(w) + ":" + pair_wit(u, v));
      }
  // rho control (2): transverse direction is constant on nested subtrees
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (inst.rel[u][v] != kRelTrans) continue;
      for (int w = 0; w < n; ++w) {
        if (inst.rel[v][w] != kRelContains) continue;
        if (inst.rel[u][w] == kRelOrth || u == w) continue;
        if (inst.rho_set[u][w].empty()) continue;
        r.check("rho-control-2",
                set_set_dist(inst.tree[u], inst.rho_set[u][v], inst.rho_set[u][w]) <
                    inst.c.E_S,
                pair_wit(u, v) + ":" + std::to_string(w));
      }
    }

  // coloring into pairwise-transverse families over the proper domains
  if (n_max == 1) {
    std::vector<int> proper;
    for (int u = 0; u < n; ++u)
      if (u != top) proper.push_back(u);
    auto conflict = [&](int a, int b) { return inst.rel[a][b] != kRelTrans; };
    auto greedy = [&](const std::vector<int>& doms) {
      std::vector<std::vector<int>> fam;
      for (int u : doms) {
        bool placed = false;
        for (auto& f : fam) {
          bool ok = true;
          for (int v : f)
            if (conflict(u, v)) ok = false;
          if (ok) {
            f.push_back(u);
            placed = true;
            break;
          }
        }
        if (!placed) fam.push_back({u});
      }
      return fam;
    };
    auto fam = greedy(proper);
    for (auto& f : fam)
      for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = i + 1; j < f.size(); ++j)
          r.check("colorable", inst.rel[f[i]][f[j]] == kRelTrans,
                  pair_wit(f[i], f[j]));
    int exact = (int)fam.size();
    if ((int)proper.size() <= 10) {
      auto fits = [&](int k) {
        std::vector<int> col(proper.size(), -1);
        auto go = [&](auto&& self, size_t i) -> bool {
          if (i == proper.size()) return true;
          for (int c = 0; c < k; ++c) {
            bool ok = true;
            for (size_t j = 0; j < i; ++j)
              if (col[j] == c && conflict(proper[i], proper[j])) ok = false;
            if (!ok) continue;
            col[i] = c;
            if (self(self, i + 1)) return true;
            col[i] = -1;
          }
          return false;
        };
        return go(go, 0);
      };
      for (int k = 1; k <= (int)fam.size(); ++k)
        if (fits(k)) {
          exact = k;
          break;
        }
    }
    r.measure("n_colors_greedy", (int)fam.size());
    r.measure("n_colors", exact);
    r.measure("n_colors_all", exact + 1);  // the top is its own family
  }
  return r;
}

// ---------------------------------------------------------------------------
// hulls

int Hull::index_of(const Point& p) const {
  auto it = std::lower_bound(pts.begin(), pts.end(), p);
  if (it == pts.end() || *it != p) return -1;
  return (int)(it - pts.begin());
}

const std::vector<int>& Hull::dists_from(int i) const {
  if (dist_cache.empty()) dist_cache.assign(pts.size(), {});
  auto& d = dist_cache[i];
  if (!d.empty()) return d;
  d.assign(pts.size(), -1);
  d[i] = 0;
  std::queue<int> bfs;
  bfs.push(i);
  Point t;
  while (!bfs.empty()) {
    int cur = bfs.front();
    bfs.pop();
    t = pts[cur];
    for (int u = 0; u < inst->n; ++u) {
      int keep = t[u];
      for (int w : inst->tree[u].adj[keep]) {
        t[u] = w;
        int j = index_of(t);
        if (j >= 0 && d[j] < 0) {
          d[j] = d[cur] + 1;
          bfs.push(j);
        }
      }
      t[u] = keep;
    }
  }
  return d;
}

int Hull::coord_dist(int i, int j) const {
  int s = 0;
  for (int u = 0; u < inst->n; ++u) s += inst->tree[u].dist(pts[i][u], pts[j][u]);
  return s;
}

Hull build_hull(const HHSInstance& inst, const Point& a, const Point& b, int theta) {
  if ((int)a.size() != inst.n || (int)b.size() != inst.n ||
      !inst.consistent(a, theta) || !inst.consistent(b, theta))
    throw SpecError("InconsistentPoint", "hull endpoints");
  Hull h;
  h.inst = &inst;
  h.theta = theta;
  h.a = a;
  h.b = b;
  h.coord_hull.resize(inst.n);
  for (int u = 0; u < inst.n; ++u) {
    GeodesicChooser ch{&inst.tree[u]};
    auto base = ch.between(a[u], b[u]);
    for (int v = 0; v < inst.tree[u].n; ++v)
      if (set_dist(inst.tree[u], v, base) <= theta) h.coord_hull[u].push_back(v);
  }
  Point cur(inst.n, 0);
  auto fill = [&](auto&& self, int u) -> void {
    if (u == inst.n) {
      if (h.pts.size() >= 3000000)
        throw SpecError("HullTooLarge", "over 3000000 consistent tuples");
      h.pts.push_back(cur);
      return;
    }
    for (int v : h.coord_hull[u]) {
      cur[u] = v;
      bool ok = true;
      for (int w = 0; w < u && ok; ++w) {
        // pairwise consistency against the assigned coordinates
        char rl = inst.rel[w][u];
        if (rl == kRelTrans) {
          if (inst.d_set(w, cur[w], u) > theta && inst.d_set(u, cur[u], w) > theta)
            ok = false;
        } else if (rl == kRelContains) {
          if (inst.d_set(w, cur[w], u) > theta &&
              inst.tree[u].dist(cur[u], inst.rho_map[w][u][cur[w]]) > theta)
            ok = false;
        } else if (rl == kRelNested) {
          if (inst.d_set(u, cur[u], w) > theta &&
              inst.tree[w].dist(cur[w], inst.rho_map[u][w][cur[u]]) > theta)
            ok = false;
        }
      }
      if (ok) self(self, u + 1);
    }
  };
  fill(fill, 0);
  if (h.index_of(a) < 0 || h.index_of(b) < 0)
    throw SpecError("InconsistentPoint", "endpoint outside own hull");
  return h;
}

Point gate(const Hull& h, const Point& x) {
  const HHSInstance& inst = *h.inst;
  Point y(inst.n, 0);
  for (int u = 0; u < inst.n; ++u) {
    int best = -1, bd = 0;
    for (int v : h.coord_hull[u]) {
      int d = inst.tree[u].dist(x[u], v);
      if (best < 0 || d < bd) {
        best = v;
        bd = d;
      }
    }
    y[u] = best;
  }
  int bi = -1, bd = 0;
  for (size_t i = 0; i < h.pts.size(); ++i) {
    int d = 0;
    for (int u = 0; u < inst.n; ++u) d += inst.tree[u].dist(h.pts[i][u], y[u]);
    if (bi < 0 || d < bd) {
      bi = (int)i;
      bd = d;
    }
  }
  return h.pts[bi];
}

// ---------------------------------------------------------------------------
// relevant domains

RelevantDomains relevant_domains(const HHSInstance& inst, const Point& a, const Point& b,
                                 int K) {
  if (K <= 0) throw SpecError("BadThreshold", "K must be positive");
  RelevantDomains out;
  auto du = [&](int u) { return inst.tree[u].dist(a[u], b[u]); };
  auto rel_at = [&](int thr) {
    std::vector<int> s;
    for (int u = 0; u < inst.n; ++u)
      if (du(u) >= thr) s.push_back(u);
    return s;
  };
  out.doms = rel_at(K);
  Report& r = out.report;
  auto nested = [&](int u, int v) { return inst.rel[u][v] == kRelNested; };

  // covering: containers of a relevant domain inside the relevant set
  int cover = 0;
  for (int u : out.doms) {
    int c = 0;
    for (int v : out.doms)
      if (nested(u, v)) ++c;
    cover = std::max(cover, c);
  }
  r.measure("covering_N", cover);

  // bounding containers between thresholds K and K + 47 E
  {
    int K2 = K + 47 * inst.c.E_S;
    auto u2 = rel_at(K2);
    int uncovered = 0, vcnt = 0, per = 0;
    for (int v : out.doms) {
      if (du(v) >= K2) continue;
      ++vcnt;
      bool has = false;
      for (int w : u2)
        if (nested(v, w)) has = true;
      if (!has) ++uncovered;
    }
    for (int w : u2) {
      int c = 0;
      for (int v : out.doms)
        if (du(v) < K2 && nested(v, w)) ++c;
      per = std::max(per, c);
    }
    r.measure("bc_v_count", vcnt);
    r.measure("bc_uncovered", uncovered);
    r.measure("bc_max_per_container", per);
  }

  // passing-up table at D = K: largest relevant fan with no large container
  {
    r.measure("rel_Es_count", (int)rel_at(inst.c.E_S + 1).size());
    int pu = 0;
    for (int v = 0; v < inst.n; ++v) {
      int cnt = 0;
      bool big = false;
      for (int u = 0; u < inst.n; ++u) {
        if (!nested(u, v)) continue;
        if (du(u) > inst.c.E_S) ++cnt;
        if (du(u) > K) big = true;
      }
      if (du(v) > K) big = true;
      if (!big) pu = std::max(pu, cnt);
    }
    r.measure("pu_K", pu + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// interval systems

int IntervalSystem::idx(int dom) const {
  for (size_t i = 0; i < doms.size(); ++i)
    if (doms[i] == dom) return (int)i;
  return -1;
}

namespace {

// closest point of a vertex onto an item path, as an abstract coordinate
int project_to_item(const HypGraph& g, const StableInterval& t, int item, int vertex) {
  const auto& path = t.items[item].path;
  int off = t.offsets()[item];
  int best = 0, bd = g.dist(vertex, path[0]);
  for (int i = 1; i < (int)path.size(); ++i) {
    int d = g.dist(vertex, path[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return off + best;
}

int cluster_of_vertex(const StableInterval& t, int vertex) {
  for (size_t k = 0; k < t.clusters_in_order.size(); ++k)
    for (int p : t.clusters_in_order[k])
      if (p == vertex) return (int)k;
  return -1;
}

}  // namespace

IntervalSystem build_interval_system(const HHSInstance& inst, const Point& a,
                                     const Point& b, int K) {
  IntervalSystem sys;
  sys.inst = &inst;
  sys.a = a;
  sys.b = b;
  sys.K = K;
  sys.doms = relevant_domains(inst, a, b, K).doms;
  int m = (int)sys.doms.size();
  sys.dset.assign(m, std::vector<std::pair<int, int>>(m, {-1, -1}));
  sys.ditem.assign(m, std::vector<int>(m, -1));
  sys.dmap.assign(m, std::vector<std::vector<int>>(m));
  Report& r = sys.report;

  for (int i = 0; i < m; ++i) {
    int U = sys.doms[i];
    std::vector<int> Y;
    for (int j = 0; j < m; ++j)
      if (inst.rel[U][sys.doms[j]] == kRelContains)
        for (int p : inst.rho_set[U][sys.doms[j]]) Y.push_back(p);
    EpsilonSetup s;
    try {
      s = build_setup(inst.tree[U], a[U], b[U], Y, inst.c.eps);
    } catch (const SpecError& e) {
      throw SpecError("SetupInadmissible", "domain " + std::to_string(U) + ": " + e.what());
    }
    sys.T.push_back(build_stable_interval(s, inst.c.E, s.eps_prime));
  }

  int Rs = 0;
  for (int i = 0; i < m; ++i) {
    int U = sys.doms[i];
    const StableInterval& T = sys.T[i];
    const HypGraph& g = inst.tree[U];
    int L = T.total_length();
    r.check("marked-points", T.phi(0) == a[U] && T.phi(L) == b[U], std::to_string(U));
    // Hausdorff distance of the interval image against the coordinate hull
    {
      GeodesicChooser ch{&g};
      auto base = ch.between(a[U], b[U]);
      std::vector<int> img;
      for (int t = 0; t <= L; ++t) img.push_back(T.phi(t));
      int haus = 0;
      for (int t : img) haus = std::max(haus, set_dist(g, t, base));
      for (int p : base) haus = std::max(haus, set_dist(g, p, img));
      r.measure("haus_" + std::to_string(U), haus);
      Rs = std::max(Rs, haus);
    }
    for (int j = 0; j < m; ++j) {
      int V = sys.doms[j];
      char rl = inst.rel[U][V];
      if (rl == kRelContains) {
        const auto& rho = inst.rho_set[U][V];
        int k = cluster_of_vertex(T, rho[0]);
        if (k < 0) throw SpecError("SetupInadmissible", "rho outside clusters " + pair_wit(U, V));
        int item = 2 * k;
        int lo = L + 1, hi = -1;
        for (int p : rho) {
          int t = project_to_item(g, T, item, p);
          lo = std::min(lo, t);
          hi = std::max(hi, t);
        }
        sys.dset[i][j] = {lo, hi};
        sys.ditem[i][j] = item;
        Rs = std::max(Rs, hi - lo);
        // interval projection map T_i -> T_j
        auto& mp = sys.dmap[i][j];
        mp.resize(L + 1);
        const StableInterval& TV = sys.T[j];
        int LV = TV.total_length();
        for (int t = 0; t <= L; ++t) {
          int y = inst.rho_map[U][V][T.phi(t)];
          int bt = 0, bd = inst.tree[V].dist(y, TV.phi(0));
          for (int tv = 1; tv <= LV; ++tv) {
            int d = inst.tree[V].dist(y, TV.phi(tv));
            if (d < bd) {
              bd = d;
              bt = tv;
            }
          }
          mp[t] = bt;
        }
        // interval BGI: constant on each side of the delta set
        bool okbgi = true;
        for (int t = 1; t < lo; ++t)
          if (mp[t] != mp[0]) okbgi = false;
        for (int t = hi + 1; t < L; ++t)
          if (mp[t] != mp[L]) okbgi = false;
        r.check("interval-bgi", okbgi, pair_wit(U, V));
      } else if (rl == kRelTrans) {
        const auto& rho = inst.rho_set[U][V];
        int f;
        if (set_dist(g, a[U], rho) < inst.c.eps)
          f = a[U];
        else if (set_dist(g, b[U], rho) < inst.c.eps)
          f = b[U];
        else
          throw SpecError("SetupInadmissible",
                          "transverse rho away from both endpoints " + pair_wit(U, V));
        int k = cluster_of_vertex(T, f);
        int item = 2 * k;
        int lo = L + 1, hi = -1;
        for (int p : rho) {
          int t = project_to_item(g, T, item, p);
          lo = std::min(lo, t);
          hi = std::max(hi, t);
        }
        sys.dset[i][j] = {lo, hi};
        sys.ditem[i][j] = item;
        // interval control (1): near a marked point
        int dmark = std::min(lo, L - hi);
        r.measure("ic1_" + pair_wit(U, V), dmark);
        Rs = std::max(Rs, dmark);
      }
    }
  }

  // interval control (3)/(4) spans
  int ic3 = 0, ic4 = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        if (j == k) continue;
        int U = sys.doms[j], V = sys.doms[k], W = sys.doms[i];
        if (inst.rel[W][U] == kRelContains && inst.rel[W][V] == kRelContains &&
            inst.rel[U][V] != kRelTrans)
          ic3 = std::max(ic3, std::max(sys.dset[i][j].second, sys.dset[i][k].second) -
                                  std::min(sys.dset[i][j].first, sys.dset[i][k].first));
        if (inst.rel[W][V] == kRelTrans && inst.rel[V][U] == kRelContains &&
            inst.rel[W][U] != kRelOrth && W != U && sys.dset[i][sys.idx(U)].first >= 0)
          ic4 = std::max(ic4,
                         std::max(sys.dset[i][k].second, sys.dset[i][sys.idx(U)].second) -
                             std::min(sys.dset[i][k].first, sys.dset[i][sys.idx(U)].first));
      }
  r.measure("ic3_max", ic3);
  r.measure("ic4_max", ic4);
  Rs = std::max(Rs, std::max(ic3, ic4));
  r.measure("R_s", Rs);
  return sys;
}

// ---------------------------------------------------------------------------
// collapsing

int CollapsedSystem::rep_lo(int i, int hat) const {
  for (int t = 0; t < (int)qmap[i].size(); ++t)
    if (qmap[i][t] == hat) return t;
  return -1;
}

int CollapsedSystem::rep_hi(int i, int hat) const {
  for (int t = (int)qmap[i].size() - 1; t >= 0; --t)
    if (qmap[i][t] == hat) return t;
  return -1;
}

CollapsedSystem collapse_system(const IntervalSystem& sys, int r1, int r2) {
  const HHSInstance& inst = *sys.inst;
  CollapsedSystem cs;
  cs.sys = sys;
  cs.r1 = r1;
  cs.r2 = r2;
  int m = (int)sys.doms.size();
  Report& r = cs.report;

  for (int i = 0; i < m; ++i) {
    const StableInterval& T = sys.T[i];
    int L = T.total_length();
    Thickening th = thicken(T, r1, r2);
    if (T.items.size() == 1) {
      // the whole interval is one cluster (endpoints E-chained): it collapses
      // to a point and there is no separated-cluster structure to replicate
      th.cluster_blocks = {{0, L}};
      th.edge_blocks.clear();
      th.degenerate = true;
      r.check("same-thickenings", true, "single cluster");
    } else if (th.degenerate) {
      throw SpecError("ThickeningCollision",
                      "domain " + std::to_string(sys.doms[i]) + " fully collapsed");
    } else
    // Lemma [same thickenings]: the delta data (marked points plus delta
    // sets) and the cluster items carry the same blocks; concretely, every
    // cluster item holds at least one delta datum and every delta datum lies
    // inside a cluster item, so the two (r1,r2)-thickenings coincide
    {
      std::vector<std::pair<int, int>> D = {{0, 0}, {L, L}};
      for (int j = 0; j < m; ++j)
        if (inst.rel[sys.doms[i]][sys.doms[j]] == kRelContains) D.push_back(sys.dset[i][j]);
      auto offs = T.offsets();
      bool ok = true;
      for (size_t k = 0; k < T.items.size(); ++k) {
        if (!T.items[k].is_cluster) continue;
        int s = offs[k], e = offs[k] + T.items[k].len;
        bool hit = false;
        for (auto& d : D)
          if (d.first >= s && d.second <= e) hit = true;
        if (!hit) ok = false;
      }
      for (auto& d : D) {
        bool inside = false;
        for (size_t k = 0; k < T.items.size(); ++k) {
          if (!T.items[k].is_cluster) continue;
          int s = offs[k], e = offs[k] + T.items[k].len;
          if (d.first >= s && d.second <= e) inside = true;
        }
        if (!inside) ok = false;
      }
      if (!ok)
        throw SpecError("ThickeningCollision",
                        "delta/cluster thickenings differ on domain " +
                            std::to_string(sys.doms[i]));
      r.check("same-thickenings", true, "");
    }

    cs.thick.push_back(th);
    std::vector<int> q(L + 1, 0);
    auto inside = [&](int e) {  // edge (e, e+1) inside a cluster block
      for (auto& b : th.cluster_blocks)
        if (b.first <= e && e + 1 <= b.second) return true;
      return false;
    };
    for (int t = 1; t <= L; ++t) q[t] = q[t - 1] + (inside(t - 1) ? 0 : 1);
    cs.qmap.push_back(q);
    int hl = q[L];
    cs.hat_len.push_back(hl);
    std::vector<char> col(hl + 1, 0);
    for (auto& b : th.cluster_blocks) col[q[b.first]] = 1;
    cs.is_collapsed.push_back(col);
    // q is 1-nonexpanding by construction
    bool nonexp = true;
    for (int t = 1; t <= L; ++t)
      if (q[t] - q[t - 1] > 1) nonexp = false;
    r.check("q-nonexpanding", nonexp, std::to_string(sys.doms[i]));
  }

  // induced HFI
  HFI h;
  h.init(m);
  h.len = cs.hat_len;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) h.rel[i][j] = inst.rel[sys.doms[i]][sys.doms[j]];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      char rl = h.rel[i][j];
      if (rl != kRelContains && rl != kRelTrans) continue;
      auto ds = sys.dset[i][j];
      int c = cs.qmap[i][ds.first];
      if (cs.qmap[i][ds.second] != c)
        throw SpecError("ThickeningCollision",
                        "delta set not collapsed to a point " + pair_wit(i, j));
      h.cluster[i][j] = c;
      if (rl == kRelTrans)
        r.check("cic2-transverse-endpoint", c == 0 || c == cs.hat_len[i], pair_wit(i, j));
      else
        r.check("cic3-nested-collapsed", cs.is_collapsed[i][c] != 0, pair_wit(i, j));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (h.rel[i][j] != kRelContains) continue;
      int c = h.cluster[i][j];
      int mv = cs.qmap[j][sys.dmap[i][j][sys.dset[i][j].first]];
      // a cluster point at a marked endpoint pins the projection there
      if (c == 0) mv = 0;
      if (c == cs.hat_len[i]) mv = cs.hat_len[j];
      h.midval[i][j] = mv;
      // collapsed BGI: the step shape is exact on the edge coordinates
      bool step = true;
      for (int t = 0; t <= (int)cs.qmap[i].size() - 1; ++t) {
        int hc = cs.qmap[i][t];
        if (cs.is_collapsed[i][hc]) continue;
        int got = cs.qmap[j][sys.dmap[i][j][t]];
        int want = hc < c ? 0 : cs.hat_len[j];
        if (got != want) step = false;
      }
      if (!step)
        throw SpecError("ThickeningCollision", "projection not a step map " + pair_wit(i, j));
      r.check("cic7-bgi-step", step, pair_wit(i, j));
    }

  // minimal domain width, item (6)
  {
    int slack = 0;
    for (int i = 0; i < m; ++i) {
      bool minimal = true;
      for (int j = 0; j < m; ++j)
        if (h.rel[i][j] == kRelContains) minimal = false;
      if (!minimal) continue;
      slack = std::max(slack, std::max(0, sys.K - 2 * r1 - cs.hat_len[i]));
      r.check("min-domain-width",
              cs.hat_len[i] >= 1 || sys.T[i].items.size() == 1,
              std::to_string(sys.doms[i]));
    }
    r.measure("min_width_slack", slack);
  }

  cs.h = h;
  if (m > 0) {  // the empty family (a = b) collapses to a single vertex
    Report hv = validate_hfi(h);
    if (!hv.ok()) throw SpecError("InvalidHFI", hv.first_failure());
    cs.q = build_q_complex(h);
  } else {
    cs.q.h = h;
    cs.q.verts = {{}};
    cs.q.idx_a = cs.q.idx_b = 0;
  }
  r.check("hfi-valid", true, "");

  // items (8)/(9) over the 0-consistent set
  for (const auto& v : cs.q.verts) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        bool int_i = v[i] != 0 && v[i] != cs.hat_len[i];
        bool int_j = v[j] != 0 && v[j] != cs.hat_len[j];
        if (int_i && int_j && h.rel[i][j] == kRelTrans)
          r.check("cic8-nontransverse", false, pair_wit(i, j));
        bool e_i = !cs.is_collapsed[i][v[i]];
        bool e_j = !cs.is_collapsed[j][v[j]];
        if (e_i && e_j && h.rel[i][j] != kRelOrth)
          r.check("cic9-orthogonal", false, pair_wit(i, j));
      }
  }
  r.check("cic8-nontransverse", true, "");
  r.check("cic9-orthogonal", true, "");

  cs.hull = build_hull(inst, sys.a, sys.b, inst.c.theta);
  return cs;
}

// ---------------------------------------------------------------------------
// Psi-hat and Omega

std::vector<int> project_psi_hat(const CollapsedSystem& cs, const Point& x) {
  if (cs.hull.index_of(x) < 0) throw SpecError("NotInHull", "point outside the hull");
  const HHSInstance& inst = *cs.sys.inst;
  int m = (int)cs.sys.doms.size();
  std::vector<int> out(m, 0);
  for (int i = 0; i < m; ++i) {
    int U = cs.sys.doms[i];
    const StableInterval& T = cs.sys.T[i];
    int L = T.total_length();
    int bt = 0, bd = inst.tree[U].dist(x[U], T.phi(0));
    for (int t = 1; t <= L; ++t) {
      int d = inst.tree[U].dist(x[U], T.phi(t));
      if (d < bd) {
        bd = d;
        bt = t;
      }
    }
    out[i] = cs.qmap[i][bt];
  }
  if (cs.q.index_of(out) < 0)
    throw SpecError("ConsistencyBreach", "psi image not 0-consistent");
  return out;
}

namespace {

std::vector<int> hone_impl(const CollapsedSystem& cs, const std::vector<int>& qt,
                           int* max_diam) {
  if (cs.q.index_of(qt) < 0) throw SpecError("NotInQ", "hone_omega");
  int m = (int)cs.sys.doms.size();
  std::vector<int> out(m, 0);
  for (int i = 0; i < m; ++i) {
    int hc = qt[i];
    int lo = cs.rep_lo(i, hc), hi = cs.rep_hi(i, hc);
    if (!cs.is_collapsed[i][hc]) {
      out[i] = lo;  // unique preimage on edge points
      continue;
    }
    int blo = lo, bhi = hi;
    for (int j = 0; j < m; ++j) {
      if (cs.h.rel[i][j] != kRelContains) continue;
      bool minimal = true;
      for (int k = 0; k < m; ++k)
        if (cs.h.rel[j][k] == kRelContains) minimal = false;
      if (!minimal) continue;
      if (cs.h.cluster[i][j] != hc) continue;
      auto ds = cs.sys.dset[i][j];
      int c1, c2;
      if (qt[j] == 0) {  // l = a: the half-interval toward a
        c1 = lo;
        c2 = std::min(hi, ds.second + cs.r2);
      } else if (qt[j] == cs.hat_len[j]) {  // l = b
        c1 = std::max(lo, ds.first - cs.r2);
        c2 = hi;
      } else {  // l = empty: stay near the delta set
        c1 = std::max(lo, ds.first - cs.r2);
        c2 = std::min(hi, ds.second + cs.r2);
      }
      blo = std::max(blo, c1);
      bhi = std::min(bhi, c2);
    }
    if (blo > bhi)
      throw SpecError("HoningFailure", "empty half-interval intersection in domain " +
                                           std::to_string(cs.sys.doms[i]));
    if (max_diam) *max_diam = std::max(*max_diam, bhi - blo);
    out[i] = blo;
  }
  return out;
}

}  // namespace

std::vector<int> hone_omega(const CollapsedSystem& cs, const std::vector<int>& qt) {
  return hone_impl(cs, qt, nullptr);
}

Point lift_omega_hat(const CollapsedSystem& cs, const std::vector<int>& qt) {
  auto t = hone_impl(cs, qt, nullptr);
  Point y = cs.sys.a;  // irrelevant domains stay at pi(a)
  for (size_t i = 0; i < cs.sys.doms.size(); ++i) y[cs.sys.doms[i]] = cs.sys.T[i].phi(t[i]);
  return gate(cs.hull, y);
}

Report audit_maps(const CollapsedSystem& cs) {
  Report r;
  r.measure("hull_size", (int)cs.hull.pts.size());
  r.measure("q_size", (int)cs.q.verts.size());
  bool all_in_q = true;
  std::string wit;
  for (size_t i = 0; i < cs.hull.pts.size(); ++i) {
    try {
      project_psi_hat(cs, cs.hull.pts[i]);
    } catch (const SpecError&) {
      all_in_q = false;
      wit = "hull point " + std::to_string(i);
      break;
    }
  }
  r.check("psi-in-q", all_in_q, wit);
  int m0 = 0, b1 = 0;
  for (size_t vi = 0; vi < cs.q.verts.size(); ++vi) {
    auto lift = hone_impl(cs, cs.q.verts[vi], &b1);
    for (size_t i = 0; i < cs.sys.doms.size(); ++i)
      r.check("hone-section", cs.qmap[i][lift[i]] == cs.q.verts[vi][i],
              std::to_string(vi));
    Point om = lift_omega_hat(cs, cs.q.verts[vi]);
    auto back = project_psi_hat(cs, om);
    m0 = std::max(m0, cs.q.dist(cs.q.index_of(back), (int)vi));
  }
  r.measure("M0", m0);
  r.measure("B1", b1);
  return r;
}

// ---------------------------------------------------------------------------
// metric audits

Report audit_metrics(const CollapsedSystem& cs) {
  Report r;
  const HHSInstance& inst = *cs.sys.inst;
  const Hull& h = cs.hull;
  int N = (int)h.pts.size();
  std::vector<int> sample;
  if (N <= 80) {
    sample.resize(N);
    std::iota(sample.begin(), sample.end(), 0);
  } else {
    std::uint64_t s = 12345;
    std::vector<char> used(N, 0);
    sample = {h.index_of(h.a), h.index_of(h.b)};
    used[sample[0]] = used[sample[1]] = 1;
    while ((int)sample.size() < 80) {
      int i = (int)(mix(s) % N);
      if (!used[i]) {
        used[i] = 1;
        sample.push_back(i);
      }
    }
  }
  std::vector<std::vector<int>> psi(sample.size());
  for (size_t i = 0; i < sample.size(); ++i) psi[i] = project_psi_hat(cs, h.pts[sample[i]]);

  auto cut = [&](int d) { return d >= cs.sys.K ? d : 0; };
  long long mult_dq = 0, mult_dx_dq = 0, mult_sk = 0, mult_dx_sk = 0, mult_st = 0,
            mult_dx_st = 0;
  int add_dq = 0, add_sk = 0, add_st = 0;
  int dx_ab = -1, dq_ab = -1, sk_ab = -1, st_ab = -1;
  int ia = h.index_of(h.a), ib = h.index_of(h.b);
  for (size_t i = 0; i < sample.size(); ++i)
    for (size_t j = i + 1; j < sample.size(); ++j) {
      int dx = h.dists_from(sample[i])[sample[j]];
      int sk = 0;
      for (int u = 0; u < inst.n; ++u)
        sk += cut(inst.tree[u].dist(h.pts[sample[i]][u], h.pts[sample[j]][u]));
      int st = 0, dq = 0;
      for (size_t k = 0; k < cs.sys.doms.size(); ++k) {
        st += std::abs(psi[i][k] - psi[j][k]);
      }
      dq = st;  // collapsed distance and Q distance agree coordinatewise
      r.check("zero-diagonal", dx > 0, pair_wit((int)i, (int)j));
      if (dq > 0) {
        mult_dq = std::max(mult_dq, (long long)100 * dq / dx);
        mult_dx_dq = std::max(mult_dx_dq, (long long)100 * dx / dq);
      } else
        add_dq = std::max(add_dq, dx);
      if (sk > 0) {
        mult_sk = std::max(mult_sk, (long long)100 * sk / dx);
        mult_dx_sk = std::max(mult_dx_sk, (long long)100 * dx / sk);
      } else
        add_sk = std::max(add_sk, dx);
      if (st > 0) {
        mult_st = std::max(mult_st, (long long)100 * st / dx);
        mult_dx_st = std::max(mult_dx_st, (long long)100 * dx / st);
      } else
        add_st = std::max(add_st, dx);
      if ((sample[i] == ia && sample[j] == ib) || (sample[i] == ib && sample[j] == ia)) {
        dx_ab = dx;
        dq_ab = dq;
        sk_ab = sk;
        st_ab = st;
      }
    }
  if (dx_ab < 0 && ia >= 0 && ib >= 0 && ia != ib) {
    dx_ab = h.dists_from(ia)[ib];
    auto pa = project_psi_hat(cs, h.a), pb = project_psi_hat(cs, h.b);
    dq_ab = st_ab = 0;
    for (size_t k = 0; k < pa.size(); ++k) dq_ab += std::abs(pa[k] - pb[k]);
    st_ab = dq_ab;
    sk_ab = 0;
    for (int u = 0; u < inst.n; ++u) sk_ab += cut(inst.tree[u].dist(h.a[u], h.b[u]));
  }
  if (ia == ib) dx_ab = dq_ab = sk_ab = st_ab = 0;
  r.measure("dx_ab", dx_ab);
  r.measure("dq_ab", dq_ab);
  r.measure("sumk_ab", sk_ab);
  r.measure("sumt_ab", st_ab);
  r.measure("mult_dq_over_dx_x100", mult_dq);
  r.measure("mult_dx_over_dq_x100", mult_dx_dq);
  r.measure("mult_sumk_over_dx_x100", mult_sk);
  r.measure("mult_dx_over_sumk_x100", mult_dx_sk);
  r.measure("mult_sumt_over_dx_x100", mult_st);
  r.measure("mult_dx_over_sumt_x100", mult_dx_st);
  r.measure("add_dq", add_dq);
  r.measure("add_sumk", add_sk);
  r.measure("add_sumt", add_st);
  return r;
}

// ---------------------------------------------------------------------------
// examples and the generator

GeneratedInstance product_example() {
  GeneratedInstance g;
  HHSInstance& inst = g.inst;
  inst.init(3);
  inst.tree[0] = HypGraph(1);
  inst.tree[1] = path_graph(5);
  inst.tree[2] = path_graph(7);
  inst.rel[0][1] = inst.rel[0][2] = kRelContains;
  inst.rel[1][0] = inst.rel[2][0] = kRelNested;
  inst.rel[1][2] = inst.rel[2][1] = kRelOrth;
  inst.rho_set[0][1] = {0};
  inst.rho_set[0][2] = {0};
  inst.rho_map[0][1] = {0};
  inst.rho_map[0][2] = {0};
  g.a = {0, 0, 0};
  g.b = {0, 5, 7};
  return g;
}

GeneratedInstance generate_instance(std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t s = seed * 0x9e3779b97f4a7c15ull + 977u * attempt + 13;
    auto rnd = [&](int mod) { return (int)(mix(s) % (std::uint64_t)mod); };

    GeneratedInstance g;
    HHSInstance& inst = g.inst;
    int n = 3 + rnd(4);
    inst.init(n);
    const int E = inst.c.E;

    // nesting forest under domain 0, depth at most 2
    std::vector<int> parent(n, -1), depth(n, 0);
    for (int i = 1; i < n; ++i) {
      std::vector<int> cand = {0};
      for (int j = 1; j < i; ++j)
        if (depth[j] == 1) cand.push_back(j);
      parent[i] = cand[rnd((int)cand.size())];
      depth[i] = depth[parent[i]] + 1;
    }
    auto ancestor = [&](int a, int d) {  // is a a strict ancestor of d
      for (int x = parent[d]; x >= 0; x = parent[x])
        if (x == a) return true;
      return false;
    };

    // at most one orthogonal pair of children per parent
    std::vector<std::pair<int, int>> orth_pairs;
    for (int p = 0; p < n; ++p) {
      std::vector<int> kids;
      for (int i = 1; i < n; ++i)
        if (parent[i] == p) kids.push_back(i);
      if ((int)kids.size() >= 2 && rnd(2)) {
        int x = rnd((int)kids.size()), y = rnd((int)kids.size() - 1);
        if (y >= x) ++y;
        orth_pairs.emplace_back(std::min(kids[x], kids[y]), std::max(kids[x], kids[y]));
      }
    }

    // trees: paths, sometimes with one hanging leaf; a = 0, b = path end
    std::vector<int> plen(n);
    for (int u = 0; u < n; ++u) {
      int L;
      if (u == 0)
        L = rnd(4) ? 14 + rnd(4) : 0;
      else
        L = 12 + rnd(6);
      plen[u] = L;
      inst.tree[u] = L == 0 ? HypGraph(1) : path_graph(L);
      if (L > 0 && rnd(3) == 0) {
        int at = 1 + rnd(L - 1);
        HypGraph t(L + 2);
        for (int e = 0; e < L; ++e) t.add_edge(e, e + 1);
        t.add_edge(at, L + 1);
        inst.tree[u] = t;
      }
    }
    g.a.assign(n, 0);
    g.b.resize(n);
    for (int u = 0; u < n; ++u) g.b[u] = plen[u];

    // anchor slots along each parent's main path, spaced >= E apart
    std::vector<std::vector<int>> slots(n);
    for (int u = 0; u < n; ++u) {
      if (plen[u] == 0) {
        slots[u] = {0};
        continue;
      }
      for (int p = E; p <= plen[u] - E; p += E) slots[u].push_back(p);
      if (slots[u].empty()) slots[u] = {plen[u] / 2};
    }
    std::vector<int> anchor(n, -1);  // child -> anchor position in its parent
    for (int p = 0; p < n; ++p) {
      std::vector<int> kids;
      for (int i = 1; i < n; ++i)
        if (parent[i] == p) kids.push_back(i);
      for (int c : kids) anchor[c] = slots[p][rnd((int)slots[p].size())];
      for (auto& op : orth_pairs)
        if (parent[op.first] == p) anchor[op.second] = anchor[op.first];
    }

    // relations off the forest
    auto top_child = [&](int anc, int d) {  // child of anc on the path to d
      int x = d;
      while (parent[x] != anc) x = parent[x];
      return x;
    };
    auto nca = [&](int u, int v) {
      for (int x = u; x >= 0; x = parent[x])
        if (x == v || ancestor(x, v)) return x;
      return 0;
    };
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        if (ancestor(v, u))
          inst.rel[u][v] = kRelNested;
        else if (ancestor(u, v))
          inst.rel[u][v] = kRelContains;
        else {
          int w = nca(u, v);
          int cu = top_child(w, u), cv = top_child(w, v);
          bool orth = false;
          for (auto& op : orth_pairs)
            if (op == std::make_pair(std::min(cu, cv), std::max(cu, cv))) orth = true;
          inst.rel[u][v] = orth ? kRelOrth : kRelTrans;
        }
      }

    // rho sets for nesting, via the child on the path
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (inst.rel[u][v] == kRelContains) inst.rho_set[u][v] = {anchor[top_child(u, v)]};

    // rho maps: component-constant around the anchor, composed down chains
    for (int p = 0; p < n; ++p) {
      std::vector<int> kids;
      for (int i = 1; i < n; ++i)
        if (parent[i] == p) kids.push_back(i);
      for (int c : kids) {
        int anc = anchor[c];
        const HypGraph& t = inst.tree[p];
        std::vector<int> comp(t.n, -1);
        int nc = 0;
        for (int v = 0; v < t.n; ++v) {
          if (v == anc || comp[v] >= 0) continue;
          std::queue<int> bfs;
          bfs.push(v);
          comp[v] = nc;
          while (!bfs.empty()) {
            int x = bfs.front();
            bfs.pop();
            for (int y : t.adj[x])
              if (y != anc && comp[y] < 0) {
                comp[y] = nc;
                bfs.push(y);
              }
          }
          ++nc;
        }
        std::vector<int> val(nc, -1);
        if (comp[0] >= 0) val[comp[0]] = 0;
        if (comp[g.b[p]] >= 0) val[comp[g.b[p]]] = g.b[c];
        for (int k = 0; k < nc; ++k)
          if (val[k] < 0) val[k] = rnd(2) ? 0 : g.b[c];
        auto& mp = inst.rho_map[p][c];
        mp.assign(t.n, 0);
        int anchor_val = rnd(plen[c] + 1);
        for (int v = 0; v < t.n; ++v) mp[v] = v == anc ? anchor_val : val[comp[v]];
      }
    }
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (inst.rel[u][v] != kRelContains || parent[v] == u) continue;
        int c = top_child(u, v);  // u -> c -> v with depth at most 2
        auto& mp = inst.rho_map[u][v];
        mp.resize(inst.tree[u].n);
        for (int x = 0; x < inst.tree[u].n; ++x)
          mp[x] = inst.rho_map[c][v][inst.rho_map[u][c][x]];
      }

    // transverse rho sets: endpoint pattern from the anchor order at the nca
    auto before = [&](int u, int v) {
      int w = nca(u, v);
      int cu = top_child(w, u), cv = top_child(w, v);
      if (anchor[cu] != anchor[cv]) return anchor[cu] < anchor[cv];
      return cu < cv;
    };
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (inst.rel[u][v] == kRelTrans)
          inst.rho_set[u][v] = {before(u, v) ? g.b[u] : 0};

    if (!inst.consistent(g.a, inst.c.theta) || !inst.consistent(g.b, inst.c.theta))
      continue;
    if (!validate_instance(inst).ok()) continue;
    return g;
  }
  throw SpecError("GenerationFailed", "seed " + std::to_string(seed));
}

}  // namespace scube
