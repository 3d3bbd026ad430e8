#include "scube/hyperbolic_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <string>

namespace scube {

void HypGraph::add_edge(int u, int v) {
  adj[u].push_back(v);
  adj[v].push_back(u);
}

const std::vector<int>& HypGraph::dists_from(int s) const {
  if (dist_cache.empty()) dist_cache.assign(n, {});
  auto& d = dist_cache[s];
  if (!d.empty()) return d;
  d.assign(n, -1);
  std::deque<int> q{s};
  d[s] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : adj[u])
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
  }
  return d;
}

bool HypGraph::connected() const {
  if (n == 0) return false;
  auto& d = dists_from(0);
  return std::find(d.begin(), d.end(), -1) == d.end();
}

bool HypGraph::is_tree() const {
  size_t edges = 0;
  for (auto& a : adj) edges += a.size();
  return connected() && edges == 2 * (size_t)(n - 1);
}

HypGraph path_graph(int n) {
  HypGraph g(n + 1);
  for (int i = 0; i < n; ++i) g.add_edge(i, i + 1);
  return g;
}

HypGraph cycle_graph(int n) {
  HypGraph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
  return g;
}

int compute_delta(const HypGraph& g) {
  if (!g.connected()) throw SpecError("Disconnected", "compute_delta");
  if (g.is_tree()) return 0;
  int worst = 0;
  for (int w = 0; w < g.n; ++w) {
    auto& dw = g.dists_from(w);
    for (int x = w + 1; x < g.n; ++x) {
      auto& dx = g.dists_from(x);
      for (int y = x + 1; y < g.n; ++y) {
        auto& dy = g.dists_from(y);
        for (int z = y + 1; z < g.n; ++z) {
          int s1 = dw[x] + dy[z], s2 = dw[y] + dx[z], s3 = dw[z] + dx[y];
          int hi = std::max({s1, s2, s3});
          int mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
          worst = std::max(worst, hi - mid);
        }
      }
    }
  }
  return (worst + 1) / 2;
}

std::vector<int> GeodesicChooser::between(const std::vector<int>& A,
                                          const std::vector<int>& B) const {
  std::vector<int> P = A, Q = B;
  std::sort(P.begin(), P.end());
  std::sort(Q.begin(), Q.end());
  bool swapped = Q < P;
  if (swapped) std::swap(P, Q);
  // multi-source BFS from P, smallest-id predecessor wins
  std::vector<int> dist(g->n, -1), parent(g->n, -1);
  std::deque<int> q;
  for (int s : P)
    if (dist[s] != 0) {
      dist[s] = 0;
      q.push_back(s);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    std::vector<int> nb = g->adj[u];
    std::sort(nb.begin(), nb.end());
    for (int v : nb)
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        parent[v] = u;
        q.push_back(v);
      } else if (dist[v] == dist[u] + 1 && parent[v] > u) {
        parent[v] = u;
      }
  }
  int t = -1;
  for (int v : Q)
    if (t < 0 || dist[v] < dist[t] || (dist[v] == dist[t] && v < t)) t = v;
  std::vector<int> path;
  for (int v = t; v >= 0; v = parent[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());  // now runs P -> Q
  if (swapped) std::reverse(path.begin(), path.end());
  return path;  // runs A -> B
}

std::vector<int> GeodesicChooser::between(int u, int v) const {
  return between(std::vector<int>{u}, std::vector<int>{v});
}

static int dist_to_set(const HypGraph& g, int v, const std::vector<int>& S) {
  int best = -1;
  for (int s : S) {
    int d = g.dist(v, s);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

EpsilonSetup build_setup(const HypGraph& g, int a, int b, std::vector<int> Y, int eps) {
  if (!g.connected()) throw SpecError("Disconnected", "build_setup");
  EpsilonSetup s;
  s.g = &g;
  s.a = a;
  s.b = b;
  s.Y = std::move(Y);
  s.eps = eps;
  s.delta = g.delta >= 0 ? g.delta : compute_delta(g);
  s.eps_prime = eps + 8 * s.delta + 1;
  GeodesicChooser ch{&g};
  s.lambda = ch.between(a, b);
  for (int y : s.Y) {
    int d = dist_to_set(g, y, s.lambda);
    if (2 * d >= eps)
      throw SpecError("PointTooFar",
                      "y=" + std::to_string(y) + " d=" + std::to_string(d));
  }
  return s;
}

ClusterPartition build_clusters(const EpsilonSetup& s, int E) {
  if (E <= 0) throw SpecError("BadChainingRadius", std::to_string(E));
  std::vector<int> pts = s.Y;
  pts.push_back(s.a);
  pts.push_back(s.b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  int m = (int)pts.size();
  std::vector<int> comp(m);
  std::iota(comp.begin(), comp.end(), 0);
  auto root = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (s.g->dist(pts[i], pts[j]) < E) comp[root(i)] = root(j);

  ClusterPartition out;
  out.E = E;
  std::vector<int> idx(m, -1);
  for (int i = 0; i < m; ++i) {
    int r = root(i);
    if (idx[r] < 0) {
      idx[r] = (int)out.clusters.size();
      out.clusters.emplace_back();
    }
    out.clusters[idx[r]].push_back(pts[i]);
  }
  for (auto& c : out.clusters) {
    int lo = (int)s.lambda.size(), hi = -1;
    for (int p : c) {
      int best = dist_to_set(*s.g, p, s.lambda);
      for (int i = 0; i < (int)s.lambda.size(); ++i)
        if (s.g->dist(p, s.lambda[i]) == best) {
          lo = std::min(lo, i);
          hi = std::max(hi, i);
        }
    }
    out.shadows.emplace_back(lo, hi);
  }
  // list clusters in shadow order
  std::vector<int> ord(out.clusters.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int x, int y) {
    return out.shadows[x] < out.shadows[y];
  });
  ClusterPartition sorted;
  sorted.E = E;
  for (int i : ord) {
    sorted.clusters.push_back(out.clusters[i]);
    sorted.shadows.push_back(out.shadows[i]);
  }
  return sorted;
}

ClusterSepGraph cluster_separation_graph(const EpsilonSetup& s, int E, int eps_prime) {
  ClusterSepGraph out;
  out.parts = build_clusters(s, E);
  int k = (int)out.parts.clusters.size();
  const HypGraph& g = *s.g;
  // distance from every vertex to every cluster
  std::vector<std::vector<int>> dcl(k);
  for (int i = 0; i < k; ++i) {
    dcl[i].assign(g.n, -1);
    for (int v = 0; v < g.n; ++v) dcl[i][v] = dist_to_set(g, v, out.parts.clusters[i]);
  }
  auto separates = [&](int m, int i, int j) {
    int d = g.n;  // d(C_i, C_j)
    for (int p : out.parts.clusters[i]) d = std::min(d, dcl[j][p]);
    for (int v = 0; v < g.n; ++v)
      if (dcl[i][v] + dcl[j][v] == d && dcl[m][v] <= 2 * eps_prime) return true;
    return false;
  };
  out.edge.assign(k, std::vector<char>(k, 0));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      bool sep = false;
      for (int m = 0; m < k && !sep; ++m)
        if (m != i && m != j && separates(m, i, j)) sep = true;
      out.edge[i][j] = out.edge[j][i] = !sep;
    }
  // must be the path 0-1-...-(k-1) in shadow order
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      bool want = (j == i + 1);
      if (out.edge[i][j] != (char)want)
        throw SpecError("NotAnInterval", "clusters " + std::to_string(i) + "," +
                                             std::to_string(j) +
                                             (want ? " missing edge" : " extra edge"));
    }
  auto& first = out.parts.clusters.front();
  auto& last = out.parts.clusters.back();
  bool a_first = std::find(first.begin(), first.end(), s.a) != first.end();
  bool b_last = std::find(last.begin(), last.end(), s.b) != last.end();
  if (k == 1) b_last = a_first = a_first && b_last;
  if (!a_first || !b_last) {
    // a,b might sit at the other ends; reorder is not allowed (shadow order is
    // canonical), so this signals an out-of-regime setup
    bool a_last = std::find(last.begin(), last.end(), s.a) != last.end();
    bool b_first = std::find(first.begin(), first.end(), s.b) != first.end();
    if (!(a_last && b_first))
      throw SpecError("NotAnInterval", "endpoint clusters miss a or b");
    // λ runs a->b so shadow order starts at a; flip if the chooser disagreed
    std::reverse(out.parts.clusters.begin(), out.parts.clusters.end());
    std::reverse(out.parts.shadows.begin(), out.parts.shadows.end());
    for (auto& sh : out.parts.shadows)
      sh = {(int)s.lambda.size() - 1 - sh.second, (int)s.lambda.size() - 1 - sh.first};
    std::reverse(out.edge.begin(), out.edge.end());
    for (auto& row : out.edge) std::reverse(row.begin(), row.end());
  }
  out.order.resize(k);
  std::iota(out.order.begin(), out.order.end(), 0);
  return out;
}

int StableInterval::total_length() const {
  int L = 0;
  for (auto& it : items) L += it.len;
  return L;
}

std::vector<int> StableInterval::offsets() const {
  std::vector<int> off(items.size());
  int c = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    off[i] = c;
    c += items[i].len;
  }
  return off;
}

int StableInterval::phi(int t) const {
  int c = 0;
  for (auto& it : items) {
    if (t <= c + it.len) return it.path[t - c];
    c += it.len;
  }
  throw SpecError("CoordinateOutOfRange", std::to_string(t));
}

StableInterval build_stable_interval(const EpsilonSetup& s) {
  return build_stable_interval(s, 56 * s.eps + 1, s.eps_prime);
}

StableInterval build_stable_interval(const EpsilonSetup& s, int E, int eps_prime) {
  StableInterval out;
  out.setup = s;
  out.E = E;
  ClusterSepGraph sep = cluster_separation_graph(s, E, eps_prime);
  int k = (int)sep.parts.clusters.size();
  out.clusters_in_order = sep.parts.clusters;
  GeodesicChooser ch{s.g};

  // shadows must be disjoint in the E > 5eps regime
  if (E > 5 * s.eps) {
    bool disjoint = true;
    for (int i = 0; i + 1 < k; ++i)
      if (sep.parts.shadows[i].second >= sep.parts.shadows[i + 1].first) disjoint = false;
    out.report.check("shadows-disjoint", disjoint, "");
  }

  std::vector<std::vector<int>> conn(std::max(0, k - 1));
  for (int i = 0; i + 1 < k; ++i) {
    conn[i] = ch.between(sep.parts.clusters[i], sep.parts.clusters[i + 1]);
    if ((int)conn[i].size() < 2)
      throw SpecError("NotAnInterval", "adjacent clusters at distance 0");
  }
  for (int i = 0; i < k; ++i) {
    StableItem kitem;
    kitem.is_cluster = true;
    int left = (i > 0) ? conn[i - 1].back() : s.a;
    int right = (i + 1 < k) ? conn[i].front() : s.b;
    kitem.path = ch.between(left, right);
    kitem.len = (int)kitem.path.size() - 1;
    out.items.push_back(kitem);
    if (i + 1 < k) {
      StableItem eitem;
      eitem.is_cluster = false;
      eitem.path = conn[i];
      eitem.len = (int)eitem.path.size() - 1;
      out.items.push_back(eitem);
    }
  }
  // gluing consistency and geodesity of every piece
  bool glued = true, geo = true;
  for (size_t i = 0; i + 1 < out.items.size(); ++i)
    if (out.items[i].path.back() != out.items[i + 1].path.front()) glued = false;
  for (auto& it : out.items)
    if (s.g->dist(it.path.front(), it.path.back()) != it.len) geo = false;
  out.report.check("pieces-glued", glued, "");
  out.report.check("pieces-geodesic", geo, "");
  out.report.check("edge-lengths-positive", [&] {
    for (auto& it : out.items)
      if (!it.is_cluster && it.len < 1) return false;
    return true;
  }(), "");

  // cluster close: attachment points within 7eps of the matching shadow ends
  int worst_close = 0;
  for (int i = 0; i + 1 < k; ++i) {
    int p1 = conn[i].front(), p2 = conn[i].back();
    int x1 = s.lambda[sep.parts.shadows[i].second];
    int x2 = s.lambda[sep.parts.shadows[i + 1].first];
    worst_close = std::max({worst_close, s.g->dist(p1, x1), s.g->dist(p2, x2)});
  }
  out.report.measure("cluster_close", worst_close);
  out.report.check("cluster-close-7eps", worst_close <= 7 * s.eps,
                   "measured " + std::to_string(worst_close));

  // empirical QI data for phi (1-Lipschitz by construction): additive defect
  // and Hausdorff distance to lambda
  int L = out.total_length();
  std::vector<int> img(L + 1);
  for (int t = 0; t <= L; ++t) img[t] = out.phi(t);
  int defect = 0;
  for (int t1 = 0; t1 <= L; ++t1)
    for (int t2 = t1 + 1; t2 <= L; ++t2)
      defect = std::max(defect, (t2 - t1) - s.g->dist(img[t1], img[t2]));
  int haus = 0;
  for (int t = 0; t <= L; ++t) haus = std::max(haus, dist_to_set(*s.g, img[t], s.lambda));
  for (int v : s.lambda) haus = std::max(haus, dist_to_set(*s.g, v, img));
  out.report.measure("L0_additive_defect", defect);
  out.report.measure("hausdorff_to_lambda", haus);
  out.report.measure("endpoint_drift",
                     std::max(s.g->dist(img[0], s.a), s.g->dist(img[L], s.b)));
  if (!out.report.ok()) throw SpecError("StableIntervalInvalid", out.report.first_failure());
  return out;
}

Thickening thicken(const StableInterval& t, int r1, int r2) {
  if (r1 <= 0 || r2 <= 0) throw SpecError("BadThickeningRadii", "r1,r2 must be positive");
  Thickening out;
  out.r1 = r1;
  out.r2 = r2;
  int L = t.total_length();
  auto off = t.offsets();
  std::vector<std::pair<int, int>> blocks;
  for (size_t i = 0; i < t.items.size(); ++i)
    if (t.items[i].is_cluster)
      blocks.emplace_back(std::max(0, off[i] - r1),
                          std::min(L, off[i] + t.items[i].len + r1));
  // merge blocks whose gap is at most r2
  for (auto& b : blocks) {
    if (!out.cluster_blocks.empty() && b.first - out.cluster_blocks.back().second <= r2)
      out.cluster_blocks.back().second = std::max(out.cluster_blocks.back().second, b.second);
    else
      out.cluster_blocks.push_back(b);
  }
  int cur = 0;
  for (auto& b : out.cluster_blocks) {
    if (b.first > cur) out.edge_blocks.emplace_back(cur, b.first);
    cur = std::max(cur, b.second);
  }
  if (cur < L) out.edge_blocks.emplace_back(cur, L);
  out.degenerate = out.edge_blocks.empty();
  return out;
}

}  // namespace scube
