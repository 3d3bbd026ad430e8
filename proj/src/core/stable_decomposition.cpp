#include "scube/stable_decomposition.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace scube {

namespace {

int dist_to(const HypGraph& g, int v, const std::vector<int>& S) {
  int best = -1;
  for (int s : S) {
    int d = g.dist(v, s);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

std::vector<int> with_point(std::vector<int> Y, int z) {
  Y.push_back(z);
  std::sort(Y.begin(), Y.end());
  Y.erase(std::unique(Y.begin(), Y.end()), Y.end());
  return Y;
}

bool in_chaining_set(const EpsilonSetup& s, int z) {
  return z == s.a || z == s.b ||
         std::find(s.Y.begin(), s.Y.end(), z) != s.Y.end();
}

EpsilonSetup raw_setup(const EpsilonSetup& base, int a, int b, std::vector<int> Y) {
  EpsilonSetup out = base;
  out.a = a;
  out.b = b;
  std::sort(Y.begin(), Y.end());
  Y.erase(std::unique(Y.begin(), Y.end()), Y.end());
  out.Y = std::move(Y);
  GeodesicChooser ch{base.g};
  out.lambda = ch.between(a, b);
  return out;
}

bool items_equal(const StableInterval& A, const StableInterval& B) {
  if (A.items.size() != B.items.size()) return false;
  for (size_t i = 0; i < A.items.size(); ++i)
    if (A.items[i].is_cluster != B.items[i].is_cluster ||
        A.items[i].path != B.items[i].path)
      return false;
  return true;
}

bool edges_equal(const StableInterval& A, const StableInterval& B) {
  std::vector<const StableItem*> ea, eb;
  for (auto& it : A.items)
    if (!it.is_cluster) ea.push_back(&it);
  for (auto& it : B.items)
    if (!it.is_cluster) eb.push_back(&it);
  if (ea.size() != eb.size()) return false;
  for (size_t i = 0; i < ea.size(); ++i)
    if (ea[i]->path != eb[i]->path) return false;
  return true;
}

// global ranges of the edge items, in order
std::vector<std::pair<int, int>> edge_item_ranges(const StableInterval& T) {
  std::vector<std::pair<int, int>> out;
  auto off = T.offsets();
  for (size_t i = 0; i < T.items.size(); ++i)
    if (!T.items[i].is_cluster)
      out.emplace_back(off[i], off[i] + T.items[i].len);
  return out;
}

int cluster_index_of(const StableInterval& T, int y) {
  for (size_t i = 0; i < T.clusters_in_order.size(); ++i) {
    auto& c = T.clusters_in_order[i];
    if (std::find(c.begin(), c.end(), y) != c.end()) return (int)i;
  }
  return -1;
}

// global range of mu(C) for cluster index ci
std::pair<int, int> cluster_item_range(const StableInterval& T, int ci) {
  auto off = T.offsets();
  int item = 2 * ci;
  return {off[item], off[item] + T.items[item].len};
}

int comp_containing(const std::vector<std::pair<int, int>>& comps,
                    std::pair<int, int> range) {
  for (size_t i = 0; i < comps.size(); ++i)
    if (comps[i].first <= range.first && range.second <= comps[i].second)
      return (int)i;
  return -1;
}

}  // namespace

std::vector<std::pair<int, int>> complement_components(
    int L, const std::vector<std::pair<int, int>>& segs) {
  std::vector<std::pair<int, int>> out;
  int cur = 0;
  for (auto& s : segs) {
    out.emplace_back(cur, s.first);
    cur = s.second;
  }
  out.emplace_back(cur, L);
  return out;
}

std::vector<std::pair<int, int>> edge_material(const DecompSide& s) {
  int L = s.T.total_length();
  std::vector<std::pair<int, int>> out;
  int cur = 0;
  for (auto& b : s.cluster_blocks) {
    if (b.first > cur) out.emplace_back(cur, b.first);
    cur = std::max(cur, b.second);
  }
  if (cur < L) out.emplace_back(cur, L);
  return out;
}

DecompSide plain_side(const StableInterval& T) {
  DecompSide s;
  s.T = T;
  auto off = T.offsets();
  for (size_t i = 0; i < T.items.size(); ++i)
    if (T.items[i].is_cluster)
      s.cluster_blocks.emplace_back(off[i], off[i] + T.items[i].len);
  return s;
}

StablePair identity_pair(const StableInterval& T, std::vector<int> Y0) {
  StablePair p;
  p.s1 = plain_side(T);
  p.s2 = p.s1;
  for (auto& e : edge_item_ranges(T)) {
    p.s1.stable.push_back(e);
    p.s2.stable.push_back(e);
    p.tags.push_back("identical");
  }
  std::sort(Y0.begin(), Y0.end());
  p.Y0 = std::move(Y0);
  validate_pair(p);
  return p;
}

StablePair reverse_pair(const StablePair& p) {
  StablePair out = p;
  std::swap(out.s1, out.s2);
  out.report = Report{};
  validate_pair(out);
  return out;
}

Report validate_pair(StablePair& p) {
  Report r;
  r.check("same-space", p.s1.T.setup.g == p.s2.T.setup.g, "");
  const HypGraph& g = *p.s1.T.setup.g;

  // Y0 must lie in both cluster-point sets
  {
    bool ok = true;
    std::string wit;
    for (int y : p.Y0)
      if (std::find(p.s1.T.setup.Y.begin(), p.s1.T.setup.Y.end(), y) ==
              p.s1.T.setup.Y.end() ||
          std::find(p.s2.T.setup.Y.begin(), p.s2.T.setup.Y.end(), y) ==
              p.s2.T.setup.Y.end()) {
        ok = false;
        wit = "y=" + std::to_string(y);
        break;
      }
    r.check("Y0-in-both", ok, wit);
  }

  // (a) positive integer lengths inside the edge material, sorted, unit gaps
  // within a single edge segment
  for (int side = 0; side < 2; ++side) {
    const DecompSide& s = side ? p.s2 : p.s1;
    auto em = edge_material(s);
    bool ok = true;
    std::string wit;
    for (size_t i = 0; i < s.stable.size() && ok; ++i) {
      auto& seg = s.stable[i];
      if (seg.second - seg.first < 1) {
        ok = false;
        wit = "nonpositive length";
        break;
      }
      int e = comp_containing(em, seg);
      if (e < 0) {
        ok = false;
        wit = "segment not in edge material";
        break;
      }
      if (i + 1 < s.stable.size()) {
        auto& nxt = s.stable[i + 1];
        if (nxt.first < seg.second) {
          ok = false;
          wit = "segments overlap";
        } else if (nxt.first == seg.second && comp_containing(em, nxt) == e) {
          ok = false;
          wit = "touching segments in one edge";
        }
      }
    }
    r.check(side ? "integer-length'" : "integer-length", ok, wit);
  }

  // (b) order-preserving bijection alpha: index pairing of sorted lists
  r.check("stable-bijection", p.s1.stable.size() == p.s2.stable.size(),
          std::to_string(p.s1.stable.size()) + " vs " +
              std::to_string(p.s2.stable.size()));
  size_t n = std::min(p.s1.stable.size(), p.s2.stable.size());

  // (c) pair isometries need equal lengths
  {
    bool ok = true;
    std::string wit;
    for (size_t i = 0; i < n; ++i) {
      int l1 = p.s1.stable[i].second - p.s1.stable[i].first;
      int l2 = p.s2.stable[i].second - p.s2.stable[i].first;
      if (l1 != l2) {
        ok = false;
        wit = "pair " + std::to_string(i) + ": " + std::to_string(l1) + " vs " +
              std::to_string(l2);
        break;
      }
    }
    r.check("pair-isometries", ok, wit);
    if (!ok) {
      r.measure("L", -1);
      p.report = r;
      return r;
    }
  }

  // (d),(e) identical vs close pairs
  int nonident = 0, maxclose = 0;
  p.tags.assign(n, "identical");
  for (size_t i = 0; i < n; ++i) {
    int lo1 = p.s1.stable[i].first, lo2 = p.s2.stable[i].first;
    int len = p.s1.stable[i].second - lo1;
    bool ident = true;
    int worst = 0;
    for (int t = 0; t <= len; ++t) {
      int v1 = p.s1.T.phi(lo1 + t), v2 = p.s2.T.phi(lo2 + t);
      if (v1 != v2) ident = false;
      worst = std::max(worst, g.dist(v1, v2));
    }
    if (!ident) {
      ++nonident;
      maxclose = std::max(maxclose, worst);
      p.tags[i] = "close";
    }
  }
  r.measure("nonidentical_pairs", nonident);
  r.measure("max_close_dist", maxclose);

  // (f) unstable components of T_e - T_s
  int nuns = 0, maxuns = 0;
  for (int side = 0; side < 2; ++side) {
    const DecompSide& s = side ? p.s2 : p.s1;
    auto em = edge_material(s);
    for (auto& e : em) {
      int cur = e.first;
      for (auto& seg : s.stable) {
        if (seg.first < e.first || seg.second > e.second) continue;
        if (seg.first > cur) {
          ++nuns;
          maxuns = std::max(maxuns, seg.first - cur);
        }
        cur = seg.second;
      }
      if (e.second > cur) {
        ++nuns;
        maxuns = std::max(maxuns, e.second - cur);
      }
    }
  }
  r.measure("unstable_components", nuns);
  r.measure("max_unstable_diam", maxuns);

  // (g) beta: counts, endpoints, cluster identification
  auto comps1 = complement_components(p.s1.T.total_length(), p.s1.stable);
  auto comps2 = complement_components(p.s2.T.total_length(), p.s2.stable);
  r.check("beta-counts", comps1.size() == comps2.size(), "");
  {
    // a,b sit at the abstract ends of their cluster components
    bool ok = comps1.front().first == 0 && comps2.front().first == 0;
    r.check("endpoint-condition", ok, "");
  }
  {
    bool ok = true;
    std::string wit;
    for (int y : p.Y0) {
      int c1 = cluster_index_of(p.s1.T, y);
      int c2 = cluster_index_of(p.s2.T, y);
      if (c1 < 0 || c2 < 0) {
        ok = false;
        wit = "y=" + std::to_string(y) + " not in a cluster";
        break;
      }
      int k1 = comp_containing(comps1, cluster_item_range(p.s1.T, c1));
      int k2 = comp_containing(comps2, cluster_item_range(p.s2.T, c2));
      if (k1 < 0 || k2 < 0 || k1 != k2) {
        ok = false;
        wit = "y=" + std::to_string(y) + " comps " + std::to_string(k1) + "," +
              std::to_string(k2);
        break;
      }
    }
    r.check("cluster-identify", ok, wit);
  }

  int L = 0;
  if (nonident > 0) L = std::max({nonident, maxclose + 1});
  L = std::max({L, nuns, maxuns});
  r.measure("L", L);
  p.L = L;
  p.report = r;
  return r;
}

StablePair add_cluster_point(const EpsilonSetup& s, int z, int max_dist) {
  return add_cluster_point(s, z, 56 * s.eps + 1, s.eps_prime, max_dist);
}

StablePair add_cluster_point(const EpsilonSetup& s, int z, int E, int eps_prime,
                             int max_dist) {
  const HypGraph& g = *s.g;
  int dz = dist_to(g, z, s.lambda);
  if (max_dist < 0 ? (2 * dz >= s.eps) : (dz > max_dist))
    throw SpecError("PointTooFar", "z=" + std::to_string(z) + " d=" + std::to_string(dz));

  EpsilonSetup s2 = s;
  s2.Y = with_point(s.Y, z);
  StableInterval T1 = build_stable_interval(s, E, eps_prime);
  StableInterval T2 = build_stable_interval(s2, E, eps_prime);

  StablePair out;
  out.s1 = plain_side(T1);
  out.s2 = plain_side(T2);
  out.Y0 = s.Y;
  std::sort(out.Y0.begin(), out.Y0.end());

  if (in_chaining_set(s, z) || items_equal(T1, T2)) {
    for (auto& e : edge_item_ranges(T1)) out.s1.stable.push_back(e);
    for (auto& e : edge_item_ranges(T2)) out.s2.stable.push_back(e);
    if (out.s1.stable.size() != out.s2.stable.size())
      throw SpecError("StablePairInvalid", "identity case with unequal edges");
    validate_pair(out);
    if (!out.report.ok())
      throw SpecError("StablePairInvalid", out.report.first_failure());
    return out;
  }

  auto& c1 = T1.clusters_in_order;
  auto& c2 = T2.clusters_in_order;
  int k1 = (int)c1.size();
  auto e1 = edge_item_ranges(T1);
  auto e2 = edge_item_ranges(T2);
  auto epath = [](const StableInterval& T, int i) -> const std::vector<int>& {
    return T.items[2 * i + 1].path;
  };

  std::vector<int> affected;
  for (int i = 0; i < k1; ++i)
    if (dist_to(g, z, c1[i]) < E) affected.push_back(i);

  auto push_pair = [&](std::pair<int, int> a, std::pair<int, int> b,
                       const char* tag) {
    out.s1.stable.push_back(a);
    out.s2.stable.push_back(b);
    out.tags.push_back(tag);
  };

  if (affected.empty()) {
    // split case: z is its own cluster, inserted at index f2
    int f2 = -1;
    for (size_t i = 0; i < c2.size(); ++i)
      if (c2[i] == std::vector<int>{z}) f2 = (int)i;
    if (f2 <= 0 || f2 + 1 >= (int)c2.size())
      throw SpecError("StablePairInvalid", "split cluster at the boundary");
    for (int i = 0; i < k1 - 1; ++i) {
      if (i != f2 - 1) {
        int j = (i < f2 - 1) ? i : i + 1;
        if (epath(T1, i) != epath(T2, j))
          throw SpecError("StablePairInvalid", "expected identical edge changed");
        push_pair(e1[i], e2[j], "identical");
        continue;
      }
      // the split edge D vs D1 u D2
      const std::vector<int>& D = epath(T1, i);
      int g0 = (int)D.size() - 1;
      int g1 = e2[f2 - 1].second - e2[f2 - 1].first;
      int g2 = e2[f2].second - e2[f2].first;
      int best = g.n, u = 0, v = 0;
      for (int t = 0; t <= g0; ++t) {
        int d = g.dist(z, D[t]);
        if (d < best) {
          best = d;
          u = v = t;
        } else if (d == best) {
          v = t;
        }
      }
      int pl = std::min(u, g1);
      int qr = std::min(g0 - v, g2);
      qr = std::min(qr, g0 - 1 - pl);
      if (pl >= 1)
        push_pair({e1[i].first, e1[i].first + pl},
                  {e2[f2 - 1].first, e2[f2 - 1].first + pl}, "split-left");
      if (qr >= 1)
        push_pair({e1[i].second - qr, e1[i].second},
                  {e2[f2].second - qr, e2[f2].second}, "split-right");
    }
  } else {
    // affected case
    int f = affected.front(), l = affected.back();
    if (l - f + 1 != (int)affected.size())
      throw SpecError("StablePairInvalid", "affected clusters not contiguous");
    std::vector<int> merged;
    for (int i = f; i <= l; ++i)
      merged.insert(merged.end(), c1[i].begin(), c1[i].end());
    merged = with_point(merged, z);
    if ((int)c2.size() != k1 - (l - f) || c2[f] != merged)
      throw SpecError("StablePairInvalid", "unexpected cluster structure");
    for (int i = 0; i < f; ++i)
      if (c2[i] != c1[i]) throw SpecError("StablePairInvalid", "a-side cluster changed");
    for (int i = l + 1; i < k1; ++i)
      if (c2[i - (l - f)] != c1[i])
        throw SpecError("StablePairInvalid", "b-side cluster changed");

    for (int i = 0; i < k1 - 1; ++i) {
      if (i < f - 1) {
        if (epath(T1, i) != epath(T2, i))
          throw SpecError("StablePairInvalid", "expected identical edge changed");
        push_pair(e1[i], e2[i], "identical");
      } else if (i == f - 1) {
        // outer-left: trim the excess at the affected (b-side) end
        int g0 = e1[i].second - e1[i].first;
        int gp = e2[i].second - e2[i].first;
        int ell = std::min(g0, gp);
        push_pair({e1[i].first, e1[i].first + ell},
                  {e2[i].first, e2[i].first + ell}, "outer-left");
      } else if (i < l) {
        continue;  // inner edge between affected clusters: unstable
      } else if (i == l) {
        // outer-right: trim the excess at the affected (a-side) end
        int g0 = e1[i].second - e1[i].first;
        int gp = e2[f].second - e2[f].first;
        int ell = std::min(g0, gp);
        push_pair({e1[i].second - ell, e1[i].second},
                  {e2[f].second - ell, e2[f].second}, "outer-right");
      } else {
        int j = i - (l - f);
        if (epath(T1, i) != epath(T2, j))
          throw SpecError("StablePairInvalid", "expected identical edge changed");
        push_pair(e1[i], e2[j], "identical");
      }
    }
  }
  validate_pair(out);
  if (!out.report.ok())
    throw SpecError("StablePairInvalid", out.report.first_failure());
  return out;
}

namespace {

// fine.stable is contained in coarse.stable and the induced betas nest
bool refines(const StablePair& coarse, const StablePair& fine, std::string& wit) {
  auto contained = [](const std::vector<std::pair<int, int>>& big,
                      const std::vector<std::pair<int, int>>& small) {
    for (auto& s : small) {
      bool ok = false;
      for (auto& b : big)
        if (b.first <= s.first && s.second <= b.second) ok = true;
      if (!ok) return false;
    }
    return true;
  };
  if (!contained(coarse.s1.stable, fine.s1.stable) ||
      !contained(coarse.s2.stable, fine.s2.stable)) {
    wit = "containment";
    return false;
  }
  auto co1 = complement_components(coarse.s1.T.total_length(), coarse.s1.stable);
  auto co2 = complement_components(coarse.s2.T.total_length(), coarse.s2.stable);
  auto fi1 = complement_components(fine.s1.T.total_length(), fine.s1.stable);
  auto fi2 = complement_components(fine.s2.T.total_length(), fine.s2.stable);
  for (size_t i = 0; i < co1.size(); ++i) {
    int k = comp_containing(fi1, co1[i]);
    if (k < 0) {
      wit = "coarse comp split";
      return false;
    }
    // beta(C1) = co2[i] must sit inside beta0(C_{1,0}) = fi2[k]
    if (!(fi2[k].first <= co2[i].first && co2[i].second <= fi2[k].second)) {
      wit = "beta containment at comp " + std::to_string(i);
      return false;
    }
  }
  return true;
}

}  // namespace

StablePair refine_and_compose(const StablePair& p12, const StablePair& p23) {
  if (!items_equal(p12.s2.T, p23.s1.T) ||
      p12.s2.cluster_blocks != p23.s1.cluster_blocks)
    throw SpecError("MiddleMismatch", "middle intervals differ");

  // intersect the two middle decompositions
  struct Piece {
    std::pair<int, int> m;
    int j12, j23;
  };
  std::vector<Piece> pieces;
  for (size_t i = 0; i < p12.s2.stable.size(); ++i)
    for (size_t j = 0; j < p23.s1.stable.size(); ++j) {
      int lo = std::max(p12.s2.stable[i].first, p23.s1.stable[j].first);
      int hi = std::min(p12.s2.stable[i].second, p23.s1.stable[j].second);
      if (hi - lo >= 1) pieces.push_back({{lo, hi}, (int)i, (int)j});
    }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.m < b.m; });

  StablePair out;
  out.s1 = p12.s1;
  out.s1.stable.clear();
  out.s2 = p23.s2;
  out.s2.stable.clear();
  StablePair r12 = p12, r23 = p23;
  r12.s1.stable.clear();
  r12.s2.stable.clear();
  r23.s1.stable.clear();
  r23.s2.stable.clear();
  for (auto& pc : pieces) {
    auto& E2a = p12.s2.stable[pc.j12];
    auto& E1 = p12.s1.stable[pc.j12];
    auto& E2b = p23.s1.stable[pc.j23];
    auto& E3 = p23.s2.stable[pc.j23];
    std::pair<int, int> seg1 = {E1.first + (pc.m.first - E2a.first),
                                E1.first + (pc.m.second - E2a.first)};
    std::pair<int, int> seg3 = {E3.first + (pc.m.first - E2b.first),
                                E3.first + (pc.m.second - E2b.first)};
    out.s1.stable.push_back(seg1);
    out.s2.stable.push_back(seg3);
    out.tags.push_back("composed");
    r12.s1.stable.push_back(seg1);
    r12.s2.stable.push_back(pc.m);
    r23.s1.stable.push_back(pc.m);
    r23.s2.stable.push_back(seg3);
  }

  std::set_intersection(p12.Y0.begin(), p12.Y0.end(), p23.Y0.begin(),
                        p23.Y0.end(), std::back_inserter(out.Y0));

  validate_pair(out);
  std::string wit;
  out.report.check("refines-left", refines(p12, r12, wit), wit);
  out.report.check("refines-right", refines(p23, r23, wit), wit);
  long bound = 4L * std::max(1, p12.L) * std::max(1, p23.L);
  out.report.check("4L1L2-bound", out.L <= bound,
                   "L=" + std::to_string(out.L) + " bound=" + std::to_string(bound));
  if (!out.report.ok())
    throw SpecError("StablePairInvalid", out.report.first_failure());
  return out;
}

namespace {

// role swap between two setups with the same chaining set: identical edges
StablePair swap_pair(const EpsilonSetup& sA, const EpsilonSetup& sB, int E,
                     int eps_prime, const std::vector<int>& Y0) {
  StableInterval TA = build_stable_interval(sA, E, eps_prime);
  StableInterval TB = build_stable_interval(sB, E, eps_prime);
  if (!edges_equal(TA, TB))
    throw SpecError("StablePairInvalid", "role swap changed edge components");
  StablePair p;
  p.s1 = plain_side(TA);
  p.s2 = plain_side(TB);
  for (auto& e : edge_item_ranges(TA)) p.s1.stable.push_back(e);
  for (auto& e : edge_item_ranges(TB)) p.s2.stable.push_back(e);
  p.Y0 = Y0;
  for (auto& tagless : p.s1.stable) {
    (void)tagless;
    p.tags.push_back("swap");
  }
  validate_pair(p);
  if (!p.report.ok()) throw SpecError("StablePairInvalid", p.report.first_failure());
  return p;
}

}  // namespace

StablePair perturb_endpoint(const EpsilonSetup& s, int which, int new_pt, int E,
                            int eps_prime) {
  const HypGraph& g = *s.g;
  if (E <= 0) E = 56 * s.eps + 1;
  int ep = eps_prime > 0 ? eps_prime : s.eps_prime;
  int old = which ? s.b : s.a;
  if (new_pt == old)
    return identity_pair(build_stable_interval(s, E, ep), s.Y);
  if (g.dist(old, new_pt) > s.eps)
    throw SpecError("PointTooFar", "endpoint moved more than eps");

  auto endpoints = [&](const EpsilonSetup& base, int pt) {
    return which ? std::pair<int, int>{base.a, pt} : std::pair<int, int>{pt, base.b};
  };

  // (1)->(2): add the old endpoint as a cluster point (identity)
  StablePair p12 = add_cluster_point(s, old, E, ep, 0);
  EpsilonSetup s2 = raw_setup(s, s.a, s.b, with_point(s.Y, old));
  // (2)->(3): add the new endpoint
  StablePair p23 = add_cluster_point(s2, new_pt, E, ep, s.eps);
  EpsilonSetup s3 = raw_setup(s, s.a, s.b, with_point(s2.Y, new_pt));
  // (3)->(4): switch endpoint roles, same chaining set
  auto [a4, b4] = endpoints(s, new_pt);
  EpsilonSetup s4 = raw_setup(s, a4, b4, s3.Y);
  StablePair p34 = swap_pair(s3, s4, E, ep, s.Y);
  // (4)->(5): remove the old endpoint from the cluster set
  EpsilonSetup s5 = raw_setup(s, a4, b4, with_point(s.Y, new_pt));
  StablePair p45 = reverse_pair(add_cluster_point(s5, old, E, ep, s.eps));
  // (5)->(6): drop the new endpoint from the cluster set (identity)
  EpsilonSetup s6 = raw_setup(s, a4, b4, s.Y);
  StablePair p56 = reverse_pair(add_cluster_point(s6, new_pt, E, ep, 0));

  StablePair acc = refine_and_compose(p12, p23);
  acc = refine_and_compose(acc, p34);
  acc = refine_and_compose(acc, p45);
  acc = refine_and_compose(acc, p56);
  return acc;
}

StablePair thicken_pair(const StablePair& p, int r1, int r2) {
  StablePair out;
  out.s1 = p.s1;
  out.s2 = p.s2;
  out.Y0 = p.Y0;
  Thickening th1 = thicken(p.s1.T, r1, r2);
  Thickening th2 = thicken(p.s2.T, r1, r2);
  out.s1.cluster_blocks = th1.cluster_blocks;
  out.s2.cluster_blocks = th2.cluster_blocks;
  out.s1.thickened = out.s2.thickened = true;
  out.s1.stable.clear();
  out.s2.stable.clear();
  out.tags.clear();

  auto clip = [](std::pair<int, int> seg,
                 const std::vector<std::pair<int, int>>& em) {
    std::pair<int, int> best{0, 0};
    for (auto& e : em) {
      int lo = std::max(seg.first, e.first), hi = std::min(seg.second, e.second);
      if (hi - lo > best.second - best.first) best = {lo, hi};
    }
    return best;
  };
  auto em1 = edge_material(out.s1), em2 = edge_material(out.s2);
  for (size_t i = 0; i < p.s1.stable.size(); ++i) {
    auto S1 = p.s1.stable[i], S2 = p.s2.stable[i];
    auto t1 = clip(S1, em1), t2 = clip(S2, em2);
    // align via the plain pair isometry so paired points stay paired
    int lo_off = std::max(t1.first - S1.first, t2.first - S2.first);
    int hi_off = std::min(t1.second - S1.first, t2.second - S2.first);
    if (hi_off - lo_off < 1) continue;
    out.s1.stable.push_back({S1.first + lo_off, S1.first + hi_off});
    out.s2.stable.push_back({S2.first + lo_off, S2.first + hi_off});
    out.tags.push_back(p.tags.empty() ? "thick" : p.tags[i] + "+thick");
  }
  validate_pair(out);
  std::string wit;
  StablePair fine = out;  // refinement witness vs the plain pair
  out.report.check("thick-subset-of-plain", refines(p, fine, wit), wit);
  if (!out.report.ok())
    throw SpecError("StablePairInvalid", out.report.first_failure());
  return out;
}

BuildResult build_stable_pair(const EpsilonSetup& s, const EpsilonSetup& sp,
                              int r1, int r2, int N, int E_in, int eps_prime_in) {
  const HypGraph& g = *s.g;
  if (s.g != sp.g) throw SpecError("NotAdmissible", "different spaces");
  if (g.dist(s.a, sp.a) > s.eps || g.dist(s.b, sp.b) > s.eps)
    throw SpecError("NotAdmissible", "endpoints too far");
  for (int y : s.Y)
    if (2 * dist_to(g, y, sp.lambda) >= s.eps)
      throw SpecError("NotAdmissible", "Y not near lambda'");
  for (int y : sp.Y)
    if (2 * dist_to(g, y, s.lambda) >= s.eps)
      throw SpecError("NotAdmissible", "Y' not near lambda");
  std::vector<int> sym;
  std::set_symmetric_difference(s.Y.begin(), s.Y.end(), sp.Y.begin(), sp.Y.end(),
                                std::back_inserter(sym));
  if ((int)sym.size() >= N)
    throw SpecError("NotAdmissible", "|Y symdiff Y'| = " + std::to_string(sym.size()));

  int E = E_in > 0 ? E_in : 56 * s.eps + 1;
  int ep = eps_prime_in > 0 ? eps_prime_in : s.eps_prime;
  std::vector<int> Y0;
  std::set_intersection(s.Y.begin(), s.Y.end(), sp.Y.begin(), sp.Y.end(),
                        std::back_inserter(Y0));

  BuildResult res;
  EpsilonSetup cur = s;
  StablePair acc = identity_pair(build_stable_interval(cur, E, ep), Y0);
  std::vector<int> add, rem;
  std::set_difference(sp.Y.begin(), sp.Y.end(), s.Y.begin(), s.Y.end(),
                      std::back_inserter(add));
  std::set_difference(s.Y.begin(), s.Y.end(), sp.Y.begin(), sp.Y.end(),
                      std::back_inserter(rem));
  for (int x : add) {
    acc = refine_and_compose(acc, add_cluster_point(cur, x, E, ep));
    cur = raw_setup(cur, cur.a, cur.b, with_point(cur.Y, x));
    ++res.moves;
  }
  if (sp.a != s.a) {
    acc = refine_and_compose(acc, perturb_endpoint(cur, 0, sp.a, E, ep));
    cur = raw_setup(cur, sp.a, cur.b, cur.Y);
    ++res.moves;
  }
  if (sp.b != s.b) {
    acc = refine_and_compose(acc, perturb_endpoint(cur, 1, sp.b, E, ep));
    cur = raw_setup(cur, cur.a, sp.b, cur.Y);
    ++res.moves;
  }
  for (int x : rem) {
    EpsilonSetup nxt = raw_setup(cur, cur.a, cur.b, [&] {
      std::vector<int> Y = cur.Y;
      Y.erase(std::remove(Y.begin(), Y.end(), x), Y.end());
      return Y;
    }());
    acc = refine_and_compose(acc, reverse_pair(add_cluster_point(nxt, x, E, ep)));
    cur = nxt;
    ++res.moves;
  }
  if (cur.a != sp.a || cur.b != sp.b || cur.Y != sp.Y)
    throw SpecError("NotAdmissible", "move sequence did not reach the target setup");
  acc.report.check("move-count", res.moves <= (int)sym.size() + 2,
                   std::to_string(res.moves));
  acc.report.measure("moves", res.moves);
  res.plain = acc;
  res.thick = thicken_pair(acc, r1, r2);
  return res;
}

std::tuple<CollapsedInterval, CollapsedInterval, IntervalIsometry>
collapse_to_isometry(const StablePair& p) {
  StablePair q = p;
  validate_pair(q);
  if (!q.report.ok()) throw SpecError("InvalidPair", q.report.first_failure());

  auto collapse = [](const DecompSide& s) {
    CollapsedInterval c;
    auto comps = complement_components(s.T.total_length(), s.stable);
    int pos = 0;
    for (size_t i = 0; i < comps.size(); ++i) {
      c.comp_pos.push_back(pos);
      if (i < s.stable.size()) pos += s.stable[i].second - s.stable[i].first;
    }
    c.length = pos;
    c.delta.assign(s.T.total_length() + 1, 0);
    for (int t = 0; t <= s.T.total_length(); ++t) {
      int out = 0;
      for (size_t i = 0; i < s.stable.size(); ++i) {
        if (t <= s.stable[i].first) break;
        out += std::min(t, s.stable[i].second) - s.stable[i].first;
      }
      c.delta[t] = out;
    }
    return c;
  };
  CollapsedInterval c1 = collapse(q.s1), c2 = collapse(q.s2);
  if (c1.length != c2.length)
    throw SpecError("InvalidPair", "collapsed lengths differ");
  IntervalIsometry phi;
  phi.length = c1.length;
  for (size_t i = 0; i < c1.comp_pos.size(); ++i) phi.comp_map.push_back((int)i);
  // endpoint identification: a,b sit at global coordinates 0 and L, which
  // collapse to 0 and length on both sides
  if (c1.delta.front() != 0 || c2.delta.front() != 0 ||
      c1.delta.back() != c1.length || c2.delta.back() != c2.length)
    throw SpecError("InvalidPair", "endpoint collapse mismatch");
  return {c1, c2, phi};
}

}  // namespace scube
