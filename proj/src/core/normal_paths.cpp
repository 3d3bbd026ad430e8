#include "scube/normal_paths.hpp"

#include <algorithm>
#include <bit>

namespace scube {

std::vector<int> transitional_set(const CubeComplex& cc, Vertex p, Vertex b) {
  if (!cc.has(p) || !cc.has(b)) throw SpecError("VertexNotInComplex", "transitional_set");
  std::vector<int> sep;
  Vertex diff = p ^ b;
  for (int w = 0; w < cc.p.n; ++w)
    if ((diff >> w) & 1) sep.push_back(w);
  // w is crossed-first-minimal iff no separating u has b-side(w) < b-side(u),
  // i.e. the b-side half-space of w is <-maximal among the separating ones.
  std::vector<int> out;
  for (int w : sep) {
    HsId hw = cc.p.chosen(b, w);
    bool minimal = true;
    for (int u : sep)
      if (u != w && cc.p.less(hw, cc.p.chosen(b, u))) { minimal = false; break; }
    if (minimal) out.push_back(w);
  }
  return out;
}

NormalPath nr_path(const CubeComplex& cc, Vertex a, Vertex b) {
  if (!cc.has(a) || !cc.has(b)) throw SpecError("VertexNotInComplex", "nr_path");
  NormalPath path;
  path.vertices.push_back(a);
  Vertex p = a;
  while (p != b) {
    std::vector<int> t = transitional_set(cc, p, b);
    Vertex q = p;
    for (int w : t) q ^= Vertex(1) << w;
    path.steps.push_back(t);
    path.vertices.push_back(q);
    p = q;
  }
  return path;
}

int transition_index(const CubeComplex& cc, Vertex a, Vertex b, int h) {
  if (h < 0 || h >= cc.p.n || !(((a ^ b) >> h) & 1))
    throw SpecError("NotSeparating", "wall " + std::to_string(h));
  HsId hb = cc.p.chosen(b, h);
  // walls crossed before h are the u with b-side(h) < b-side(u); the index is
  // the longest such chain, found by a memoized upward walk
  Vertex diff = a ^ b;
  std::vector<int> memo(2 * cc.p.n, -1);
  auto depth = [&](auto&& self, HsId g) -> int {
    if (memo[g] >= 0) return memo[g];
    int best = 0;
    for (int w = 0; w < cc.p.n; ++w) {
      if (!((diff >> w) & 1)) continue;
      HsId gw = cc.p.chosen(b, w);
      if (cc.p.less(g, gw)) best = std::max(best, 1 + self(self, gw));
    }
    return memo[g] = best;
  };
  return depth(depth, hb);
}

HullComplex hull_complex(const CubeComplex& cc, Vertex a, Vertex b) {
  std::vector<int> drop;
  Vertex diff = a ^ b;
  for (int w = 0; w < cc.p.n; ++w)
    if (!((diff >> w) & 1)) drop.push_back(w);
  auto [sub, vm] = delete_hyperplanes(cc, drop);
  return {sub, vm, vm.apply(a), vm.apply(b)};
}

StableMovesReport verify_stable_moves(const CubeComplex& cc, Vertex a, Vertex b, int h) {
  if (h < 0 || h >= cc.p.n) throw SpecError("UnknownHyperplane", std::to_string(h));
  if (std::popcount(a ^ b) != cc.p.n)
    throw SpecError("NotAHullComplex", "some wall fails to separate a,b");
  StableMovesReport out;
  out.before = nr_path(cc, a, b);
  auto [cc2, vm] = delete_hyperplanes(cc, {h});
  Vertex a2 = vm.apply(a), b2 = vm.apply(b);
  out.after = nr_path(cc2, a2, b2);

  int n = out.before.length(), m = out.after.length();
  out.report.measure("n", n);
  out.report.measure("m", m);
  out.report.check("n<=m+1", n <= m + 1,
                   "n=" + std::to_string(n) + " m=" + std::to_string(m));
  int worst = 0;
  for (int i = 0; i <= n; ++i) {
    Vertex pi = vm.apply(out.before.vertices[i]);
    Vertex qi = out.after.vertices[std::min(i, m)];
    worst = std::max(worst, distance_linf(cc2, pi, qi));
  }
  out.report.measure("max_dinf_drift", worst);
  out.report.check("dinf(Delta(p_i),p'_i)<=1", worst <= 1, "drift " + std::to_string(worst));
  bool shifts_ok = true;
  std::string wit;
  for (int w = 0; w < cc.p.n; ++w) {
    if (w == h) continue;
    int t0 = transition_index(cc, a, b, w);
    int w2 = (int)(std::lower_bound(vm.keep.begin(), vm.keep.end(), w) - vm.keep.begin());
    int t1 = transition_index(cc2, a2, b2, w2);
    int delta = t0 - t1;
    if (delta != 0 && delta != 1) {
      shifts_ok = false;
      wit = "wall " + std::to_string(w) + " shift " + std::to_string(delta);
      break;
    }
  }
  out.report.check("transition-shift-in-{0,1}", shifts_ok, wit);
  return out;
}

}  // namespace scube
