#include "scube/pocset.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace scube {

bool Pocset::transverse(int w1, int w2) const {
  if (w1 == w2) return false;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      if (less(hs(w1, s1), hs(w2, s2)) || less(hs(w2, s2), hs(w1, s1))) return false;
  return true;
}

bool Pocset::consistent(Vertex v) const {
  // A in alpha and A < B requires B in alpha, i.e. above[A] may not meet the
  // rejected half-spaces.
  std::uint64_t chosen_mask = 0;
  for (int w = 0; w < n; ++w) chosen_mask |= 1ull << chosen(v, w);
  std::uint64_t rejected = ~chosen_mask;
  for (int w = 0; w < n; ++w)
    if (above[chosen(v, w)] & rejected) return false;
  return true;
}

Pocset Pocset::restrict_to(const std::vector<int>& keep) const {
  Pocset q;
  q.n = (int)keep.size();
  q.above.assign(2 * q.n, 0);
  for (int i = 0; i < q.n; ++i)
    for (int si = 0; si < 2; ++si)
      for (int j = 0; j < q.n; ++j)
        for (int sj = 0; sj < 2; ++sj)
          if (less(hs(keep[i], si), hs(keep[j], sj)))
            q.above[hs(i, si)] |= 1ull << hs(j, sj);
  return q;
}

int CubeComplex::index_of(Vertex v) const {
  auto it = std::lower_bound(verts.begin(), verts.end(), v);
  if (it == verts.end() || *it != v) return -1;
  return (int)(it - verts.begin());
}

std::vector<std::pair<int, int>> CubeComplex::edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < (int)verts.size(); ++i)
    for (int w = 0; w < p.n; ++w) {
      Vertex u = verts[i] ^ (Vertex(1) << w);
      int j = index_of(u);
      if (j > i) out.push_back({i, j});
    }
  return out;
}

std::vector<Vertex> CubeComplex::halfspace_vertices(HsId h) const {
  std::vector<Vertex> out;
  int w = Pocset::wall_of(h), s = Pocset::side_of(h);
  for (Vertex v : verts)
    if ((int)((v >> w) & 1) == s) out.push_back(v);
  return out;
}

Report validate_pocset(const Pocset& p) {
  Report r;
  bool shape = p.n >= 0 && p.n <= kMaxWalls && (int)p.above.size() == 2 * p.n;
  r.check("shape", shape, "above table has wrong size");
  if (!shape) return r;
  int H = 2 * p.n;
  for (HsId a = 0; a < H; ++a) {
    if (p.less(a, a)) r.check("irreflexive", false, "halfspace " + std::to_string(a));
    if (p.less(a, Pocset::star(a)) || p.less(Pocset::star(a), a))
      r.check("incomparable-with-star", false, "halfspace " + std::to_string(a));
  }
  for (HsId a = 0; a < H; ++a)
    for (HsId b = 0; b < H; ++b) {
      if (!p.less(a, b)) continue;
      if (!p.less(Pocset::star(b), Pocset::star(a)))
        r.check("order-reversal", false,
                "(" + std::to_string(a) + "," + std::to_string(b) + ")");
      for (HsId c = 0; c < H; ++c)
        if (p.less(b, c) && !p.less(a, c))
          r.check("transitive", false,
                  "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");
    }
  if (r.ok()) {
    r.check("pocset-axioms", true);
    r.measure("width", pocset_width(p));
  }
  return r;
}

namespace {
void width_search(const Pocset& p, int next, std::vector<int>& cur, int& best) {
  if ((int)cur.size() > best) best = (int)cur.size();
  // bound: even taking every remaining wall cannot beat best
  if ((int)cur.size() + (p.n - next) <= best) return;
  for (int w = next; w < p.n; ++w) {
    bool ok = true;
    for (int u : cur)
      if (!p.transverse(u, w)) { ok = false; break; }
    if (!ok) continue;
    cur.push_back(w);
    width_search(p, w + 1, cur, best);
    cur.pop_back();
  }
}
}  // namespace

int pocset_width(const Pocset& p) {
  if (p.n == 0) return 0;
  int best = 0;
  std::vector<int> cur;
  width_search(p, 0, cur, best);
  return best;
}

CubeComplex dual_complex(const Pocset& p) {
  Report v = validate_pocset(p);
  if (!v.ok()) throw SpecError("InvalidPocset", v.first_failure());
  if (p.n > kMaxEnumWalls)
    throw SpecError("InvalidPocset", "enumeration capped at " + std::to_string(kMaxEnumWalls) + " walls");
  CubeComplex cc;
  cc.p = p;
  for (Vertex v2 = 0; v2 < (Vertex(1) << p.n); ++v2)
    if (p.consistent(v2)) cc.verts.push_back(v2);
  cc.dimension = pocset_width(p);
  return cc;
}

Vertex median(const CubeComplex& cc, Vertex a, Vertex b, Vertex c) {
  if (!cc.has(a) || !cc.has(b) || !cc.has(c))
    throw SpecError("VertexNotInComplex", "median argument");
  return (a & b) | (a & c) | (b & c);
}

int distance_l1(const CubeComplex& cc, Vertex a, Vertex b) {
  if (!cc.has(a) || !cc.has(b)) throw SpecError("VertexNotInComplex", "distance argument");
  return std::popcount(a ^ b);
}

namespace {
// longest chain (in <) among the given b-oriented half-spaces; chain counted
// by number of elements.
int longest_chain(const Pocset& p, const std::vector<HsId>& hs) {
  std::uint64_t in_set = 0;
  for (HsId h : hs) in_set |= 1ull << h;
  std::vector<int> memo(2 * p.n, -1);
  // depth(h) = 1 + max depth over g in set with h < g
  auto depth = [&](auto&& self, HsId h) -> int {
    if (memo[h] >= 0) return memo[h];
    int best = 1;
    std::uint64_t ups = p.above[h] & in_set;
    while (ups) {
      int g = std::countr_zero(ups);
      ups &= ups - 1;
      best = std::max(best, 1 + self(self, g));
    }
    return memo[h] = best;
  };
  int best = 0;
  for (HsId h : hs) best = std::max(best, depth(depth, h));
  return best;
}
}  // namespace

int distance_linf(const CubeComplex& cc, Vertex a, Vertex b) {
  if (!cc.has(a) || !cc.has(b)) throw SpecError("VertexNotInComplex", "distance argument");
  std::vector<HsId> sep;
  Vertex diff = a ^ b;
  for (int w = 0; w < cc.p.n; ++w)
    if ((diff >> w) & 1) sep.push_back(cc.p.chosen(b, w));
  return longest_chain(cc.p, sep);
}

Vertex VertexMap::apply(Vertex v) const {
  Vertex out = 0;
  for (int i = 0; i < (int)keep.size(); ++i)
    if ((v >> keep[i]) & 1) out |= Vertex(1) << i;
  return out;
}

std::pair<CubeComplex, VertexMap> delete_hyperplanes(const CubeComplex& cc,
                                                     const std::vector<int>& walls) {
  std::uint64_t del = 0;
  for (int w : walls) {
    if (w < 0 || w >= cc.p.n) throw SpecError("UnknownHyperplane", std::to_string(w));
    del |= 1ull << w;
  }
  VertexMap vm;
  for (int w = 0; w < cc.p.n; ++w)
    if (!((del >> w) & 1)) vm.keep.push_back(w);
  return {dual_complex(cc.p.restrict_to(vm.keep)), vm};
}

namespace {
bool halfspaces_disjoint(const CubeComplex& cc, HsId h, HsId g) {
  int wh = Pocset::wall_of(h), sh = Pocset::side_of(h);
  int wg = Pocset::wall_of(g), sg = Pocset::side_of(g);
  for (Vertex v : cc.verts)
    if ((int)((v >> wh) & 1) == sh && (int)((v >> wg) & 1) == sg) return false;
  return true;
}
}  // namespace

IsomorphismResult check_halfspace_isomorphism(const CubeComplex& a, const CubeComplex& b,
                                              const std::vector<int>& bij) {
  IsomorphismResult res;
  int H = 2 * a.p.n;
  if ((int)bij.size() != H || a.p.n != b.p.n)
    throw SpecError("NotBijective", "bijection must be total on the half-spaces");
  std::vector<int> seen(H, 0);
  for (int h = 0; h < H; ++h) {
    if (bij[h] < 0 || bij[h] >= H) throw SpecError("NotBijective", "out of range");
    seen[bij[h]]++;
  }
  for (int h = 0; h < H; ++h)
    if (seen[h] != 1) throw SpecError("NotBijective", "not a bijection");

  for (int h = 0; h < H; ++h)
    if (bij[Pocset::star(h)] != Pocset::star(bij[h])) {
      res.violation = "complements(" + std::to_string(h) + ")";
      return res;
    }
  for (int h = 0; h < H; ++h)
    for (int g = h + 1; g < H; ++g)
      if (halfspaces_disjoint(a, h, g) != halfspaces_disjoint(b, bij[h], bij[g])) {
        res.violation = "disjointness(" + std::to_string(h) + "," + std::to_string(g) + ")";
        return res;
      }

  res.wall_map.assign(a.p.n, 0);
  res.side_map.assign(a.p.n, 0);
  for (int w = 0; w < a.p.n; ++w) {
    res.wall_map[w] = Pocset::wall_of(bij[Pocset::hs(w, 0)]);
    res.side_map[w] = Pocset::side_of(bij[Pocset::hs(w, 0)]);
  }
  auto image = [&](Vertex v) {
    Vertex out = 0;
    for (int w = 0; w < a.p.n; ++w) {
      HsId img = bij[Pocset::hs(w, (v >> w) & 1)];
      if (Pocset::side_of(img)) out |= Vertex(1) << Pocset::wall_of(img);
    }
    return out;
  };
  std::vector<Vertex> imgs;
  for (Vertex v : a.verts) {
    Vertex u = image(v);
    if (!b.has(u)) {
      res.violation = "vertex-image-missing";
      return res;
    }
    imgs.push_back(u);
  }
  std::vector<Vertex> sorted = imgs;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != b.verts) {
    res.violation = "vertex-map-not-bijective";
    return res;
  }
  // edges map to edges: images differ in exactly one wall iff sources do
  for (size_t i = 0; i < a.verts.size(); ++i)
    for (size_t j = i + 1; j < a.verts.size(); ++j) {
      bool ea = std::popcount(a.verts[i] ^ a.verts[j]) == 1;
      bool eb = std::popcount(imgs[i] ^ imgs[j]) == 1;
      if (ea != eb) {
        res.violation = "edge-mismatch";
        return res;
      }
    }
  res.ok = true;
  res.vertex_images = imgs;
  return res;
}

Pocset random_pocset(std::uint64_t seed, int n_walls) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0xbf58476d1ce4e5b9ull);
  Pocset p;
  p.n = n_walls;
  p.above.assign(2 * n_walls, 0);
  // sprinkle relations a < b and close under the axioms; reject contradictions
  std::uniform_int_distribution<int> wd(0, n_walls - 1), sd(0, 1);
  int attempts = n_walls * 2;
  for (int t = 0; t < attempts; ++t) {
    int wa = wd(rng), wb = wd(rng);
    if (wa == wb) continue;
    HsId a = Pocset::hs(wa, sd(rng)), b = Pocset::hs(wb, sd(rng));
    Pocset q = p;
    q.above[a] |= 1ull << b;
    q.above[Pocset::star(b)] |= 1ull << Pocset::star(a);
    // transitive closure
    bool changed = true;
    while (changed) {
      changed = false;
      for (HsId x = 0; x < 2 * q.n; ++x) {
        std::uint64_t ups = q.above[x], add = 0;
        std::uint64_t m = ups;
        while (m) {
          int y = std::countr_zero(m);
          m &= m - 1;
          add |= q.above[y];
        }
        if ((ups | add) != ups) {
          q.above[x] |= add;
          changed = true;
        }
      }
    }
    if (validate_pocset(q).ok()) p = q;
  }
  return p;
}

}  // namespace scube
