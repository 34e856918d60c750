#include "peq/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace peq {
namespace groupoid {

using fintop::FiberProductResult;
using fintop::fiber_product;
using fintop::product;
using fintop::subspace;

namespace {

// index lookup for a fiber-product pair list
std::map<std::pair<int, int>, int> pair_index(const FiberProductResult& fp) {
  std::map<std::pair<int, int>, int> m;
  for (int k = 0; k < static_cast<int>(fp.pairs.size()); ++k) m[fp.pairs[k]] = k;
  return m;
}

}  // namespace

FinGroupoid FinGroupoid::verify(FinSpace g0, FinSpace g1, CMap r, CMap s,
                                std::vector<std::vector<int>> mult,
                                std::vector<int> unit, std::vector<int> inv) {
  FinGroupoid g;
  g.g0_ = std::move(g0);
  g.g1_ = std::move(g1);
  g.r_ = std::move(r);
  g.s_ = std::move(s);
  g.mult_ = std::move(mult);
  g.unit_ = std::move(unit);
  g.inv_ = std::move(inv);

  const int n1 = g.g1_.size();
  const int n0 = g.g0_.size();
  auto arrow = [&](int a) { return g.g1_.point(a); };

  if (g.r_.dom() != g.g1_ || g.s_.dom() != g.g1_ || g.r_.cod() != g.g0_ ||
      g.s_.cod() != g.g0_)
    throw AxiomError("BadAssignment", "range/source domains");
  if (static_cast<int>(g.mult_.size()) != n1 ||
      static_cast<int>(g.unit_.size()) != n0 ||
      static_cast<int>(g.inv_.size()) != n1)
    throw AxiomError("BadAssignment", "table sizes");

  // mult defined exactly on composable pairs; Gr1
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      int ab = g.mult_[a][b];
      if (g.composable(a, b)) {
        if (ab < 0 || ab >= n1)
          throw AxiomError("BadAssignment",
                           "missing product " + arrow(a) + "*" + arrow(b));
        if (g.s_(ab) != g.s_(b) || g.r_(ab) != g.r_(a))
          throw AxiomError("RangeSourceDefect", arrow(a) + "*" + arrow(b));
      } else if (ab != -1) {
        throw AxiomError("BadAssignment",
                         "non-composable " + arrow(a) + "*" + arrow(b));
      }
    }

  // Gr2 associativity
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      if (!g.composable(a, b)) continue;
      for (int c = 0; c < n1; ++c) {
        if (!g.composable(b, c)) continue;
        if (g.mult_[g.mult_[a][b]][c] != g.mult_[a][g.mult_[b][c]])
          throw AxiomError("NotAssociative",
                           arrow(a) + "," + arrow(b) + "," + arrow(c));
      }
    }

  // unit and inverse laws + continuity
  CMap unit_map(g.g0_, g.g1_, g.unit_);
  CMap inv_map(g.g1_, g.g1_, g.inv_);
  for (int x = 0; x < n0; ++x) {
    int u = g.unit_[x];
    if (g.r_(u) != x || g.s_(u) != x)
      throw AxiomError("UnitInverseDefect", "unit over " + g.g0_.point(x));
  }
  for (int a = 0; a < n1; ++a) {
    if (g.mult_[g.unit_[g.r_(a)]][a] != a || g.mult_[a][g.unit_[g.s_(a)]] != a)
      throw AxiomError("UnitInverseDefect", "unit law at " + arrow(a));
    int ia = g.inv_[a];
    if (g.r_(ia) != g.s_(a) || g.s_(ia) != g.r_(a) ||
        g.mult_[a][ia] != g.unit_[g.r_(a)] || g.mult_[ia][a] != g.unit_[g.s_(a)])
      throw AxiomError("UnitInverseDefect", "inverse law at " + arrow(a));
  }

  // Gr4 open surjections
  if (!g.r_.is_surjective() || !g.s_.is_surjective() || !g.r_.is_open() ||
      !g.s_.is_open())
    throw AxiomError("RangeSourceNotOpen", "r or s");

  // Gr3: shear maps are homeomorphisms of fiber-product subspaces
  FiberProductResult comp = fiber_product(g.s_, g.r_);
  FiberProductResult ss = fiber_product(g.s_, g.s_);
  FiberProductResult rr = fiber_product(g.r_, g.r_);
  auto ss_index = pair_index(ss);
  auto rr_index = pair_index(rr);
  {
    std::vector<int> shear1, shear2;
    for (auto [a, b] : comp.pairs) {
      shear1.push_back(ss_index.at({g.mult_[a][b], b}));
      shear2.push_back(rr_index.at({a, g.mult_[a][b]}));
    }
    CMap m1(comp.space, ss.space, shear1);
    CMap m2(comp.space, rr.space, shear2);
    if (!m1.is_homeomorphism())
      throw AxiomError("ShearNotHomeomorphism", "(g,h) -> (gh,h)");
    if (!m2.is_homeomorphism())
      throw AxiomError("ShearNotHomeomorphism", "(g,h) -> (g,gh)");
  }

  // multiplication is continuous and open on the composable-pair space
  {
    std::vector<int> mv;
    for (auto [a, b] : comp.pairs) mv.push_back(g.mult_[a][b]);
    CMap m(comp.space, g.g1_, mv);
    if (!m.is_open()) throw AxiomError("MultiplicationNotOpen", "m");
  }

  return g;
}

bool FinGroupoid::is_invariant_open(const Bitset& u) const {
  if (!g0_.is_open(u)) return false;
  return r_.preimage(u) == s_.preimage(u);
}

void FinGroupoid::check_invariant_open(const Bitset& u) const {
  if (!g0_.is_open(u)) throw AxiomError("NotOpen", "subset of objects");
  if (r_.preimage(u) != s_.preimage(u)) {
    for (int a = 0; a < g1_.size(); ++a)
      if (u.test(r_(a)) != u.test(s_(a)))
        throw AxiomError("NotInvariant", g1_.point(a));
  }
}

std::vector<Bitset> FinGroupoid::invariant_opens() const {
  const int n = g0_.size();
  if (n > 20) throw AxiomError("TooLargeToEnumerate", "invariant opens");
  std::vector<Bitset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Bitset u(n);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) u.set(i);
    if (is_invariant_open(u)) out.push_back(u);
  }
  return out;
}

GroupoidPredicates FinGroupoid::predicates() const {
  GroupoidPredicates p;
  p.etale = r_.is_etale() && s_.is_etale();
  FinSpace sq = product(g0_, g0_);
  const int n0 = g0_.size();
  std::vector<int> rs, sr;
  for (int a = 0; a < g1_.size(); ++a) {
    rs.push_back(r_(a) * n0 + s_(a));
    sr.push_back(s_(a) * n0 + r_(a));
  }
  CMap rs_map(g1_, sq, rs);
  CMap sr_map(g1_, sq, sr);
  p.basic = rs_map.is_homeo_onto_image();
  p.proper = sr_map.is_closed();
  p.free = sr_map.is_injective();
  return p;
}

// --- constructions --------------------------------------------------------

FinGroupoid space_groupoid(const FinSpace& z) {
  const int n = z.size();
  std::vector<std::vector<int>> mult(n, std::vector<int>(n, -1));
  std::vector<int> unit(n), inv(n);
  for (int i = 0; i < n; ++i) {
    mult[i][i] = i;
    unit[i] = i;
    inv[i] = i;
  }
  return FinGroupoid::verify(z, z, CMap::identity(z), CMap::identity(z), mult,
                             unit, inv);
}

FinGroupoid cyclic_group(int n) {
  FinSpace g0 = FinSpace::discrete({"*"});
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  FinSpace g1 = FinSpace::discrete(names);
  std::vector<std::vector<int>> mult(n, std::vector<int>(n));
  std::vector<int> inv(n);
  for (int i = 0; i < n; ++i) {
    inv[i] = (n - i) % n;
    for (int j = 0; j < n; ++j) mult[i][j] = (i + j) % n;
  }
  return FinGroupoid::verify(g0, g1, CMap::constant(g1, g0, 0),
                             CMap::constant(g1, g0, 0), mult, {0}, inv);
}

FinGroupoid pair_groupoid(const FinSpace& x) {
  const int n = x.size();
  FinSpace g1 = product(x, x);
  std::vector<int> rv, sv;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rv.push_back(i);
      sv.push_back(j);
    }
  std::vector<std::vector<int>> mult(n * n, std::vector<int>(n * n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) mult[i * n + j][j * n + k] = i * n + k;
  std::vector<int> unit(n), inv(n * n);
  for (int i = 0; i < n; ++i) unit[i] = i * n + i;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i * n + j] = j * n + i;
  return FinGroupoid::verify(x, g1, CMap(g1, x, rv), CMap(g1, x, sv), mult, unit,
                             inv);
}

FinGroupoid disjoint_union(const FinGroupoid& a, const FinGroupoid& b) {
  auto u0 = fintop::disjoint_union({a.g0(), b.g0()});
  auto u1 = fintop::disjoint_union({a.g1(), b.g1()});
  const int n1a = a.g1().size(), n1 = u1.space.size();
  std::vector<int> rv(n1), sv(n1), inv(n1);
  std::vector<int> unit(u0.space.size());
  std::vector<std::vector<int>> mult(n1, std::vector<int>(n1, -1));
  for (int g = 0; g < a.g1().size(); ++g) {
    rv[g] = a.r()(g);
    sv[g] = a.s()(g);
    inv[g] = a.inv(g);
    for (int h = 0; h < a.g1().size(); ++h)
      if (a.mult(g, h) >= 0) mult[g][h] = a.mult(g, h);
  }
  for (int g = 0; g < b.g1().size(); ++g) {
    rv[n1a + g] = a.g0().size() + b.r()(g);
    sv[n1a + g] = a.g0().size() + b.s()(g);
    inv[n1a + g] = n1a + b.inv(g);
    for (int h = 0; h < b.g1().size(); ++h)
      if (b.mult(g, h) >= 0) mult[n1a + g][n1a + h] = n1a + b.mult(g, h);
  }
  for (int x = 0; x < a.g0().size(); ++x) unit[x] = a.unit(x);
  for (int x = 0; x < b.g0().size(); ++x) unit[a.g0().size() + x] = n1a + b.unit(x);
  return FinGroupoid::verify(u0.space, u1.space, CMap(u1.space, u0.space, rv),
                             CMap(u1.space, u0.space, sv), mult, unit, inv);
}

FinGroupoid restrict(const FinGroupoid& g, const Bitset& u) {
  g.check_invariant_open(u);
  Bitset arrows = g.r().preimage(u);
  FinSpace h0 = subspace(g.g0(), u);
  FinSpace h1 = subspace(g.g1(), arrows);
  auto obj = u.to_vector();
  auto arr = arrows.to_vector();
  std::vector<int> obj_local(g.g0().size(), -1), arr_local(g.g1().size(), -1);
  for (int i = 0; i < static_cast<int>(obj.size()); ++i) obj_local[obj[i]] = i;
  for (int i = 0; i < static_cast<int>(arr.size()); ++i) arr_local[arr[i]] = i;
  const int m = static_cast<int>(arr.size());
  std::vector<int> rv(m), sv(m), inv(m);
  std::vector<std::vector<int>> mult(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i) {
    rv[i] = obj_local[g.r()(arr[i])];
    sv[i] = obj_local[g.s()(arr[i])];
    inv[i] = arr_local[g.inv(arr[i])];
    for (int j = 0; j < m; ++j)
      if (g.composable(arr[i], arr[j])) mult[i][j] = arr_local[g.mult(arr[i], arr[j])];
  }
  std::vector<int> unit(obj.size());
  for (int i = 0; i < static_cast<int>(obj.size()); ++i)
    unit[i] = arr_local[g.unit(obj[i])];
  return FinGroupoid::verify(h0, h1, CMap(h1, h0, rv), CMap(h1, h0, sv), mult,
                             unit, inv);
}

OrbitSpaceResult orbit_space(const FinGroupoid& g) {
  const int n = g.g0().size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int a = 0; a < g.g1().size(); ++a) {
    int x = find(g.r()(a)), y = find(g.s()(a));
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  }
  std::vector<int> cls(n, -1);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) {
    int root = find(i);
    if (cls[root] < 0) {
      cls[root] = static_cast<int>(names.size());
      names.push_back("[" + g.g0().point(root) + "]");
    }
    cls[i] = cls[root];
  }
  auto q = fintop::quotient(g.g0(), cls, names);
  if (!q.projection.is_open() || !q.projection.is_surjective())
    throw AxiomError("OrbitProjectionNotOpen", "orbit space");
  return {q.space, q.projection};
}

FinGroupoid covering_groupoid(const CMap& f) {
  if (!f.is_open() || !f.is_surjective())
    throw AxiomError("NotOpenSurjection", "cover map");
  auto fp = fiber_product(f, f);
  auto idx = pair_index(fp);
  const int m = static_cast<int>(fp.pairs.size());
  std::vector<int> rv(m), sv(m), inv(m);
  std::vector<std::vector<int>> mult(m, std::vector<int>(m, -1));
  for (int k = 0; k < m; ++k) {
    auto [x1, x2] = fp.pairs[k];
    rv[k] = x1;
    sv[k] = x2;
    inv[k] = idx.at({x2, x1});
    for (int l = 0; l < m; ++l) {
      auto [y1, y2] = fp.pairs[l];
      if (y1 == x2) mult[k][l] = idx.at({x1, y2});
    }
  }
  std::vector<int> unit(f.dom().size());
  for (int x = 0; x < f.dom().size(); ++x) unit[x] = idx.at({x, x});
  auto g = FinGroupoid::verify(f.dom(), fp.space, CMap(fp.space, f.dom(), rv),
                               CMap(fp.space, f.dom(), sv), mult, unit, inv);
  if (!g.predicates().basic)
    throw AxiomError("CoveringNotBasic", "covering groupoid");
  return g;
}

CechResult cech_groupoid(const FinSpace& z, const std::vector<Bitset>& cover) {
  Bitset covered(z.size());
  for (const auto& u : cover) {
    if (!z.is_open(u)) throw AxiomError("NotOpen", "cover member");
    covered |= u;
  }
  for (int i = 0; i < z.size(); ++i)
    if (!covered.test(i)) throw AxiomError("NotACover", z.point(i));
  std::vector<FinSpace> parts;
  std::vector<std::vector<int>> part_points;
  for (const auto& u : cover) {
    parts.push_back(subspace(z, u));
    part_points.push_back(u.to_vector());
  }
  auto du = fintop::disjoint_union(parts);
  std::vector<int> fv(du.space.size());
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (int i = 0; i < parts[k].size(); ++i)
      fv[du.offset[k] + i] = part_points[k][i];
  CMap f(du.space, z, fv);
  CechResult res;
  res.groupoid = covering_groupoid(f);
  res.cover_map = f;
  res.arrow_space_hausdorff = res.groupoid.g1().hausdorff();
  return res;
}

// --- isomorphism search ----------------------------------------------------

std::optional<GroupoidIso> find_isomorphism(
    const FinGroupoid& a, const FinGroupoid& b,
    const std::function<bool(int, int)>& arrow_filter) {
  if (a.g0().size() != b.g0().size() || a.g1().size() != b.g1().size())
    return std::nullopt;
  const int n0 = a.g0().size(), n1 = a.g1().size();

  // candidate arrow images by local invariants
  std::vector<std::vector<int>> cand(n1);
  for (int g = 0; g < n1; ++g)
    for (int h = 0; h < n1; ++h) {
      if (a.is_unit(g) != b.is_unit(h)) continue;
      if (a.g1().min_nbhd(g).count() != b.g1().min_nbhd(h).count()) continue;
      if ((a.inv(g) == g) != (b.inv(h) == h)) continue;
      if (arrow_filter && !arrow_filter(g, h)) continue;
      cand[g].push_back(h);
    }

  std::vector<int> arrow(n1, -1), obj(n0, -1);
  std::vector<char> arrow_used(n1, 0), obj_used(n0, 0);

  std::function<bool(int)> rec = [&](int g) -> bool {
    if (g == n1) {
      // verify topology on both levels and the full multiplication table
      for (int x = 0; x < n1; ++x) {
        Bitset img(n1);
        a.g1().min_nbhd(x).for_each([&](int y) { img.set(arrow[y]); });
        if (img != b.g1().min_nbhd(arrow[x])) return false;
      }
      for (int x = 0; x < n0; ++x) {
        Bitset img(n0);
        a.g0().min_nbhd(x).for_each([&](int y) { img.set(obj[y]); });
        if (img != b.g0().min_nbhd(obj[x])) return false;
      }
      return true;
    }
    for (int h : cand[g]) {
      if (arrow_used[h]) continue;
      // object compatibility through r and s
      int ra = a.r()(g), sa = a.s()(g);
      int rb = b.r()(h), sb = b.s()(h);
      if ((obj[ra] != -1 && obj[ra] != rb) || (obj[ra] == -1 && obj_used[rb]))
        continue;
      if ((obj[sa] != -1 && obj[sa] != sb) || (obj[sa] == -1 && obj_used[sb]))
        continue;
      if (obj[ra] == -1 && obj[sa] == -1 && ra == sa && rb != sb) continue;
      // multiplication compatibility with already-assigned arrows
      bool ok = true;
      for (int g2 = 0; g2 <= g && ok; ++g2) {
        int h2 = (g2 == g) ? h : arrow[g2];
        if (a.composable(g, g2) != b.composable(h, h2) ||
            a.composable(g2, g) != b.composable(h2, h)) {
          ok = false;
          break;
        }
        if (a.composable(g, g2)) {
          int p = a.mult(g, g2);
          int ph = (p == g) ? h : arrow[p];
          if (ph != -1 && ph != b.mult(h, h2)) ok = false;
        }
        if (a.composable(g2, g)) {
          int p = a.mult(g2, g);
          int ph = (p == g) ? h : arrow[p];
          if (ph != -1 && ph != b.mult(h2, h)) ok = false;
        }
      }
      if (!ok) continue;
      if (arrow[a.inv(g)] != -1 && arrow[a.inv(g)] != b.inv(h)) continue;

      bool set_r = false, set_s = false;
      if (obj[ra] == -1) {
        obj[ra] = rb;
        obj_used[rb] = 1;
        set_r = true;
      }
      if (obj[sa] == -1 && !obj_used[sb]) {
        obj[sa] = sb;
        obj_used[sb] = 1;
        set_s = true;
      }
      if (obj[ra] == rb && obj[sa] == sb) {
        arrow[g] = h;
        arrow_used[h] = 1;
        if (rec(g + 1)) return true;
        arrow[g] = -1;
        arrow_used[h] = 0;
      }
      if (set_s) {
        obj_used[obj[sa]] = 0;
        obj[sa] = -1;
      }
      if (set_r) {
        obj_used[obj[ra]] = 0;
        obj[ra] = -1;
      }
    }
    return false;
  };

  if (!rec(0)) return std::nullopt;
  // objects not hit by any arrow anchor: match the leftover spaces
  // (cannot happen: unit arrows anchor every object)
  GroupoidIso iso;
  iso.obj = obj;
  iso.arrow = arrow;
  return iso;
}

bool isomorphic(const FinGroupoid& a, const FinGroupoid& b) {
  return find_isomorphism(a, b).has_value();
}

}  // namespace groupoid
}  // namespace peq
