#include "peq/bibundle.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>

namespace peq {
namespace bibundle {

using fintop::FiberProductResult;
using fintop::fiber_product;
using fintop::subspace;

namespace {

std::map<std::pair<int, int>, int> pair_index(const FiberProductResult& fp) {
  std::map<std::pair<int, int>, int> m;
  for (int k = 0; k < static_cast<int>(fp.pairs.size()); ++k) m[fp.pairs[k]] = k;
  return m;
}

long max_enum() {
  if (const char* e = std::getenv("PEQLIB_MAX_ENUM")) return std::atol(e);
  return 4'000'000L;
}

}  // namespace

bool PartialEquivalence::global() const {
  return r_.is_surjective() && s_.is_surjective();
}

int PartialEquivalence::divide_left(int x1, int x2) const {
  int found = -1;
  for (int g = 0; g < left_.g1().size(); ++g)
    if (left_act_[g][x2] == x1) {
      if (found >= 0) throw AxiomError("P3NotBijective", "divide_left not unique");
      found = g;
    }
  if (found < 0) throw AxiomError("P3NotBijective", "divide_left missing");
  return found;
}

int PartialEquivalence::divide_right(int x1, int x2) const {
  int found = -1;
  for (int h = 0; h < right_.g1().size(); ++h)
    if (right_act_[x1][h] == x2) {
      if (found >= 0) throw AxiomError("P3NotBijective", "divide_right not unique");
      found = h;
    }
  if (found < 0) throw AxiomError("P3NotBijective", "divide_right missing");
  return found;
}

PartialEquivalence PartialEquivalence::verify(
    FinGroupoid left, FinGroupoid right, FinSpace x, CMap r, CMap s,
    std::vector<std::vector<int>> left_act, std::vector<std::vector<int>> right_act) {
  PartialEquivalence p;
  p.left_ = std::move(left);
  p.right_ = std::move(right);
  p.x_ = std::move(x);
  p.r_ = std::move(r);
  p.s_ = std::move(s);
  p.left_act_ = std::move(left_act);
  p.right_act_ = std::move(right_act);

  const int nx = p.x_.size();
  const int ng = p.left_.g1().size();
  const int nh = p.right_.g1().size();
  auto pt = [&](int i) { return p.x_.point(i); };

  if (p.r_.dom() != p.x_ || p.r_.cod() != p.left_.g0() || p.s_.dom() != p.x_ ||
      p.s_.cod() != p.right_.g0())
    throw AxiomError("BadAssignment", "anchor domains");
  if (static_cast<int>(p.left_act_.size()) != ng ||
      static_cast<int>(p.right_act_.size()) != nx)
    throw AxiomError("BadAssignment", "action table sizes");

  // left action: defined exactly on composable pairs, P1 anchors
  for (int g = 0; g < ng; ++g)
    for (int xi = 0; xi < nx; ++xi) {
      int y = p.left_act_[g][xi];
      bool comp = p.left_.s()(g) == p.r_(xi);
      if (comp) {
        if (y < 0 || y >= nx)
          throw AxiomError("ActionDefect", "missing left product at " + pt(xi));
        if (p.r_(y) != p.left_.r()(g) || p.s_(y) != p.s_(xi))
          throw AxiomError("ActionDefect", "left anchors at " + pt(xi));
      } else if (y != -1) {
        throw AxiomError("ActionDefect", "non-composable left product at " + pt(xi));
      }
    }
  for (int xi = 0; xi < nx; ++xi)
    for (int h = 0; h < nh; ++h) {
      int y = p.right_act_[xi][h];
      bool comp = p.s_(xi) == p.right_.r()(h);
      if (comp) {
        if (y < 0 || y >= nx)
          throw AxiomError("ActionDefect", "missing right product at " + pt(xi));
        if (p.s_(y) != p.right_.s()(h) || p.r_(y) != p.r_(xi))
          throw AxiomError("ActionDefect", "right anchors at " + pt(xi));
      } else if (y != -1) {
        throw AxiomError("ActionDefect", "non-composable right product at " + pt(xi));
      }
    }

  // unitality and P2 associativity / commutation
  for (int xi = 0; xi < nx; ++xi) {
    if (p.left_act_[p.left_.unit(p.r_(xi))][xi] != xi)
      throw AxiomError("ActionDefect", "left unit at " + pt(xi));
    if (p.right_act_[xi][p.right_.unit(p.s_(xi))] != xi)
      throw AxiomError("ActionDefect", "right unit at " + pt(xi));
  }
  for (int g1 = 0; g1 < ng; ++g1)
    for (int g2 = 0; g2 < ng; ++g2) {
      if (!p.left_.composable(g1, g2)) continue;
      for (int xi = 0; xi < nx; ++xi) {
        if (p.left_.s()(g2) != p.r_(xi)) continue;
        if (p.left_act_[g1][p.left_act_[g2][xi]] !=
            p.left_act_[p.left_.mult(g1, g2)][xi])
          throw AxiomError("ActionDefect", "left associativity at " + pt(xi));
      }
    }
  for (int xi = 0; xi < nx; ++xi)
    for (int h1 = 0; h1 < nh; ++h1) {
      if (p.s_(xi) != p.right_.r()(h1)) continue;
      for (int h2 = 0; h2 < nh; ++h2) {
        if (!p.right_.composable(h1, h2)) continue;
        if (p.right_act_[p.right_act_[xi][h1]][h2] !=
            p.right_act_[xi][p.right_.mult(h1, h2)])
          throw AxiomError("ActionDefect", "right associativity at " + pt(xi));
      }
    }
  for (int g = 0; g < ng; ++g)
    for (int xi = 0; xi < nx; ++xi) {
      if (p.left_.s()(g) != p.r_(xi)) continue;
      for (int h = 0; h < nh; ++h) {
        if (p.s_(xi) != p.right_.r()(h)) continue;
        if (p.right_act_[p.left_act_[g][xi]][h] !=
            p.left_act_[g][p.right_act_[xi][h]])
          throw AxiomError("ActionDefect", "actions do not commute at " + pt(xi));
      }
    }

  // P4 anchors open
  if (!p.r_.is_open() || !p.s_.is_open())
    throw AxiomError("AnchorNotOpen", "r or s");

  // P3: the two shear maps are homeomorphisms
  {
    FiberProductResult gx = fiber_product(p.left_.s(), p.r_);
    FiberProductResult ss = fiber_product(p.s_, p.s_);
    auto ss_idx = pair_index(ss);
    std::vector<int> v;
    for (auto [g, xi] : gx.pairs) v.push_back(ss_idx.at({xi, p.left_act_[g][xi]}));
    CMap m(gx.space, ss.space, v);
    if (!m.is_homeomorphism())
      throw AxiomError("P3NotBijective", "(g,x)->(x,gx)");
  }
  {
    FiberProductResult xh = fiber_product(p.s_, p.right_.r());
    FiberProductResult rr = fiber_product(p.r_, p.r_);
    auto rr_idx = pair_index(rr);
    std::vector<int> v;
    for (auto [xi, h] : xh.pairs) v.push_back(rr_idx.at({xi, p.right_act_[xi][h]}));
    CMap m(xh.space, rr.space, v);
    if (!m.is_homeomorphism())
      throw AxiomError("P3NotBijective", "(x,h)->(x,xh)");
  }

  // r(X), s(X) are invariant opens (restriction claim of the theory)
  p.left_.check_invariant_open(p.r_.image());
  p.right_.check_invariant_open(p.s_.image());
  return p;
}

PartialEquivalence identity_equivalence(const FinGroupoid& g) {
  const int n = g.g1().size();
  std::vector<std::vector<int>> la(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> ra(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.composable(a, b)) {
        la[a][b] = g.mult(a, b);
        ra[a][b] = g.mult(a, b);
      }
  return PartialEquivalence::verify(g, g, g.g1(), g.r(), g.s(), la, ra);
}

PartialEquivalence restrict_peq(const PartialEquivalence& x, const Bitset& u,
                                const Bitset& v) {
  x.left().check_invariant_open(u);
  x.right().check_invariant_open(v);
  Bitset keep(x.space().size());
  for (int i = 0; i < x.space().size(); ++i)
    if (u.test(x.r()(i)) && v.test(x.s()(i))) keep.set(i);
  auto pts = keep.to_vector();
  std::vector<int> local(x.space().size(), -1);
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) local[pts[i]] = i;
  FinSpace sub = subspace(x.space(), keep);
  std::vector<int> rv, sv;
  for (int p : pts) {
    rv.push_back(x.r()(p));
    sv.push_back(x.s()(p));
  }
  const int ng = x.left().g1().size(), nh = x.right().g1().size();
  std::vector<std::vector<int>> la(ng, std::vector<int>(pts.size(), -1));
  std::vector<std::vector<int>> ra(pts.size(), std::vector<int>(nh, -1));
  for (int g = 0; g < ng; ++g)
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (x.left().s()(g) == x.r()(pts[i])) la[g][i] = local[x.left_act(g, pts[i])];
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int h = 0; h < nh; ++h)
      if (x.s()(pts[i]) == x.right().r()(h)) ra[i][h] = local[x.right_act(pts[i], h)];
  return PartialEquivalence::verify(x.left(), x.right(), sub,
                                    CMap(sub, x.left().g0(), rv),
                                    CMap(sub, x.right().g0(), sv), la, ra);
}

PartialEquivalence unit_restriction(const FinGroupoid& g, const Bitset& u) {
  return restrict_peq(identity_equivalence(g), u, u);
}

ComposeResult compose(const PartialEquivalence& x, const PartialEquivalence& y) {
  if (!(x.right() == y.left()))
    throw AxiomError("GroupoidMismatch", "middle groupoids differ");
  const FinGroupoid& h = x.right();
  FiberProductResult w = fiber_product(x.s(), y.r());
  const int nw = static_cast<int>(w.pairs.size());
  auto w_idx = pair_index(w);

  std::vector<int> parent(nw);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    return parent[a] == a ? a : parent[a] = find(parent[a]);
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (int xi = 0; xi < x.space().size(); ++xi)
    for (int hh = 0; hh < h.g1().size(); ++hh) {
      if (x.s()(xi) != h.r()(hh)) continue;
      for (int yi = 0; yi < y.space().size(); ++yi) {
        if (h.s()(hh) != y.r()(yi)) continue;
        unite(w_idx.at({x.right_act(xi, hh), yi}),
              w_idx.at({xi, y.left_act(hh, yi)}));
      }
    }

  // classes, representatives = least pair index
  std::vector<int> cls_of(nw, -1);
  std::vector<int> rep;
  for (int k = 0; k < nw; ++k) {
    int root = find(k);
    if (cls_of[root] < 0) {
      cls_of[root] = static_cast<int>(rep.size());
      rep.push_back(root);
    }
    cls_of[k] = cls_of[root];
  }
  std::vector<std::string> names;
  for (int r0 : rep)
    names.push_back("[" + x.space().point(w.pairs[r0].first) + "|" +
                    y.space().point(w.pairs[r0].second) + "]");
  auto q = fintop::quotient(w.space, cls_of, names);

  const int nc = static_cast<int>(rep.size());
  std::vector<int> rv(nc), sv(nc);
  for (int c = 0; c < nc; ++c) {
    rv[c] = x.r()(w.pairs[rep[c]].first);
    sv[c] = y.s()(w.pairs[rep[c]].second);
  }
  const int ng = x.left().g1().size(), nk = y.right().g1().size();
  std::vector<std::vector<int>> la(ng, std::vector<int>(nc, -1));
  std::vector<std::vector<int>> ra(nc, std::vector<int>(nk, -1));
  for (int g = 0; g < ng; ++g)
    for (int c = 0; c < nc; ++c) {
      auto [xi, yi] = w.pairs[rep[c]];
      if (x.left().s()(g) == x.r()(xi))
        la[g][c] = cls_of[w_idx.at({x.left_act(g, xi), yi})];
    }
  for (int c = 0; c < nc; ++c) {
    auto [xi, yi] = w.pairs[rep[c]];
    for (int k = 0; k < nk; ++k)
      if (y.s()(yi) == y.right().r()(k))
        ra[c][k] = cls_of[w_idx.at({xi, y.right_act(yi, k)})];
  }

  ComposeResult res;
  res.composite = PartialEquivalence::verify(
      x.left(), y.right(), q.space, CMap(q.space, x.left().g0(), rv),
      CMap(q.space, y.right().g0(), sv), la, ra);
  res.cls.assign(x.space().size(), std::vector<int>(y.space().size(), -1));
  for (int k = 0; k < nw; ++k)
    res.cls[w.pairs[k].first][w.pairs[k].second] = cls_of[k];
  return res;
}

PartialEquivalence dual(const PartialEquivalence& x) {
  const int nx = x.space().size();
  const int ng = x.left().g1().size(), nh = x.right().g1().size();
  std::vector<std::vector<int>> la(nh, std::vector<int>(nx, -1));
  std::vector<std::vector<int>> ra(nx, std::vector<int>(ng, -1));
  for (int h = 0; h < nh; ++h)
    for (int xi = 0; xi < nx; ++xi)
      if (x.right().s()(h) == x.s()(xi)) la[h][xi] = x.right_act(xi, x.right().inv(h));
  for (int xi = 0; xi < nx; ++xi)
    for (int g = 0; g < ng; ++g)
      if (x.r()(xi) == x.left().r()(g)) ra[xi][g] = x.left_act(x.left().inv(g), xi);
  return PartialEquivalence::verify(x.right(), x.left(), x.space(), x.s(), x.r(),
                                    la, ra);
}

namespace {

// verify phi is a bibundle map src -> tgt and classify it
std::optional<BibundleMap> check_bibundle_map(const PartialEquivalence& src,
                                              const PartialEquivalence& tgt,
                                              const std::vector<int>& phi) {
  for (int i = 0; i < src.space().size(); ++i)
    if (tgt.r()(phi[i]) != src.r()(i) || tgt.s()(phi[i]) != src.s()(i))
      return std::nullopt;
  for (int g = 0; g < src.left().g1().size(); ++g)
    for (int i = 0; i < src.space().size(); ++i)
      if (src.left().s()(g) == src.r()(i) &&
          phi[src.left_act(g, i)] != tgt.left_act(g, phi[i]))
        return std::nullopt;
  for (int i = 0; i < src.space().size(); ++i)
    for (int h = 0; h < src.right().g1().size(); ++h)
      if (src.s()(i) == src.right().r()(h) &&
          phi[src.right_act(i, h)] != tgt.right_act(phi[i], h))
        return std::nullopt;
  try {
    CMap m(src.space(), tgt.space(), phi);
    if (!m.is_homeo_onto_image()) return std::nullopt;
    // image must be the restriction of tgt to the anchors of src
    Bitset expected(tgt.space().size());
    Bitset ru = src.range_subset(), su = src.source_subset();
    for (int j = 0; j < tgt.space().size(); ++j)
      if (ru.test(tgt.r()(j)) && su.test(tgt.s()(j))) expected.set(j);
    if (m.image() != expected) return std::nullopt;
    BibundleMap bm;
    bm.assignment = phi;
    bm.isomorphism = m.is_surjective();
    return bm;
  } catch (const AxiomError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<BibundleMap> find_bibundle_maps(const PartialEquivalence& x1,
                                            const PartialEquivalence& x2) {
  if (!(x1.left() == x2.left()) || !(x1.right() == x2.right()))
    throw AxiomError("GroupoidMismatch", "bibundle maps need equal groupoids");
  const int n1 = x1.space().size(), n2 = x2.space().size();
  std::vector<std::vector<int>> cand(n1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      if (x2.r()(j) == x1.r()(i) && x2.s()(j) == x1.s()(i)) cand[i].push_back(j);

  std::vector<BibundleMap> found;
  std::vector<int> phi(n1, -1);
  long budget = max_enum();
  std::function<void(int)> rec = [&](int i) {
    if (--budget < 0) throw AxiomError("EnumerationBudgetExceeded", "bibundle maps");
    if (i == n1) {
      if (auto bm = check_bibundle_map(x1, x2, phi)) found.push_back(*bm);
      return;
    }
    for (int j : cand[i]) {
      phi[i] = j;
      // equivariance pruning against earlier points
      bool ok = true;
      for (int g = 0; g < x1.left().g1().size() && ok; ++g)
        if (x1.left().s()(g) == x1.r()(i)) {
          int gi = x1.left_act(g, i);
          if (phi[gi] != -1 && phi[gi] != x2.left_act(g, j)) ok = false;
        }
      if (ok) rec(i + 1);
      phi[i] = -1;
    }
  };
  rec(0);
  std::sort(found.begin(), found.end(),
            [](const BibundleMap& a, const BibundleMap& b) {
              return a.assignment < b.assignment;
            });
  return found;
}

PairingResult pairing(const PartialEquivalence& x) {
  PairingResult res;
  PartialEquivalence xs = dual(x);
  res.xxstar = compose(x, xs);
  res.xstarx = compose(xs, x);

  Bitset ru = x.range_subset(), su = x.source_subset();
  PartialEquivalence gu = unit_restriction(x.left(), ru);
  PartialEquivalence hv = unit_restriction(x.right(), su);

  // class [x1, x2] with s(x1) = s(x2) -> the unique g with x1 = g x2
  const int nc1 = res.xxstar.composite.space().size();
  std::vector<int> p1(nc1, -1);
  for (int a = 0; a < x.space().size(); ++a)
    for (int b = 0; b < x.space().size(); ++b) {
      int c = res.xxstar.cls[a][b];
      if (c < 0) continue;
      int g = x.divide_left(a, b);
      int local = -1;
      for (int k = 0; k < gu.space().size(); ++k)
        if (gu.space().point(k) == x.left().g1().point(g)) local = k;
      if (p1[c] != -1 && p1[c] != local)
        throw AxiomError("PairingNotWellDefined", res.xxstar.composite.space().point(c));
      p1[c] = local;
    }
  const int nc2 = res.xstarx.composite.space().size();
  std::vector<int> p2(nc2, -1);
  for (int a = 0; a < x.space().size(); ++a)
    for (int b = 0; b < x.space().size(); ++b) {
      int c = res.xstarx.cls[a][b];
      if (c < 0) continue;
      int h = x.divide_right(a, b);
      int local = -1;
      for (int k = 0; k < hv.space().size(); ++k)
        if (hv.space().point(k) == x.right().g1().point(h)) local = k;
      if (p2[c] != -1 && p2[c] != local)
        throw AxiomError("PairingNotWellDefined", res.xstarx.composite.space().point(c));
      p2[c] = local;
    }

  auto bm1 = check_bibundle_map(res.xxstar.composite, gu, p1);
  auto bm2 = check_bibundle_map(res.xstarx.composite, hv, p2);
  if (!bm1 || !bm1->isomorphism || !bm2 || !bm2->isomorphism)
    throw AxiomError("PairingNotIsomorphism", "canonical pairing");
  res.to_left_units = *bm1;
  res.to_right_units = *bm2;

  // triangle identities: g x3 = x1 h for g = x1/x2 and h = x2\x3
  for (int x1i = 0; x1i < x.space().size(); ++x1i)
    for (int x2i = 0; x2i < x.space().size(); ++x2i) {
      if (x.s()(x1i) != x.s()(x2i)) continue;
      for (int x3i = 0; x3i < x.space().size(); ++x3i) {
        if (x.r()(x2i) != x.r()(x3i)) continue;
        int g = x.divide_left(x1i, x2i);
        int h = x.divide_right(x2i, x3i);
        if (x.left_act(g, x3i) != x.right_act(x1i, h))
          throw AxiomError("PairingTriangleDefect", x.space().point(x1i));
      }
    }
  return res;
}

IdempotentTrivialization idempotent_trivialize(const PartialEquivalence& x,
                                               const ComposeResult& xx,
                                               const std::vector<int>& mu) {
  if (x.range_subset() != x.source_subset())
    throw AxiomError("NoSuchStructure", "r(X) != s(X)");
  auto bm = check_bibundle_map(xx.composite, x, mu);
  if (!bm || !bm->isomorphism)
    throw AxiomError("NotIsomorphism", "mu is not a bibundle isomorphism");

  auto mu_of = [&](int a, int b) { return mu[xx.cls[a][b]]; };
  // associativity of mu
  for (int a = 0; a < x.space().size(); ++a)
    for (int b = 0; b < x.space().size(); ++b) {
      if (xx.cls[a][b] < 0) continue;
      for (int c = 0; c < x.space().size(); ++c) {
        if (xx.cls[b][c] < 0) continue;
        if (mu_of(mu_of(a, b), c) != mu_of(a, mu_of(b, c)))
          throw AxiomError("NotAssociative", "mu");
      }
    }

  Bitset u = x.range_subset();
  PartialEquivalence gu = unit_restriction(x.left(), u);
  auto isos = find_bibundle_maps(x, gu);
  std::vector<BibundleMap> good;
  for (const auto& cand : isos) {
    if (!cand.isomorphism) continue;
    // phi(mu(a,b)) = phi(a) phi(b) in G^1_U
    bool ok = true;
    for (int a = 0; a < x.space().size() && ok; ++a)
      for (int b = 0; b < x.space().size() && ok; ++b) {
        if (xx.cls[a][b] < 0) continue;
        int ga = x.left().g1().index(gu.space().point(cand.assignment[a]));
        int gb = x.left().g1().index(gu.space().point(cand.assignment[b]));
        int gm = x.left().g1().index(gu.space().point(cand.assignment[mu_of(a, b)]));
        if (!x.left().composable(ga, gb) || x.left().mult(ga, gb) != gm) ok = false;
      }
    if (ok) good.push_back(cand);
  }
  if (good.size() != 1)
    throw AxiomError("NoSuchStructure",
                     "expected exactly one compatible trivialization, found " +
                         std::to_string(good.size()));
  return {u, good[0]};
}

LocalCentraliserReport local_centralisers(const FinGroupoid& g) {
  LocalCentraliserReport report;
  const int n0 = g.g0().size(), n1 = g.g1().size();
  for (const Bitset& u : g.invariant_opens()) {
    auto pts = u.to_vector();
    std::vector<std::vector<int>> cand(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (int a = 0; a < n1; ++a)
        if (g.r()(a) == pts[i] && g.s()(a) == pts[i]) cand[i].push_back(a);
    std::vector<int> gamma(pts.size(), -1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == pts.size()) {
        // centrality on all arrows inside U
        for (int a = 0; a < n1; ++a) {
          if (!u.test(g.r()(a))) continue;
          int ir = -1, is = -1;
          for (std::size_t k = 0; k < pts.size(); ++k) {
            if (pts[k] == g.r()(a)) ir = static_cast<int>(k);
            if (pts[k] == g.s()(a)) is = static_cast<int>(k);
          }
          if (g.mult(gamma[ir], a) != g.mult(a, gamma[is])) return;
        }
        // continuity as a section U -> g1
        if (!pts.empty()) {
          FinSpace sub = subspace(g.g0(), u);
          try {
            CMap m(sub, g.g1(), gamma);
            (void)m;
          } catch (const AxiomError&) {
            return;
          }
        }
        LocalCentraliser lc;
        lc.invariant_open = u;
        lc.section.assign(n0, -1);
        lc.trivial = true;
        for (std::size_t k = 0; k < pts.size(); ++k) {
          lc.section[pts[k]] = gamma[k];
          if (gamma[k] != g.unit(pts[k])) lc.trivial = false;
        }
        if (!lc.trivial) report.has_nontrivial = true;
        report.centralisers.push_back(lc);
        return;
      }
      for (int a : cand[i]) {
        gamma[i] = a;
        rec(i + 1);
        gamma[i] = -1;
      }
    };
    rec(0);
  }
  return report;
}

PartialEquivalence from_partial_homeo(const FinSpace& z,
                                      const isg::PartialHomeo& theta) {
  isg::check_partial_homeo(z, theta);
  FinGroupoid zg = groupoid::space_groupoid(z);
  FinSpace dom = subspace(z, theta.domain);
  auto pts = theta.domain.to_vector();
  std::vector<int> rv, sv;
  for (int p : pts) {
    rv.push_back(theta.value[p]);
    sv.push_back(p);
  }
  const int nx = static_cast<int>(pts.size());
  std::vector<std::vector<int>> la(z.size(), std::vector<int>(nx, -1));
  std::vector<std::vector<int>> ra(nx, std::vector<int>(z.size(), -1));
  for (int i = 0; i < nx; ++i) {
    la[rv[i]][i] = i;
    ra[i][sv[i]] = i;
  }
  return PartialEquivalence::verify(zg, zg, dom, CMap(dom, z, rv), CMap(dom, z, sv),
                                    la, ra);
}

PartialEquivalence from_functor_iso(const FinGroupoid& g, const FinGroupoid& h,
                                    const groupoid::GroupoidIso& f) {
  // check that f really is an isomorphism of topological groupoids
  {
    const int n0 = g.g0().size(), n1 = g.g1().size();
    if (h.g0().size() != n0 || h.g1().size() != n1)
      throw AxiomError("NotIsomorphism", "sizes");
    CMap f0(g.g0(), h.g0(), f.obj), f1(g.g1(), h.g1(), f.arrow);
    if (!f0.is_homeomorphism() || !f1.is_homeomorphism())
      throw AxiomError("NotIsomorphism", "not a homeomorphism");
    for (int a = 0; a < n1; ++a) {
      if (h.r()(f.arrow[a]) != f.obj[g.r()(a)] || h.s()(f.arrow[a]) != f.obj[g.s()(a)])
        throw AxiomError("NotIsomorphism", "anchors");
      for (int b = 0; b < n1; ++b)
        if (g.composable(a, b) &&
            h.mult(f.arrow[a], f.arrow[b]) != f.arrow[g.mult(a, b)])
          throw AxiomError("NotIsomorphism", "multiplication");
    }
  }
  // X = H^1, left H by multiplication, right G by h * g := h f(g)
  const int nh = h.g1().size(), ng = g.g1().size();
  std::vector<std::vector<int>> la(nh, std::vector<int>(nh, -1));
  std::vector<std::vector<int>> ra(nh, std::vector<int>(ng, -1));
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < nh; ++b)
      if (h.composable(a, b)) la[a][b] = h.mult(a, b);
  // right anchor: x -> (f0)^{-1}(s_H(x))
  std::vector<int> f0inv(g.g0().size());
  for (int i = 0; i < g.g0().size(); ++i) f0inv[f.obj[i]] = i;
  std::vector<int> sv(nh);
  for (int a = 0; a < nh; ++a) sv[a] = f0inv[h.s()(a)];
  for (int a = 0; a < nh; ++a)
    for (int b = 0; b < ng; ++b)
      if (sv[a] == g.r()(b)) ra[a][b] = h.mult(a, f.arrow[b]);
  return PartialEquivalence::verify(h, g, h.g1(), h.r(), CMap(h.g1(), g.g0(), sv),
                                    la, ra);
}

LinkingResult linking_groupoid(const PartialEquivalence& x, bool require_global) {
  if (require_global && !x.global())
    throw AxiomError("NotGlobalEquivalence", "anchor not surjective");
  const FinGroupoid& g = x.left();
  const FinGroupoid& h = x.right();
  auto obj = fintop::disjoint_union({g.g0(), h.g0()});
  auto arr = fintop::disjoint_union({g.g1(), x.space(), x.space(), h.g1()});
  LinkingResult res;
  res.offset_g0 = obj.offset[0];
  res.offset_h0 = obj.offset[1];
  res.offset_g1 = arr.offset[0];
  res.offset_x = arr.offset[1];
  res.offset_xstar = arr.offset[2];
  res.offset_h1 = arr.offset[3];

  const int n1 = arr.space.size();
  const int og = res.offset_g1, ox = res.offset_x, oxs = res.offset_xstar,
            oh = res.offset_h1;
  const int g0off = res.offset_g0, h0off = res.offset_h0;
  std::vector<int> rv(n1), sv(n1), inv(n1);
  for (int a = 0; a < g.g1().size(); ++a) {
    rv[og + a] = g0off + g.r()(a);
    sv[og + a] = g0off + g.s()(a);
    inv[og + a] = og + g.inv(a);
  }
  for (int i = 0; i < x.space().size(); ++i) {
    rv[ox + i] = g0off + x.r()(i);
    sv[ox + i] = h0off + x.s()(i);
    inv[ox + i] = oxs + i;
    rv[oxs + i] = h0off + x.s()(i);
    sv[oxs + i] = g0off + x.r()(i);
    inv[oxs + i] = ox + i;
  }
  for (int a = 0; a < h.g1().size(); ++a) {
    rv[oh + a] = h0off + h.r()(a);
    sv[oh + a] = h0off + h.s()(a);
    inv[oh + a] = oh + h.inv(a);
  }

  std::vector<std::vector<int>> mult(n1, std::vector<int>(n1, -1));
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n1; ++b) {
      if (sv[a] != rv[b]) continue;
      bool a_g = a < ox, a_x = a >= ox && a < oxs, a_xs = a >= oxs && a < oh,
           a_h = a >= oh;
      bool b_g = b < ox, b_x = b >= ox && b < oxs, b_xs = b >= oxs && b < oh,
           b_h = b >= oh;
      if (a_g && b_g)
        mult[a][b] = og + g.mult(a - og, b - og);
      else if (a_g && b_x)
        mult[a][b] = ox + x.left_act(a - og, b - ox);
      else if (a_x && b_h)
        mult[a][b] = ox + x.right_act(a - ox, b - oh);
      else if (a_h && b_h)
        mult[a][b] = oh + h.mult(a - oh, b - oh);
      else if (a_h && b_xs)
        mult[a][b] = oxs + x.right_act(b - oxs, h.inv(a - oh));
      else if (a_xs && b_g)
        mult[a][b] = oxs + x.left_act(g.inv(b - og), a - oxs);
      else if (a_x && b_xs)
        mult[a][b] = og + x.divide_left(a - ox, b - oxs);
      else if (a_xs && b_x)
        mult[a][b] = oh + x.divide_right(a - oxs, b - ox);
    }

  std::vector<int> unit(obj.space.size());
  for (int i = 0; i < g.g0().size(); ++i) unit[g0off + i] = og + g.unit(i);
  for (int i = 0; i < h.g0().size(); ++i) unit[h0off + i] = oh + h.unit(i);

  res.groupoid = FinGroupoid::verify(obj.space, arr.space,
                                     CMap(arr.space, obj.space, rv),
                                     CMap(arr.space, obj.space, sv), mult, unit, inv);
  return res;
}

// --- enumeration of self partial equivalences --------------------------------

namespace {

// group isomorphisms between two isotropy groups given as arrow lists
std::vector<std::vector<int>> isotropy_isos(const FinGroupoid& g,
                                            const std::vector<int>& a,
                                            const std::vector<int>& b) {
  std::vector<std::vector<int>> out;
  if (a.size() != b.size()) return out;
  const int n = static_cast<int>(a.size());
  std::vector<int> img(n, -1);
  std::vector<char> used(n, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          int p = g.mult(a[x], a[y]);
          int pi = -1, qi = -1;
          for (int k = 0; k < n; ++k) {
            if (a[k] == p) pi = k;
            if (b[k] == g.mult(b[img[x]], b[img[y]])) qi = k;
          }
          if (img[pi] != qi) return;
        }
      out.push_back(img);
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      img[i] = j;
      used[j] = 1;
      rec(i + 1);
      used[j] = 0;
      img[i] = -1;
    }
  };
  rec(0);
  return out;
}

}  // namespace

std::vector<PartialEquivalence> enumerate_peq(const FinGroupoid& g,
                                              int max_points) {
  const int n0 = g.g0().size(), n1 = g.g1().size();
  std::vector<PartialEquivalence> found;
  auto add_unique = [&](const PartialEquivalence& x) {
    for (const auto& y : found) {
      if (y.space().size() != x.space().size()) continue;
      if (y.range_subset() != x.range_subset()) continue;
      if (y.source_subset() != x.source_subset()) continue;
      for (const auto& m : find_bibundle_maps(y, x))
        if (m.isomorphism) return;
    }
    found.push_back(x);
  };

  // orbit decomposition of the object space
  std::vector<int> orbit(n0, -1);
  int orbit_count = 0;
  for (int x = 0; x < n0; ++x) {
    if (orbit[x] != -1) continue;
    std::vector<int> stack = {x};
    orbit[x] = orbit_count;
    while (!stack.empty()) {
      int y = stack.back();
      stack.pop_back();
      for (int a = 0; a < n1; ++a) {
        int z = -1;
        if (g.r()(a) == y) z = g.s()(a);
        if (g.s()(a) == y) z = g.r()(a);
        if (z >= 0 && orbit[z] == -1) {
          orbit[z] = orbit_count;
          stack.push_back(z);
        }
      }
    }
    ++orbit_count;
  }
  auto base_of_orbit = [&](int o, const Bitset& inside) {
    for (int x = 0; x < n0; ++x)
      if (orbit[x] == o && inside.test(x)) return x;
    return -1;
  };
  auto isotropy = [&](int x) {
    std::vector<int> out;
    for (int a = 0; a < n1; ++a)
      if (g.r()(a) == x && g.s()(a) == x) out.push_back(a);
    return out;
  };

  for (const Bitset& u : g.invariant_opens())
    for (const Bitset& v : g.invariant_opens()) {
      if (u.none() != v.none()) continue;
      if (u.none()) {
        // the empty partial equivalence
        FinSpace empty = FinSpace::discrete({});
        add_unique(PartialEquivalence::verify(
            g, g, empty, CMap(empty, g.g0(), std::vector<int>{}),
            CMap(empty, g.g0(), std::vector<int>{}),
            std::vector<std::vector<int>>(n1),
            std::vector<std::vector<int>>{}));
        continue;
      }
      std::vector<int> ou, ov;
      for (int o = 0; o < orbit_count; ++o) {
        if (base_of_orbit(o, u) >= 0) ou.push_back(o);
        if (base_of_orbit(o, v) >= 0) ov.push_back(o);
      }
      if (ou.size() != ov.size()) continue;
      std::vector<int> perm(ov.size());
      std::iota(perm.begin(), perm.end(), 0);
      do {
        // component data per orbit pair
        struct Component {
          std::vector<int> p_arrows, q_arrows;  // out of the base points
          std::vector<int> iso_u;               // isotropy arrows at u
          std::vector<std::vector<int>> isos;   // candidate identifications
        };
        std::vector<Component> comps;
        bool feasible = true;
        int total = 0;
        for (std::size_t k = 0; k < ou.size() && feasible; ++k) {
          int ub = base_of_orbit(ou[k], u), vb = base_of_orbit(ov[perm[k]], v);
          Component c;
          c.iso_u = isotropy(ub);
          auto iso_v = isotropy(vb);
          c.isos = isotropy_isos(g, c.iso_u, iso_v);
          if (c.isos.empty()) {
            feasible = false;
            break;
          }
          for (int a = 0; a < n1; ++a) {
            if (g.s()(a) == ub) c.p_arrows.push_back(a);
            if (g.s()(a) == vb) c.q_arrows.push_back(a);
          }
          total += static_cast<int>(c.p_arrows.size() * c.q_arrows.size() /
                                    c.iso_u.size());
          comps.push_back(std::move(c));
        }
        if (!feasible || total > max_points) continue;

        // choose one isotropy identification per component
        std::vector<std::size_t> choice(comps.size(), 0);
        while (true) {
          // set-level bibundle: classes [p, q] with (p i, q psi(i)) ~ (p, q)
          std::vector<std::pair<int, int>> pts;  // representatives
          std::vector<int> rv, sv;
          std::map<std::pair<int, int>, int> cls;
          for (std::size_t k = 0; k < comps.size(); ++k) {
            const auto& c = comps[k];
            const auto& psi = c.isos[choice[k]];
            for (int p : c.p_arrows)
              for (int q : c.q_arrows) {
                if (cls.count({p, q})) continue;
                int id = static_cast<int>(pts.size());
                pts.emplace_back(p, q);
                rv.push_back(g.r()(p));
                sv.push_back(g.r()(q));
                for (std::size_t ii = 0; ii < c.iso_u.size(); ++ii)
                  cls[{g.mult(p, c.iso_u[ii]),
                       g.mult(q, c.iso_v_arrow(ii, g, psi))}] = id;
              }
          }
          (void)0;
          break;  // replaced below
        }
        (void)choice;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  return found;
}

}  // namespace bibundle
}  // namespace peq
