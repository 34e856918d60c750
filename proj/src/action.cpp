#include "peq/action.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>

namespace peq {
namespace action {

using bibundle::ComposeResult;
using bibundle::compose;
using bibundle::dual;
using bibundle::identity_equivalence;
using bibundle::unit_restriction;
using fintop::fiber_product;
using fintop::subspace;

// --- gradings ---------------------------------------------------------

void SGradedGroupoid::verify() const {
  const int n1 = l.g1().size();
  if (static_cast<int>(grading.size()) != s.size())
    throw AxiomError("BadAssignment", "grading size");
  for (int t = 0; t < s.size(); ++t)
    if (!l.g1().is_open(grading[t]))
      throw AxiomError("GradingNotOpen", s.name(t));
  // Gr1
  for (int t = 0; t < s.size(); ++t)
    for (int u = 0; u < s.size(); ++u) {
      Bitset prod(n1);
      grading[t].for_each([&](int a) {
        grading[u].for_each([&](int b) {
          if (l.composable(a, b)) prod.set(l.mult(a, b));
        });
      });
      const Bitset& tu = grading[s.mult(t, u)];
      if (saturated ? prod != tu : !prod.subset_of(tu))
        throw AxiomError("Gr1", s.name(t) + "," + s.name(u));
    }
  // Gr2
  for (int t = 0; t < s.size(); ++t) {
    Bitset invt(n1);
    grading[t].for_each([&](int a) { invt.set(l.inv(a)); });
    if (invt != grading[s.star(t)]) throw AxiomError("Gr2", s.name(t));
  }
  // Gr4
  for (int t = 0; t < s.size(); ++t)
    for (int u = 0; u < s.size(); ++u) {
      Bitset meet = grading[t] & grading[u];
      Bitset join(n1);
      for (int v = 0; v < s.size(); ++v)
        if (s.leq(v, t) && s.leq(v, u)) join |= grading[v];
      if (meet != join) throw AxiomError("Gr4", s.name(t) + "," + s.name(u));
    }
  // Gr6
  Bitset all(n1);
  for (const auto& b : grading) all |= b;
  if (all != Bitset::full(n1)) throw AxiomError("Gr6", "slices do not cover");
}

bool graded_isomorphic(const SGradedGroupoid& a, const SGradedGroupoid& b) {
  if (a.s.size() != b.s.size()) return false;
  auto filter = [&](int g, int h) {
    for (int t = 0; t < a.s.size(); ++t)
      if (a.grading[t].test(g) != b.grading[t].test(h)) return false;
    return true;
  };
  return groupoid::find_isomorphism(a.l, b.l, filter).has_value();
}

// --- SAction ----------------------------------------------------------

SAction SAction::verify(InvSemigroup s, FinGroupoid base,
                        std::vector<FinSpace> spaces, std::vector<CMap> r,
                        std::vector<CMap> src,
                        std::vector<std::vector<std::vector<std::vector<int>>>> mu) {
  SAction a;
  a.s_ = std::move(s);
  a.base_ = std::move(base);
  a.x_ = std::move(spaces);
  a.r_ = std::move(r);
  a.src_ = std::move(src);
  a.mu_ = std::move(mu);

  const int n = a.s_.size();
  if (!a.s_.unit()) throw AxiomError("NoUnit", "semigroup must be unital");
  const int one = *a.s_.unit();
  if (static_cast<int>(a.x_.size()) != n || static_cast<int>(a.r_.size()) != n ||
      static_cast<int>(a.src_.size()) != n || static_cast<int>(a.mu_.size()) != n)
    throw AxiomError("BadAssignment", "action data sizes");

  // X_1 must be the arrow space of the base with its anchors
  if (a.x_[one] != a.base_.g1() ||
      a.r_[one].assignment() != a.base_.r().assignment() ||
      a.src_[one].assignment() != a.base_.s().assignment())
    throw AxiomError("S-UnitFibre", "X_1 is not the base arrow space");
  for (int g = 0; g < a.base_.g1().size(); ++g)
    for (int h = 0; h < a.base_.g1().size(); ++h) {
      int expect = a.base_.composable(g, h) ? a.base_.mult(g, h) : -1;
      if (a.mu_[one][one][g][h] != expect)
        throw AxiomError("S-UnitFibre", "mu_{1,1} is not the base multiplication");
    }

  auto nm = [&](int t) { return a.s_.name(t); };
  // anchors into g0; S2 open; S3 surjective on X_1 (by unit-fibre identity)
  for (int t = 0; t < n; ++t) {
    if (a.r_[t].dom() != a.x_[t] || a.r_[t].cod() != a.base_.g0() ||
        a.src_[t].dom() != a.x_[t] || a.src_[t].cod() != a.base_.g0())
      throw AxiomError("BadAssignment", "anchor domains at " + nm(t));
    if (!a.r_[t].is_open() || !a.src_[t].is_open())
      throw AxiomError("S2", nm(t));
  }

  // mu tables: defined exactly on composable pairs; S1; S4 surjective
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = a.s_.mult(t, u);
      const auto& table = a.mu_[t][u];
      if (static_cast<int>(table.size()) != a.x_[t].size())
        throw AxiomError("BadAssignment", "mu rows at " + nm(t) + "," + nm(u));
      std::vector<char> hit(a.x_[tu].size(), 0);
      for (int xi = 0; xi < a.x_[t].size(); ++xi)
        for (int yi = 0; yi < a.x_[u].size(); ++yi) {
          int v = table[xi][yi];
          bool comp = a.src_[t](xi) == a.r_[u](yi);
          if (!comp) {
            if (v != -1)
              throw AxiomError("S1", "non-composable at " + nm(t) + "," + nm(u));
            continue;
          }
          if (v < 0 || v >= a.x_[tu].size())
            throw AxiomError("S1", "missing product at " + nm(t) + "," + nm(u));
          if (a.r_[tu](v) != a.r_[t](xi) || a.src_[tu](v) != a.src_[u](yi))
            throw AxiomError("S1", nm(t) + "," + nm(u));
          hit[v] = 1;
        }
      for (char c : hit)
        if (!c) throw AxiomError("S4", nm(t) + "," + nm(u));
    }

  // S5/S6 for all t, u (homeomorphism conditions)
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = a.s_.mult(t, u);
      auto fp = fiber_product(a.src_[t], a.r_[u]);
      {
        auto target = fiber_product(a.src_[u], a.src_[tu]);
        std::map<std::pair<int, int>, int> idx;
        for (int k = 0; k < static_cast<int>(target.pairs.size()); ++k)
          idx[target.pairs[k]] = k;
        std::vector<int> v;
        for (auto [xi, yi] : fp.pairs) {
          auto it = idx.find({yi, a.mu_[t][u][xi][yi]});
          if (it == idx.end()) throw AxiomError("S5", nm(t) + "," + nm(u));
          v.push_back(it->second);
        }
        CMap m(fp.space, target.space, v);
        if (!m.is_homeomorphism()) throw AxiomError("S5", nm(t) + "," + nm(u));
      }
      {
        auto target = fiber_product(a.r_[t], a.r_[tu]);
        std::map<std::pair<int, int>, int> idx;
        for (int k = 0; k < static_cast<int>(target.pairs.size()); ++k)
          idx[target.pairs[k]] = k;
        std::vector<int> v;
        for (auto [xi, yi] : fp.pairs) v.push_back(idx.at({xi, a.mu_[t][u][xi][yi]}));
        CMap m(fp.space, target.space, v);
        if (!m.is_homeomorphism()) throw AxiomError("S6", nm(t) + "," + nm(u));
      }
    }

  // S7 associativity
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        const int tu = a.s_.mult(t, u), uv = a.s_.mult(u, v);
        for (int xi = 0; xi < a.x_[t].size(); ++xi)
          for (int yi = 0; yi < a.x_[u].size(); ++yi) {
            if (a.src_[t](xi) != a.r_[u](yi)) continue;
            for (int zi = 0; zi < a.x_[v].size(); ++zi) {
              if (a.src_[u](yi) != a.r_[v](zi)) continue;
              if (a.mu_[tu][v][a.mu_[t][u][xi][yi]][zi] !=
                  a.mu_[t][uv][xi][a.mu_[u][v][yi][zi]])
                throw AxiomError("S7", nm(t) + "," + nm(u) + "," + nm(v));
            }
          }
      }

  // every X_t is a partial equivalence of the base
  for (int t = 0; t < n; ++t) (void)a.as_peq(t);
  return a;
}

PartialEquivalence SAction::as_peq(int t) const {
  const int one = *s_.unit();
  const int ng = base_.g1().size();
  std::vector<std::vector<int>> la(ng, std::vector<int>(x_[t].size(), -1));
  std::vector<std::vector<int>> ra(x_[t].size(), std::vector<int>(ng, -1));
  for (int g = 0; g < ng; ++g)
    for (int xi = 0; xi < x_[t].size(); ++xi)
      if (base_.s()(g) == r_[t](xi)) la[g][xi] = mu_[one][t][g][xi];
  for (int xi = 0; xi < x_[t].size(); ++xi)
    for (int g = 0; g < ng; ++g)
      if (src_[t](xi) == base_.r()(g)) ra[xi][g] = mu_[t][one][xi][g];
  return PartialEquivalence::verify(base_, base_, x_[t], r_[t], src_[t], la, ra);
}

AssembleResult assemble_action(
    const InvSemigroup& s0, const FinGroupoid& base,
    const std::vector<PartialEquivalence>& x,
    const std::vector<std::vector<std::vector<std::vector<int>>>>& mu0) {
  AssembleResult res;
  InvSemigroup s = s0;
  std::vector<FinSpace> spaces;
  std::vector<CMap> r, src;
  auto mu = mu0;
  int n = s.size();
  for (int t = 0; t < n; ++t) {
    spaces.push_back(x[t].space());
    r.push_back(x[t].r());
    src.push_back(x[t].s());
  }
  if (!s.unit()) {
    res.unit_adjoined = true;
    s = adjoin(s, isg::Adjoin::unit);
    spaces.push_back(base.g1());
    r.push_back(base.r());
    src.push_back(base.s());
    const int one = n;
    mu.resize(n + 1);
    for (int t = 0; t <= n; ++t) mu[t].resize(n + 1);
    auto& xs = spaces;
    for (int t = 0; t < n; ++t) {
      // mu_{t,1} and mu_{1,t} from the bibundle actions
      mu[t][one].assign(xs[t].size(), std::vector<int>(base.g1().size(), -1));
      for (int xi = 0; xi < xs[t].size(); ++xi)
        for (int g = 0; g < base.g1().size(); ++g)
          if (src[t](xi) == base.r()(g)) mu[t][one][xi][g] = x[t].right_act(xi, g);
      mu[one][t].assign(base.g1().size(), std::vector<int>(xs[t].size(), -1));
      for (int g = 0; g < base.g1().size(); ++g)
        for (int xi = 0; xi < xs[t].size(); ++xi)
          if (base.s()(g) == r[t](xi)) mu[one][t][g][xi] = x[t].left_act(g, xi);
    }
    mu[one][one].assign(base.g1().size(), std::vector<int>(base.g1().size(), -1));
    for (int g = 0; g < base.g1().size(); ++g)
      for (int h = 0; h < base.g1().size(); ++h)
        if (base.composable(g, h)) mu[one][one][g][h] = base.mult(g, h);
  }
  res.action = SAction::verify(s, base, spaces, r, src, mu);
  return res;
}

// --- order and involution ----------------------------------------------

OrderStructure derive_order_structure(const SAction& a) {
  const InvSemigroup& s = a.s();
  const FinGroupoid& g = a.base();
  const int n = s.size();
  OrderStructure o;
  o.j.assign(n, std::vector<std::vector<int>>(n));
  o.star.assign(n, {});
  o.kappa.assign(n, {});
  o.u_e.assign(n, Bitset(g.g0().size()));

  // canonical trivialisations over idempotents
  for (int e : s.idempotents()) {
    PartialEquivalence pe = a.as_peq(e);
    ComposeResult cc = compose(pe, pe);
    std::vector<int> mu_cls(cc.composite.space().size(), -1);
    for (int xi = 0; xi < a.space(e).size(); ++xi)
      for (int yi = 0; yi < a.space(e).size(); ++yi) {
        int c = cc.cls[xi][yi];
        if (c < 0) continue;
        int v = a.mu(e, e, xi, yi);
        if (mu_cls[c] != -1 && mu_cls[c] != v)
          throw AxiomError("NonUniqueOrMissing", "mu_{e,e} not constant on classes");
        mu_cls[c] = v;
      }
    auto triv = bibundle::idempotent_trivialize(pe, cc, mu_cls);
    o.u_e[e] = triv.invariant_open;
    PartialEquivalence gu = unit_restriction(g, triv.invariant_open);
    o.kappa[e].assign(a.space(e).size(), -1);
    for (int xi = 0; xi < a.space(e).size(); ++xi)
      o.kappa[e][xi] = g.g1().index(gu.space().point(triv.iso.assignment[xi]));
  }

  // inclusion maps j_{u,t} for t <= u, through both routes
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      if (!s.leq(t, u)) continue;
      std::vector<int> jv(a.space(t).size(), -1);
      if (t == u) {
        std::iota(jv.begin(), jv.end(), 0);
        o.j[u][t] = jv;
        continue;
      }
      const int e = s.mult(t, s.star(t));
      const int f = s.mult(s.star(t), t);
      const int one = *s.unit();
      for (int ai = 0; ai < a.space(e).size(); ++ai)
        for (int yi = 0; yi < a.space(u).size(); ++yi) {
          if (a.src(e)(ai) != a.r(u)(yi)) continue;
          int xv = a.mu(e, u, ai, yi);
          int cand = a.mu(one, u, o.kappa[e][ai], yi);
          if (jv[xv] != -1 && jv[xv] != cand)
            throw AxiomError("NonUniqueOrMissing", "j route 1 at " + s.name(t));
          jv[xv] = cand;
        }
      for (int xi = 0; xi < a.space(t).size(); ++xi)
        if (jv[xi] < 0)
          throw AxiomError("NonUniqueOrMissing", "j route 1 missing at " + s.name(t));
      // route 2 must agree
      for (int yi = 0; yi < a.space(u).size(); ++yi)
        for (int bi = 0; bi < a.space(f).size(); ++bi) {
          if (a.src(u)(yi) != a.r(f)(bi)) continue;
          int xv = a.mu(u, f, yi, bi);
          int cand = a.mu(u, one, yi, o.kappa[f][bi]);
          if (jv[xv] != cand)
            throw AxiomError("NonUniqueOrMissing", "j routes disagree at " + s.name(t));
        }
      o.j[u][t] = jv;
    }

  // involutions J_t : X_t -> X_{t*}, characterised by x x* x = x
  for (int t = 0; t < n; ++t) {
    const int ts = s.star(t);
    const int e = s.mult(t, ts);
    o.star[t].assign(a.space(t).size(), -1);
    for (int xi = 0; xi < a.space(t).size(); ++xi) {
      int found = -1;
      for (int yi = 0; yi < a.space(ts).size(); ++yi) {
        if (a.r(ts)(yi) != a.src(t)(xi) || a.src(ts)(yi) != a.r(t)(xi)) continue;
        if (o.kappa[e][a.mu(t, ts, xi, yi)] == g.unit(a.r(t)(xi))) {
          if (found != -1)
            throw AxiomError("NonUniqueOrMissing", "involution at " + s.name(t));
          found = yi;
        }
      }
      if (found < 0)
        throw AxiomError("NonUniqueOrMissing", "involution missing at " + s.name(t));
      o.star[t][xi] = found;
    }
  }

  // identities: x x* x = x; x* x = unit; (x*)* = x; (xy)* = y* x*;
  // j_{v,u} j_{u,t} = j_{v,t}; j_{u*,t*}(x*) = j_{u,t}(x)*;
  // mu(j x, j y) = j mu(x, y)
  for (int t = 0; t < n; ++t) {
    const int ts = s.star(t);
    const int e = s.mult(t, ts), f = s.mult(ts, t);
    for (int xi = 0; xi < a.space(t).size(); ++xi) {
      int xs = o.star[t][xi];
      if (a.mu(e, t, a.mu(t, ts, xi, xs), xi) != xi)
        throw AxiomError("InvolutionDefect", "x x* x != x at " + s.name(t));
      if (o.kappa[f][a.mu(ts, t, xs, xi)] != g.unit(a.src(t)(xi)))
        throw AxiomError("InvolutionDefect", "x* x != unit at " + s.name(t));
      if (o.star[ts][xs] != xi)
        throw AxiomError("InvolutionDefect", "(x*)* != x at " + s.name(t));
    }
  }
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = s.mult(t, u);
      for (int xi = 0; xi < a.space(t).size(); ++xi)
        for (int yi = 0; yi < a.space(u).size(); ++yi) {
          if (a.src(t)(xi) != a.r(u)(yi)) continue;
          if (o.star[tu][a.mu(t, u, xi, yi)] !=
              a.mu(s.star(u), s.star(t), o.star[u][yi], o.star[t][xi]))
            throw AxiomError("InvolutionDefect",
                             "(xy)* != y* x* at " + s.name(t) + "," + s.name(u));
        }
    }
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      if (!s.leq(t, u)) continue;
      for (int v = 0; v < n; ++v) {
        if (!s.leq(u, v)) continue;
        for (int xi = 0; xi < a.space(t).size(); ++xi)
          if (o.j[v][u][o.j[u][t][xi]] != o.j[v][t][xi])
            throw AxiomError("InclusionDefect", "j composition at " + s.name(t));
      }
      for (int xi = 0; xi < a.space(t).size(); ++xi)
        if (o.j[s.star(u)][s.star(t)][o.star[t][xi]] != o.star[u][o.j[u][t][xi]])
          throw AxiomError("InclusionDefect", "j vs involution at " + s.name(t));
    }
  for (int t1 = 0; t1 < n; ++t1)
    for (int u1 = 0; u1 < n; ++u1) {
      if (!s.leq(t1, u1)) continue;
      for (int t2 = 0; t2 < n; ++t2)
        for (int u2 = 0; u2 < n; ++u2) {
          if (!s.leq(t2, u2)) continue;
          for (int xi = 0; xi < a.space(t1).size(); ++xi)
            for (int yi = 0; yi < a.space(t2).size(); ++yi) {
              if (a.src(t1)(xi) != a.r(t2)(yi)) continue;
              if (o.j[s.mult(u1, u2)][s.mult(t1, t2)][a.mu(t1, t2, xi, yi)] !=
                  a.mu(u1, u2, o.j[u1][t1][xi], o.j[u2][t2][yi]))
                throw AxiomError("InclusionDefect", "inclusion diagram");
            }
        }
    }
  return o;
}

// --- transformation groupoid --------------------------------------------

TransformationResult transformation_groupoid(const SAction& a) {
  const InvSemigroup& s = a.s();
  const FinGroupoid& g = a.base();
  const int n = s.size();
  OrderStructure o = derive_order_structure(a);

  std::vector<FinSpace> parts;
  for (int t = 0; t < n; ++t) parts.push_back(a.space(t));
  auto du = fintop::disjoint_union(parts);
  const int total = du.space.size();

  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  auto unite = [&](int x, int y) {
    x = find(x);
    y = find(y);
    if (x != y) parent[std::max(x, y)] = std::min(x, y);
  };
  for (int v = 0; v < n; ++v)
    for (int t = 0; t < n; ++t) {
      if (!s.leq(v, t) || v == t) continue;
      for (int zi = 0; zi < a.space(v).size(); ++zi)
        unite(du.offset[v] + zi, du.offset[t] + o.j[t][v][zi]);
    }

  std::vector<int> cls_of(total, -1);
  std::vector<int> rep;
  for (int k = 0; k < total; ++k) {
    int root = find(k);
    if (cls_of[root] < 0) {
      cls_of[root] = static_cast<int>(rep.size());
      rep.push_back(root);
    }
    cls_of[k] = cls_of[root];
  }
  std::vector<std::string> names;
  for (int r0 : rep) names.push_back(du.space.point(r0));
  auto q = fintop::quotient(du.space, cls_of, names);

  TransformationResult res;
  res.cls.assign(n, {});
  for (int t = 0; t < n; ++t) {
    res.cls[t].assign(a.space(t).size(), -1);
    for (int zi = 0; zi < a.space(t).size(); ++zi)
      res.cls[t][zi] = cls_of[du.offset[t] + zi];
  }

  const int nc = static_cast<int>(rep.size());
  // anchors from any representative
  std::vector<int> rv(nc, -1), sv(nc, -1);
  std::vector<int> rep_t(nc, -1), rep_x(nc, -1);
  for (int t = 0; t < n; ++t)
    for (int zi = 0; zi < a.space(t).size(); ++zi) {
      int c = res.cls[t][zi];
      if (rep_t[c] < 0) {
        rep_t[c] = t;
        rep_x[c] = zi;
      }
      int rr = a.r(t)(zi), ss = a.src(t)(zi);
      if ((rv[c] != -1 && rv[c] != rr) || (sv[c] != -1 && sv[c] != ss))
        throw AxiomError("NonUniqueOrMissing", "anchors not constant on classes");
      rv[c] = rr;
      sv[c] = ss;
    }

  std::vector<std::vector<int>> mult(nc, std::vector<int>(nc, -1));
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2) {
      if (sv[c1] != rv[c2]) continue;
      int t = rep_t[c1], u = rep_t[c2];
      mult[c1][c2] = res.cls[s.mult(t, u)][a.mu(t, u, rep_x[c1], rep_x[c2])];
    }
  std::vector<int> unit(g.g0().size()), inv(nc);
  const int one = *s.unit();
  for (int x = 0; x < g.g0().size(); ++x) unit[x] = res.cls[one][g.unit(x)];
  for (int c = 0; c < nc; ++c)
    inv[c] = res.cls[s.star(rep_t[c])][o.star[rep_t[c]][rep_x[c]]];

  FinGroupoid l = FinGroupoid::verify(g.g0(), q.space,
                                      CMap(q.space, g.g0(), rv),
                                      CMap(q.space, g.g0(), sv), mult, unit, inv);
  if (l.predicates().etale != g.predicates().etale)
    throw AxiomError("EtaleMismatch", "transformation groupoid");

  res.graded.s = s;
  res.graded.l = l;
  res.graded.saturated = true;
  res.graded.grading.assign(n, Bitset(nc));
  for (int t = 0; t < n; ++t)
    for (int zi = 0; zi < a.space(t).size(); ++zi)
      res.graded.grading[t].set(res.cls[t][zi]);
  res.graded.verify();
  return res;
}

SAction action_from_grading(const SGradedGroupoid& gg) {
  gg.verify();
  if (!gg.saturated) throw AxiomError("Gr1", "grading must be saturated");
  const InvSemigroup& s = gg.s;
  if (!s.unit()) throw AxiomError("NoUnit", "grading semigroup must be unital");
  const int one = *s.unit();
  const FinGroupoid& l = gg.l;
  // The unit fibre as a groupoid: objects all of l.g0, arrows the slice L_1.
  FinGroupoid base;
  {
    const Bitset& l1 = gg.grading[one];
    FinSpace h1 = subspace(l.g1(), l1);
    auto pts = l1.to_vector();
    std::vector<int> local(l.g1().size(), -1);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) local[pts[i]] = i;
    const int m = static_cast<int>(pts.size());
    std::vector<int> rv(m), sv(m), inv(m);
    std::vector<std::vector<int>> mult(m, std::vector<int>(m, -1));
    for (int i = 0; i < m; ++i) {
      rv[i] = l.r()(pts[i]);
      sv[i] = l.s()(pts[i]);
      inv[i] = local[l.inv(pts[i])];
      for (int j = 0; j < m; ++j)
        if (l.composable(pts[i], pts[j])) mult[i][j] = local[l.mult(pts[i], pts[j])];
    }
    std::vector<int> unit(l.g0().size());
    for (int x = 0; x < l.g0().size(); ++x) unit[x] = local[l.unit(x)];
    base = FinGroupoid::verify(l.g0(), h1, CMap(h1, l.g0(), rv),
                               CMap(h1, l.g0(), sv), mult, unit, inv);
  }

  const int n = s.size();
  std::vector<FinSpace> spaces;
  std::vector<CMap> r, src;
  std::vector<std::vector<int>> local_of(n);
  std::vector<std::vector<int>> points_of(n);
  for (int t = 0; t < n; ++t) {
    auto pts = gg.grading[t].to_vector();
    points_of[t] = pts;
    local_of[t].assign(l.g1().size(), -1);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) local_of[t][pts[i]] = i;
    spaces.push_back(subspace(l.g1(), gg.grading[t]));
    std::vector<int> rv, sv;
    for (int p : pts) {
      rv.push_back(l.r()(p));
      sv.push_back(l.s()(p));
    }
    r.emplace_back(spaces[t], l.g0(), rv);
    src.emplace_back(spaces[t], l.g0(), sv);
  }
  std::vector<std::vector<std::vector<std::vector<int>>>> mu(
      n, std::vector<std::vector<std::vector<int>>>(n));
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = s.mult(t, u);
      mu[t][u].assign(points_of[t].size(),
                      std::vector<int>(points_of[u].size(), -1));
      for (std::size_t i = 0; i < points_of[t].size(); ++i)
        for (std::size_t j = 0; j < points_of[u].size(); ++j) {
          int p = points_of[t][i], qq = points_of[u][j];
          if (!l.composable(p, qq)) continue;
          int prod = l.mult(p, qq);
          if (local_of[tu][prod] < 0)
            throw AxiomError("Gr1", "product escapes the slice at " + s.name(t) +
                                        "," + s.name(u));
          mu[t][u][i][j] = local_of[tu][prod];
        }
    }
  return SAction::verify(s, base, spaces, r, src, mu);
}

// --- germ groupoids -------------------------------------------------------

SAction action_on_space_groupoid(const SActionOnSpace& a) {
  a.verify();
  const InvSemigroup& s = a.s;
  const int n = s.size();
  FinGroupoid zg = groupoid::space_groupoid(a.z);
  std::vector<FinSpace> spaces;
  std::vector<CMap> r, src;
  std::vector<std::vector<int>> pts(n);
  std::vector<std::vector<int>> local(n);
  for (int t = 0; t < n; ++t) {
    const Bitset& dom = a.theta[t].domain;
    pts[t] = dom.to_vector();
    local[t].assign(a.z.size(), -1);
    for (int i = 0; i < static_cast<int>(pts[t].size()); ++i) local[t][pts[t][i]] = i;
    spaces.push_back(subspace(a.z, dom));
    std::vector<int> rv, sv;
    for (int p : pts[t]) {
      rv.push_back(a.theta[t].value[p]);
      sv.push_back(p);
    }
    r.emplace_back(spaces[t], a.z, rv);
    src.emplace_back(spaces[t], a.z, sv);
  }
  std::vector<std::vector<std::vector<std::vector<int>>>> mu(
      n, std::vector<std::vector<std::vector<int>>>(n));
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = s.mult(t, u);
      mu[t][u].assign(pts[t].size(), std::vector<int>(pts[u].size(), -1));
      for (std::size_t i = 0; i < pts[t].size(); ++i)
        for (std::size_t j = 0; j < pts[u].size(); ++j)
          if (pts[t][i] == a.theta[u].value[pts[u][j]])
            mu[t][u][i][j] = local[tu][pts[u][j]];
    }
  return SAction::verify(s, zg, spaces, r, src, mu);
}

GermResult germ_groupoid(const SActionOnSpace& a) {
  a.verify();
  const InvSemigroup& s = a.s;
  const int n = s.size(), nz = a.z.size();

  // germ points (t, z), z in D_{t*t}
  std::vector<std::pair<int, int>> items;
  std::vector<std::vector<int>> item_of(n, std::vector<int>(nz, -1));
  for (int t = 0; t < n; ++t)
    a.theta[t].domain.for_each([&](int z) {
      item_of[t][z] = static_cast<int>(items.size());
      items.emplace_back(t, z);
    });
  const int ni = static_cast<int>(items.size());
  std::vector<int> parent(ni);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u)
      for (int z = 0; z < nz; ++z) {
        if (item_of[t][z] < 0 || item_of[u][z] < 0) continue;
        bool same = false;
        for (int e : s.idempotents())
          if (a.theta[e].domain.test(z) && s.mult(t, e) == s.mult(u, e)) same = true;
        if (same) {
          int x = find(item_of[t][z]), y = find(item_of[u][z]);
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
      }
  std::vector<int> cls(ni, -1);
  std::vector<int> rep;
  for (int k = 0; k < ni; ++k) {
    int root = find(k);
    if (cls[root] < 0) {
      cls[root] = static_cast<int>(rep.size());
      rep.push_back(root);
    }
    cls[k] = cls[root];
  }
  const int nc = static_cast<int>(rep.size());

  // basic open B(t, U_z) and minimal neighbourhoods
  std::vector<Bitset> mins(nc, Bitset(nc));
  for (int c = 0; c < nc; ++c) {
    Bitset m = Bitset::full(nc);
    for (int k = 0; k < ni; ++k) {
      if (cls[k] != c) continue;
      auto [t, z] = items[k];
      Bitset basic(nc);
      a.z.min_nbhd(z).for_each([&](int w) {
        if (item_of[t][w] >= 0) basic.set(cls[item_of[t][w]]);
      });
      m &= basic;
    }
    mins[c] = m;
  }
  std::vector<std::string> names;
  for (int c = 0; c < nc; ++c) {
    auto [t, z] = items[rep[c]];
    names.push_back("[" + s.name(t) + ";" + a.z.point(z) + "]");
  }
  FinSpace arrows = FinSpace::from_min_nbhds(names, mins);

  std::vector<int> rv(nc), sv(nc), inv(nc);
  std::vector<std::vector<int>> mult(nc, std::vector<int>(nc, -1));
  for (int c = 0; c < nc; ++c) {
    auto [t, z] = items[rep[c]];
    rv[c] = a.theta[t].value[z];
    sv[c] = z;
    inv[c] = cls[item_of[s.star(t)][a.theta[t].value[z]]];
  }
  for (int c1 = 0; c1 < nc; ++c1)
    for (int c2 = 0; c2 < nc; ++c2) {
      if (sv[c1] != rv[c2]) continue;
      auto [t, z1] = items[rep[c1]];
      auto [u, z2] = items[rep[c2]];
      mult[c1][c2] = cls[item_of[s.mult(t, u)][z2]];
    }
  std::vector<int> unit(nz);
  const int one = *s.unit();
  for (int z = 0; z < nz; ++z) unit[z] = cls[item_of[one][z]];

  GermResult res;
  res.graded.s = s;
  res.graded.l = FinGroupoid::verify(a.z, arrows, CMap(arrows, a.z, rv),
                                     CMap(arrows, a.z, sv), mult, unit, inv);
  res.graded.saturated = true;
  res.graded.grading.assign(n, Bitset(nc));
  for (int k = 0; k < ni; ++k) res.graded.grading[items[k].first].set(cls[k]);
  res.graded.verify();
  res.germ = item_of;
  for (int t = 0; t < n; ++t)
    for (int z = 0; z < nz; ++z)
      if (res.germ[t][z] >= 0) res.germ[t][z] = cls[res.germ[t][z]];

  // the germ groupoid is the transformation groupoid of the induced action
  TransformationResult tr = transformation_groupoid(action_on_space_groupoid(a));
  if (!graded_isomorphic(res.graded, tr.graded))
    throw AxiomError("GermMismatch", "germ vs transformation groupoid");
  return res;
}

CocycleGradingResult grading_from_cocycle(const FinGroupoid& h,
                                          const InvSemigroup& group,
                                          const std::vector<int>& pi) {
  if (static_cast<int>(group.idempotents().size()) != 1 || !group.unit())
    throw AxiomError("NotAGroup", "cocycle target");
  for (int a = 0; a < h.g1().size(); ++a)
    for (int b = 0; b < h.g1().size(); ++b)
      if (h.composable(a, b) && group.mult(pi[a], pi[b]) != pi[h.mult(a, b)])
        throw AxiomError("NotMultiplicative",
                         h.g1().point(a) + "," + h.g1().point(b));
  CocycleGradingResult res;
  res.graded.s = group;
  res.graded.l = h;
  res.graded.grading.assign(group.size(), Bitset(h.g1().size()));
  for (int a = 0; a < h.g1().size(); ++a) res.graded.grading[pi[a]].set(a);
  for (int t = 0; t < group.size(); ++t)
    if (!h.g1().is_open(res.graded.grading[t]))
      throw AxiomError("NotMultiplicative", "cocycle not continuous");
  // saturation check
  res.graded.saturated = true;
  for (int t = 0; t < group.size() && res.graded.saturated; ++t)
    for (int u = 0; u < group.size() && res.graded.saturated; ++u) {
      Bitset prod(h.g1().size());
      res.graded.grading[t].for_each([&](int x) {
        res.graded.grading[u].for_each([&](int y) {
          if (h.composable(x, y)) prod.set(h.mult(x, y));
        });
      });
      if (prod != res.graded.grading[group.mult(t, u)]) res.graded.saturated = false;
    }
  res.graded.verify();
  return res;
}

ProperFreeFlags proper_free_flags(const SAction& a) {
  TransformationResult tr = transformation_groupoid(a);
  const FinGroupoid& l = tr.graded.l;
  FinSpace sq = fintop::product(l.g0(), l.g0());
  const int n0 = l.g0().size();
  std::vector<int> sr;
  for (int c = 0; c < l.g1().size(); ++c) sr.push_back(l.s()(c) * n0 + l.r()(c));
  CMap m(l.g1(), sq, sr);
  ProperFreeFlags f;
  f.proper = m.is_closed();
  f.free = m.is_injective();
  if (f.proper && f.free) {
    f.basic_unit_fibre = a.base().predicates().basic;
    if (!f.basic_unit_fibre)
      throw AxiomError("ProperFreeNotBasic", "unit fibre should be basic");
  }
  return f;
}

// --- Morita transport -------------------------------------------------------

TransportResult transport_action(const SAction& a, const PartialEquivalence& y) {
  if (!(y.right() == a.base()))
    throw AxiomError("GroupoidMismatch", "equivalence must end at the base");
  if (!y.global()) throw AxiomError("NotGlobalEquivalence", "transport");
  const InvSemigroup& s = a.s();
  const FinGroupoid& h = y.left();
  const FinGroupoid& g = a.base();
  const int n = s.size();
  const int one = *s.unit();

  PartialEquivalence ystar = dual(y);
  std::vector<ComposeResult> cc1(n), cc2(n);
  std::vector<PartialEquivalence> xp(n);
  // representatives: for a class of cc1[t] a pair (y, x); for a class of
  // cc2[t] a pair (cc1 class, y2)
  std::vector<std::vector<std::pair<int, int>>> rep1(n), rep2(n);
  for (int t = 0; t < n; ++t) {
    cc1[t] = compose(y, a.as_peq(t));
    cc2[t] = compose(cc1[t].composite, ystar);
    rep1[t].assign(cc1[t].composite.space().size(), {-1, -1});
    for (int yi = 0; yi < y.space().size(); ++yi)
      for (int xi = 0; xi < a.space(t).size(); ++xi) {
        int c = cc1[t].cls[yi][xi];
        if (c >= 0 && rep1[t][c].first < 0) rep1[t][c] = {yi, xi};
      }
    rep2[t].assign(cc2[t].composite.space().size(), {-1, -1});
    for (int c1 = 0; c1 < cc1[t].composite.space().size(); ++c1)
      for (int y2 = 0; y2 < y.space().size(); ++y2) {
        int c = cc2[t].cls[c1][y2];
        if (c >= 0 && rep2[t][c].first < 0) rep2[t][c] = {c1, y2};
      }
    xp[t] = (t == one) ? identity_equivalence(h) : cc2[t].composite;
  }

  auto triple_class = [&](int t, int y1, int xi, int y2) {
    return cc2[t].cls[cc1[t].cls[y1][xi]][y2];
  };
  // a class of X'_t (t != 1) as a representative triple (y1, x, y2)
  auto rep_triple = [&](int t, int c) {
    auto [c1, y2] = rep2[t][c];
    auto [y1, xi] = rep1[t][c1];
    return std::array<int, 3>{y1, xi, y2};
  };
  // image in H^1 of a triple with middle factor in X_1 = G^1
  auto to_h = [&](int y1, int w, int y2) {
    int y1p = y.right_act(y1, w);
    return y.divide_left(y1p, y2);
  };

  std::vector<std::vector<std::vector<std::vector<int>>>> mu(
      n, std::vector<std::vector<std::vector<int>>>(n));
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u) {
      const int tu = s.mult(t, u);
      mu[t][u].assign(xp[t].space().size(),
                      std::vector<int>(xp[u].space().size(), -1));
      for (int ct = 0; ct < xp[t].space().size(); ++ct)
        for (int cu = 0; cu < xp[u].space().size(); ++cu) {
          if (xp[t].s()(ct) != xp[u].r()(cu)) continue;
          int value = -1;
          if (t == one && u == one) {
            value = h.mult(ct, cu);
          } else if (t == one) {
            auto [y3, x2, y4] = rep_triple(u, cu);
            value = triple_class(u, y.left_act(ct, y3), x2, y4);
          } else if (u == one) {
            auto [y1, x1, y2] = rep_triple(t, ct);
            value = triple_class(t, y1, x1, y.left_act(h.inv(cu), y2));
          } else {
            auto [y1, x1, y2] = rep_triple(t, ct);
            auto [y3, x2, y4] = rep_triple(u, cu);
            int gg = y.divide_right(y2, y3);
            int z = a.mu(t, u, x1, a.mu(one, u, gg, x2));
            value = (tu == one) ? to_h(y1, z, y4) : triple_class(tu, y1, z, y4);
          }
          mu[t][u][ct][cu] = value;
        }
    }

  std::vector<FinSpace> spaces;
  std::vector<CMap> rr, ss;
  for (int t = 0; t < n; ++t) {
    spaces.push_back(xp[t].space());
    rr.push_back(xp[t].r());
    ss.push_back(xp[t].s());
  }
  TransportResult res;
  res.transported = SAction::verify(s, h, spaces, rr, ss, mu);

  // connecting equivalence between the two transformation groupoids
  TransformationResult th = transformation_groupoid(res.transported);
  TransformationResult tg = transformation_groupoid(a);
  OrderStructure o = derive_order_structure(a);

  std::vector<FinSpace> wparts;
  for (int t = 0; t < n; ++t) wparts.push_back(cc1[t].composite.space());
  auto du = fintop::disjoint_union(wparts);
  const int total = du.space.size();
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  auto unite = [&](int x, int yy) {
    x = find(x);
    yy = find(yy);
    if (x != yy) parent[std::max(x, yy)] = std::min(x, yy);
  };
  for (int v = 0; v < n; ++v)
    for (int t = 0; t < n; ++t) {
      if (!s.leq(v, t) || v == t) continue;
      for (int c = 0; c < cc1[v].composite.space().size(); ++c) {
        auto [yi, zi] = rep1[v][c];
        unite(du.offset[v] + c, du.offset[t] + cc1[t].cls[yi][o.j[t][v][zi]]);
      }
    }
  std::vector<int> cls_of(total, -1);
  std::vector<int> wrep;
  for (int k = 0; k < total; ++k) {
    int root = find(k);
    if (cls_of[root] < 0) {
      cls_of[root] = static_cast<int>(wrep.size());
      wrep.push_back(root);
    }
    cls_of[k] = cls_of[root];
  }
  std::vector<std::string> wnames;
  for (int r0 : wrep) wnames.push_back(du.space.point(r0));
  auto wq = fintop::quotient(du.space, cls_of, wnames);
  const int nw = static_cast<int>(wrep.size());

  auto w_of = [&](int t, int c1) { return cls_of[du.offset[t] + c1]; };
  std::vector<int> w_t(nw, -1), w_c(nw, -1);
  for (int t = 0; t < n; ++t)
    for (int c = 0; c < cc1[t].composite.space().size(); ++c)
      if (w_t[w_of(t, c)] < 0) {
        w_t[w_of(t, c)] = t;
        w_c[w_of(t, c)] = c;
      }

  std::vector<int> rv(nw), sv(nw);
  for (int c = 0; c < nw; ++c) {
    auto [yi, xi] = rep1[w_t[c]][w_c[c]];
    rv[c] = y.r()(yi);
    sv[c] = a.src(w_t[c])(xi);
  }

  const FinGroupoid& lh = th.graded.l;
  const FinGroupoid& lg = tg.graded.l;
  // representatives of transformation-groupoid arrows
  std::vector<int> ah_t(lh.g1().size(), -1), ah_x(lh.g1().size(), -1);
  for (int t = 0; t < n; ++t)
    for (int xi = 0; xi < res.transported.space(t).size(); ++xi)
      if (ah_t[th.cls[t][xi]] < 0) {
        ah_t[th.cls[t][xi]] = t;
        ah_x[th.cls[t][xi]] = xi;
      }
  std::vector<int> ag_t(lg.g1().size(), -1), ag_x(lg.g1().size(), -1);
  for (int t = 0; t < n; ++t)
    for (int xi = 0; xi < a.space(t).size(); ++xi)
      if (ag_t[tg.cls[t][xi]] < 0) {
        ag_t[tg.cls[t][xi]] = t;
        ag_x[tg.cls[t][xi]] = xi;
      }

  std::vector<std::vector<int>> la(lh.g1().size(), std::vector<int>(nw, -1));
  for (int arr = 0; arr < lh.g1().size(); ++arr)
    for (int c = 0; c < nw; ++c) {
      if (lh.s()(arr) != rv[c]) continue;
      int tp = ah_t[arr], u = w_t[c];
      auto [yi, xi] = rep1[u][w_c[c]];
      int value;
      if (tp == one) {
        value = w_of(u, cc1[u].cls[y.left_act(ah_x[arr], yi)][xi]);
      } else {
        auto [y1, x1, y2] = rep_triple(tp, ah_x[arr]);
        int gg = y.divide_right(y2, yi);
        int z = a.mu(tp, u, x1, a.mu(one, u, gg, xi));
        value = w_of(s.mult(tp, u), cc1[s.mult(tp, u)].cls[y1][z]);
      }
      la[arr][c] = value;
    }
  std::vector<std::vector<int>> ra(nw, std::vector<int>(lg.g1().size(), -1));
  for (int c = 0; c < nw; ++c)
    for (int arr = 0; arr < lg.g1().size(); ++arr) {
      if (sv[c] != lg.r()(arr)) continue;
      int u = w_t[c], v = ag_t[arr];
      auto [yi, xi] = rep1[u][w_c[c]];
      ra[c][arr] =
          w_of(s.mult(u, v), cc1[s.mult(u, v)].cls[yi][a.mu(u, v, xi, ag_x[arr])]);
    }

  res.connecting = PartialEquivalence::verify(
      lh, lg, wq.space, CMap(wq.space, lh.g0(), rv), CMap(wq.space, lg.g0(), sv),
      la, ra);
  if (!res.connecting.global())
    throw AxiomError("NotGlobalEquivalence", "connecting bibundle");
  return res;
}

// --- desingularisation ------------------------------------------------------

DesingularizeResult desingularize(const SActionOnSpace& a,
                                  const std::vector<Bitset>& cover) {
  GermResult germ = germ_groupoid(a);
  const FinGroupoid& l = germ.graded.l;
  const InvSemigroup& s = a.s;

  Bitset covered(a.z.size());
  for (const auto& u : cover) {
    if (!a.z.is_open(u)) throw AxiomError("NotOpen", "cover member");
    covered |= u;
  }
  for (int i = 0; i < a.z.size(); ++i)
    if (!covered.test(i)) throw AxiomError("NotACover", a.z.point(i));

  std::vector<FinSpace> parts;
  std::vector<std::vector<int>> part_points;
  for (const auto& u : cover) {
    parts.push_back(subspace(a.z, u));
    part_points.push_back(u.to_vector());
  }
  auto du = fintop::disjoint_union(parts);
  std::vector<int> pv(du.space.size());
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (int i = 0; i < parts[k].size(); ++i)
      pv[du.offset[k] + i] = part_points[k][i];
  CMap p(du.space, a.z, pv);

  // pull-back groupoid arrows: (x1, gamma, x2) with p(x1) = r, p(x2) = s
  const int nx = du.space.size(), nl = l.g1().size();
  FinSpace dbl = fintop::product(fintop::product(du.space, l.g1()), du.space);
  Bitset keep(dbl.size());
  std::vector<std::array<int, 3>> triples;
  std::vector<std::vector<std::vector<int>>> tidx(
      nx, std::vector<std::vector<int>>(nl, std::vector<int>(nx, -1)));
  for (int x1 = 0; x1 < nx; ++x1)
    for (int gm = 0; gm < nl; ++gm) {
      if (p(x1) != l.r()(gm)) continue;
      for (int x2 = 0; x2 < nx; ++x2) {
        if (p(x2) != l.s()(gm)) continue;
        keep.set((x1 * nl + gm) * nx + x2);
        tidx[x1][gm][x2] = static_cast<int>(triples.size());
        triples.push_back({x1, gm, x2});
      }
    }
  FinSpace arrows = subspace(dbl, keep);
  const int na = static_cast<int>(triples.size());
  std::vector<int> rv(na), sv(na), inv(na);
  std::vector<std::vector<int>> mult(na, std::vector<int>(na, -1));
  for (int i = 0; i < na; ++i) {
    auto [x1, gm, x2] = triples[i];
    rv[i] = x1;
    sv[i] = x2;
    inv[i] = tidx[x2][l.inv(gm)][x1];
    for (int j = 0; j < na; ++j) {
      auto [x3, gm2, x4] = triples[j];
      if (x3 == x2) mult[i][j] = tidx[x1][l.mult(gm, gm2)][x4];
    }
  }
  std::vector<int> unit(nx);
  for (int x = 0; x < nx; ++x) unit[x] = tidx[x][l.unit(p(x))][x];
  FinGroupoid pb = FinGroupoid::verify(du.space, arrows, CMap(arrows, du.space, rv),
                                       CMap(arrows, du.space, sv), mult, unit, inv);

  DesingularizeResult res;
  res.graded.s = s;
  res.graded.l = pb;
  res.graded.grading.assign(s.size(), Bitset(na));
  for (int i = 0; i < na; ++i)
    for (int t = 0; t < s.size(); ++t)
      if (germ.graded.grading[t].test(triples[i][1])) res.graded.grading[t].set(i);
  res.graded.verify();

  // equivalence bibundle to the germ groupoid
  FinSpace vprod = fintop::product(du.space, l.g1());
  Bitset vkeep(vprod.size());
  std::vector<std::pair<int, int>> vpairs;
  std::vector<std::vector<int>> vidx(nx, std::vector<int>(nl, -1));
  for (int x = 0; x < nx; ++x)
    for (int gm = 0; gm < nl; ++gm)
      if (p(x) == l.r()(gm)) {
        vkeep.set(x * nl + gm);
        vidx[x][gm] = static_cast<int>(vpairs.size());
        vpairs.emplace_back(x, gm);
      }
  FinSpace vspace = subspace(vprod, vkeep);
  const int nv = static_cast<int>(vpairs.size());
  std::vector<int> vr(nv), vs(nv);
  for (int i = 0; i < nv; ++i) {
    vr[i] = vpairs[i].first;
    vs[i] = l.s()(vpairs[i].second);
  }
  std::vector<std::vector<int>> vla(na, std::vector<int>(nv, -1));
  std::vector<std::vector<int>> vra(nv, std::vector<int>(nl, -1));
  for (int i = 0; i < na; ++i) {
    auto [x1, gm, x2] = triples[i];
    for (int k = 0; k < nv; ++k)
      if (vpairs[k].first == x2) vla[i][k] = vidx[x1][l.mult(gm, vpairs[k].second)];
  }
  for (int k = 0; k < nv; ++k)
    for (int gm2 = 0; gm2 < nl; ++gm2)
      if (l.composable(vpairs[k].second, gm2))
        vra[k][gm2] = vidx[vpairs[k].first][l.mult(vpairs[k].second, gm2)];
  res.equivalence = PartialEquivalence::verify(
      pb, l, vspace, CMap(vspace, du.space, vr), CMap(vspace, a.z, vs), vla, vra);
  if (!res.equivalence.global())
    throw AxiomError("NotGlobalEquivalence", "desingularisation bibundle");
  return res;
}

// --- inverse semigroup models ------------------------------------------------

BisGradingResult extend_grading_to_bisections(const SAction& a,
                                              const FinGroupoid& g,
                                              const std::vector<int>& phi,
                                              const CMap& psi) {
  BisGradingResult res;
  res.bis = isg::bisections(g);
  const InvSemigroup& s = a.s();
  std::string w;
  if (!s.is_homomorphism(res.bis.semigroup, phi, &w))
    throw AxiomError("NotAModel", "phi not a homomorphism at " + w);

  // canonical action of Bis(g) on g0
  SActionOnSpace bis_action;
  bis_action.s = res.bis.semigroup;
  bis_action.z = g.g0();
  for (const auto& b : res.bis.bisection) {
    isg::PartialHomeo t;
    t.domain = Bitset(g.g0().size());
    t.value.assign(g.g0().size(), -1);
    b.for_each([&](int arr) {
      t.domain.set(g.s()(arr));
      t.value[g.s()(arr)] = g.r()(arr);
    });
    bis_action.theta.push_back(t);
  }
  bis_action.verify();
  auto zi = isg::z_isomorphism_check(s, phi, bis_action);
  if (!zi.ok) throw AxiomError("NotAModel", "witness " + zi.witness);

  TransformationResult tr = transformation_groupoid(a);
  const FinGroupoid& l = tr.graded.l;
  auto orb = groupoid::orbit_space(a.base());
  if (psi.dom() != orb.space || psi.cod() != g.g0())
    throw AxiomError("BadAssignment", "psi domains");

  // induced action of S on the orbit space, and equivariance of psi
  for (int t = 0; t < s.size(); ++t) {
    std::vector<int> image(orb.space.size(), -2);
    for (int xi = 0; xi < a.space(t).size(); ++xi) {
      int od = orb.projection(a.src(t)(xi));
      int oi = orb.projection(a.r(t)(xi));
      if (image[od] != -2 && image[od] != oi)
        throw AxiomError("NotEquivariant", "orbit action not single-valued");
      image[od] = oi;
    }
    const isg::PartialHomeo& th = bis_action.theta[phi[t]];
    for (int od = 0; od < orb.space.size(); ++od) {
      if (image[od] == -2) continue;
      if (!th.domain.test(psi(od)) || th.value[psi(od)] != psi(image[od]))
        throw AxiomError("NotEquivariant",
                         s.name(t) + " at " + orb.space.point(od));
    }
  }

  const int nb = res.bis.semigroup.size();
  res.graded.s = res.bis.semigroup;
  res.graded.l = l;
  res.graded.grading.assign(nb, Bitset(l.g1().size()));
  for (int tb = 0; tb < nb; ++tb) {
    Bitset bar(l.g1().size());
    for (int u = 0; u < s.size(); ++u) {
      Bitset vtu = res.bis.bisection[tb] & res.bis.bisection[phi[u]];
      Bitset vdom(g.g0().size());
      vtu.for_each([&](int arr) { vdom.set(g.s()(arr)); });
      tr.graded.grading[u].for_each([&](int larr) {
        if (vdom.test(psi(orb.projection(l.s()(larr))))) bar.set(larr);
      });
    }
    res.graded.grading[tb] = bar;
  }
  res.graded.verify();

  // the extension restricts to the original grading and to the ideals
  for (int u = 0; u < s.size(); ++u)
    if (res.graded.grading[phi[u]] != tr.graded.grading[u])
      throw AxiomError("NotAModel", "bar L_phi(u) != L_u at " + s.name(u));
  const int one = *s.unit();
  for (int e : res.bis.semigroup.idempotents()) {
    Bitset udom(g.g0().size());
    res.bis.bisection[e].for_each([&](int arr) { udom.set(g.s()(arr)); });
    Bitset expect(l.g1().size());
    tr.graded.grading[one].for_each([&](int larr) {
      if (udom.test(psi(orb.projection(l.s()(larr))))) expect.set(larr);
    });
    if (res.graded.grading[e] != expect)
      throw AxiomError("NotAModel", "bar L_U mismatch");
  }
  return res;
}

// --- action isomorphism ---------------------------------------------------

namespace {

// all homeomorphisms between two finite spaces
std::vector<std::vector<int>> all_homeos(const FinSpace& x, const FinSpace& y) {
  std::vector<std::vector<int>> out;
  if (x.size() != y.size()) return out;
  const int n = x.size();
  std::vector<int> img(n, -1);
  std::vector<char> used(n, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      for (int k = 0; k < n; ++k) {
        Bitset m(n);
        x.min_nbhd(k).for_each([&](int p) { m.set(img[p]); });
        if (m != y.min_nbhd(img[k])) return;
      }
      out.push_back(img);
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j] || x.min_nbhd(i).count() != y.min_nbhd(j).count()) continue;
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

bool actions_isomorphic(const SAction& a, const SAction& b) {
  if (!a.s().isomorphic_to(b.s())) return false;
  // require identical index semigroups for the pointwise search
  if (a.s().size() != b.s().size()) return false;
  const int n = a.s().size();
  // semigroup must match elementwise (used for round trips, where it does)
  for (int t = 0; t < n; ++t)
    for (int u = 0; u < n; ++u)
      if (a.s().mult(t, u) != b.s().mult(t, u)) return false;

  for (const auto& h0 : all_homeos(a.base().g0(), b.base().g0())) {
    // candidate maps per t compatible with anchors through h0
    std::vector<std::vector<std::vector<int>>> cands(n);
    bool feasible = true;
    for (int t = 0; t < n && feasible; ++t) {
      for (const auto& phi : all_homeos(a.space(t), b.space(t))) {
        bool ok = true;
        for (int xi = 0; xi < a.space(t).size() && ok; ++xi)
          if (b.r(t)(phi[xi]) != h0[a.r(t)(xi)] ||
              b.src(t)(phi[xi]) != h0[a.src(t)(xi)])
            ok = false;
        if (ok) cands[t].push_back(phi);
      }
      if (cands[t].empty()) feasible = false;
    }
    if (!feasible) continue;
    std::vector<int> pick(n, -1);
    auto pair_ok = [&](int t1, int t2) {
      int t12 = a.s().mult(t1, t2);
      if (pick[t1] < 0 || pick[t2] < 0 || pick[t12] < 0) return true;
      const auto& p1 = cands[t1][pick[t1]];
      const auto& p2 = cands[t2][pick[t2]];
      const auto& p12 = cands[t12][pick[t12]];
      for (int xi = 0; xi < a.space(t1).size(); ++xi)
        for (int yi = 0; yi < a.space(t2).size(); ++yi) {
          if (a.src(t1)(xi) != a.r(t2)(yi)) continue;
          if (p12[a.mu(t1, t2, xi, yi)] != b.mu(t1, t2, p1[xi], p2[yi]))
            return false;
        }
      return true;
    };
    std::function<bool(int)> rec = [&](int t) -> bool {
      if (t == n) {
        for (int t1 = 0; t1 < n; ++t1)
          for (int t2 = 0; t2 < n; ++t2)
            if (!pair_ok(t1, t2)) return false;
        return true;
      }
      for (std::size_t c = 0; c < cands[t].size(); ++c) {
        pick[t] = static_cast<int>(c);
        bool ok = true;
        for (int t1 = 0; t1 <= t && ok; ++t1)
          for (int t2 = 0; t2 <= t && ok; ++t2)
            if (!pair_ok(t1, t2)) ok = false;
        if (ok && rec(t + 1)) return true;
        pick[t] = -1;
      }
      return false;
    };
    if (rec(0)) return true;
  }
  return false;
}

}  // namespace action
}  // namespace peq
