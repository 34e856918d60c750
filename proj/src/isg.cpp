#include "peq/isg.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace peq {
namespace isg {

int InvSemigroup::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw AxiomError("UnknownElement", name);
  return it->second;
}

InvSemigroup InvSemigroup::verify(std::vector<std::string> elements,
                                  std::vector<std::vector<int>> table) {
  InvSemigroup s;
  s.elements_ = std::move(elements);
  s.table_ = std::move(table);
  const int n = s.size();
  for (int i = 0; i < n; ++i)
    if (!s.index_.emplace(s.elements_[i], i).second)
      throw AxiomError("DuplicateElement", s.elements_[i]);
  if (static_cast<int>(s.table_.size()) != n)
    throw AxiomError("BadAssignment", "table rows");
  for (const auto& row : s.table_) {
    if (static_cast<int>(row.size()) != n) throw AxiomError("BadAssignment", "table row");
    for (int v : row)
      if (v < 0 || v >= n) throw AxiomError("BadAssignment", "table entry");
  }

  auto nm = [&](int i) { return s.elements_[i]; };

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (s.table_[s.table_[a][b]][c] != s.table_[a][s.table_[b][c]])
          throw AxiomError("NotAssociative", nm(a) + "," + nm(b) + "," + nm(c));

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (s.idempotent(a) && s.idempotent(b) && s.table_[a][b] != s.table_[b][a])
        throw AxiomError("IdempotentsDoNotCommute", nm(a) + "," + nm(b));

  s.star_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    int found = -1, count = 0;
    for (int b = 0; b < n; ++b)
      if (s.table_[s.table_[a][b]][a] == a && s.table_[s.table_[b][a]][b] == b) {
        found = b;
        ++count;
      }
    if (count != 1)
      throw AxiomError("NoUniqueGeneralizedInverse",
                       nm(a) + " has " + std::to_string(count) + " inverses");
    s.star_[a] = found;
  }

  s.leq_.assign(n, std::vector<char>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool left = s.table_[s.table_[a][s.star_[a]]][b] == a;
      bool right = s.table_[b][s.table_[s.star_[a]][a]] == a;
      if (left != right)
        throw AxiomError("OrderFormulaeDisagree", nm(a) + "," + nm(b));
      s.leq_[a][b] = left;
    }

  for (int a = 0; a < n; ++a) {
    bool is_unit = true, is_zero = true;
    for (int b = 0; b < n; ++b) {
      if (s.table_[a][b] != b || s.table_[b][a] != b) is_unit = false;
      if (s.table_[a][b] != a || s.table_[b][a] != a) is_zero = false;
    }
    if (is_unit) s.unit_ = a;
    if (is_zero) s.zero_ = a;
  }
  return s;
}

std::vector<int> InvSemigroup::idempotents() const {
  std::vector<int> e;
  for (int a = 0; a < size(); ++a)
    if (idempotent(a)) e.push_back(a);
  return e;
}

bool InvSemigroup::is_homomorphism(const InvSemigroup& target,
                                   const std::vector<int>& f,
                                   std::string* witness) const {
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (target.mult(f[a], f[b]) != f[mult(a, b)]) {
        if (witness) *witness = name(a) + "," + name(b);
        return false;
      }
  return true;
}

bool InvSemigroup::isomorphic_to(const InvSemigroup& o) const {
  if (size() != o.size()) return false;
  const int n = size();
  std::vector<int> img(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (idempotent(i) != o.idempotent(j)) continue;
      bool ok = true;
      for (int k = 0; k <= i && ok; ++k) {
        int jk = (k == i) ? j : img[k];
        int p = mult(i, k), q = mult(k, i);
        if (p <= i && (p == i ? j : img[p]) != o.mult(j, jk)) ok = false;
        if (q <= i && (q == i ? j : img[q]) != o.mult(jk, j)) ok = false;
        if (p > i || q > i) {
          // defer: verified when p (or q) gets assigned
        }
      }
      if (!ok) continue;
      img[i] = j;
      used[j] = 1;
      // re-verify all products among assigned elements
      bool full_ok = true;
      for (int a = 0; a <= i && full_ok; ++a)
        for (int b = 0; b <= i && full_ok; ++b) {
          int p = mult(a, b);
          if (p <= i && img[p] != o.mult(img[a], img[b])) full_ok = false;
        }
      if (full_ok && rec(i + 1)) return true;
      img[i] = -1;
      used[j] = 0;
    }
    return false;
  };
  return rec(0);
}

InvSemigroup adjoin(const InvSemigroup& s, Adjoin what) {
  const int n = s.size();
  std::string base = what == Adjoin::unit ? "1+" : "0+";
  std::string name = base;
  while (true) {
    bool taken = false;
    for (int i = 0; i < n; ++i)
      if (s.name(i) == name) taken = true;
    if (!taken) break;
    name += "'";
  }
  std::vector<std::string> elems = s.elements();
  elems.push_back(name);
  std::vector<std::vector<int>> table(n + 1, std::vector<int>(n + 1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = s.mult(a, b);
  for (int a = 0; a <= n; ++a) {
    table[a][n] = what == Adjoin::unit ? a : n;
    table[n][a] = what == Adjoin::unit ? a : n;
  }
  return InvSemigroup::verify(std::move(elems), std::move(table));
}

// --- bisections -------------------------------------------------------

int BisectionSemigroup::index_of(const Bitset& b) const {
  for (int i = 0; i < static_cast<int>(bisection.size()); ++i)
    if (bisection[i] == b) return i;
  throw AxiomError("UnknownElement", "bisection not in semigroup");
}

namespace {

std::string subset_name(const FinGroupoid& g, const Bitset& b) {
  std::vector<std::string> names;
  b.for_each([&](int i) { names.push_back(g.g1().point(i)); });
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out + "}";
}

bool is_bisection(const FinGroupoid& g, const Bitset& u) {
  if (!g.g1().is_open(u)) return false;
  std::vector<char> rseen(g.g0().size(), 0), sseen(g.g0().size(), 0);
  bool ok = true;
  u.for_each([&](int a) {
    if (rseen[g.r()(a)] || sseen[g.s()(a)]) ok = false;
    rseen[g.r()(a)] = 1;
    sseen[g.s()(a)] = 1;
  });
  if (!ok) return false;
  // restrictions are homeomorphisms onto open subsets
  if (!u.any()) return true;
  FinSpace sub = fintop::subspace(g.g1(), u);
  auto pts = u.to_vector();
  std::vector<int> rv, sv;
  for (int p : pts) {
    rv.push_back(g.r()(p));
    sv.push_back(g.s()(p));
  }
  fintop::CMap ru(sub, g.g0(), rv), su(sub, g.g0(), sv);
  return g.g0().is_open(ru.image()) && g.g0().is_open(su.image()) &&
         ru.is_homeo_onto_image() && su.is_homeo_onto_image();
}

}  // namespace

BisectionSemigroup bisections(const FinGroupoid& g) {
  if (!g.predicates().etale) throw AxiomError("NotEtale", "bisections");
  const int n = g.g1().size();
  if (n > 20) throw AxiomError("TooLargeToEnumerate", "bisections");
  std::vector<Bitset> found;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Bitset u(n);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) u.set(i);
    if (is_bisection(g, u)) found.push_back(u);
  }
  std::sort(found.begin(), found.end(), [](const Bitset& a, const Bitset& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a < b;
  });
  std::map<Bitset, int> idx;
  for (int i = 0; i < static_cast<int>(found.size()); ++i) idx[found[i]] = i;

  const int m = static_cast<int>(found.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Bitset prod(n);
      found[i].for_each([&](int a) {
        found[j].for_each([&](int b) {
          if (g.composable(a, b)) prod.set(g.mult(a, b));
        });
      });
      auto it = idx.find(prod);
      if (it == idx.end())
        throw AxiomError("BisectionProductDefect", subset_name(g, prod));
      table[i][j] = it->second;
    }
  std::vector<std::string> names;
  for (const auto& b : found) names.push_back(subset_name(g, b));
  BisectionSemigroup bs;
  bs.semigroup = InvSemigroup::verify(std::move(names), std::move(table));
  bs.bisection = found;
  return bs;
}

WideResult is_wide(const InvSemigroup& s, const std::vector<Bitset>& f,
                   const FinGroupoid& g) {
  const int n1 = g.g1().size();
  for (const auto& b : f)
    if (!is_bisection(g, b)) throw AxiomError("NotHomomorphism", "image not a bisection");
  // product of images matches image of product
  for (int a = 0; a < s.size(); ++a)
    for (int b = 0; b < s.size(); ++b) {
      Bitset prod(n1);
      f[a].for_each([&](int x) {
        f[b].for_each([&](int y) {
          if (g.composable(x, y)) prod.set(g.mult(x, y));
        });
      });
      if (prod != f[s.mult(a, b)])
        throw AxiomError("NotHomomorphism", s.name(a) + "," + s.name(b));
    }
  WideResult res;
  Bitset all(n1);
  for (const auto& b : f) all |= b;
  if (all != Bitset::full(n1)) {
    res.wide = false;
    for (int i = 0; i < n1; ++i)
      if (!all.test(i)) {
        res.witness = "uncovered arrow " + g.g1().point(i);
        break;
      }
    return res;
  }
  for (int a = 0; a < s.size(); ++a)
    for (int b = 0; b < s.size(); ++b) {
      Bitset meet = f[a] & f[b];
      Bitset join(n1);
      for (int v = 0; v < s.size(); ++v)
        if (s.leq(v, a) && s.leq(v, b)) join |= f[v];
      if (meet != join) {
        res.wide = false;
        res.witness = "f(" + s.name(a) + ") \\cap f(" + s.name(b) +
                      ") is not the union of smaller images";
        return res;
      }
    }
  res.wide = true;
  return res;
}

// --- partial homeomorphisms ---------------------------------------------

PartialHomeo PartialHomeo::identity_on(const FinSpace& z, const Bitset& dom) {
  PartialHomeo t;
  t.domain = dom;
  t.value.assign(z.size(), -1);
  dom.for_each([&](int i) { t.value[i] = i; });
  return t;
}

PartialHomeo PartialHomeo::total(const FinSpace& z, const std::vector<int>& v) {
  PartialHomeo t;
  t.domain = Bitset::full(z.size());
  t.value = v;
  return t;
}

Bitset PartialHomeo::range() const {
  Bitset r(static_cast<int>(value.size()));
  domain.for_each([&](int i) { r.set(value[i]); });
  return r;
}

PartialHomeo PartialHomeo::compose_after(const PartialHomeo& g) const {
  PartialHomeo t;
  t.domain = Bitset(static_cast<int>(value.size()));
  t.value.assign(value.size(), -1);
  g.domain.for_each([&](int i) {
    if (domain.test(g.value[i])) {
      t.domain.set(i);
      t.value[i] = value[g.value[i]];
    }
  });
  return t;
}

PartialHomeo PartialHomeo::inverse() const {
  PartialHomeo t;
  t.domain = range();
  t.value.assign(value.size(), -1);
  domain.for_each([&](int i) { t.value[value[i]] = i; });
  return t;
}

void check_partial_homeo(const FinSpace& z, const PartialHomeo& t) {
  if (!z.is_open(t.domain)) throw AxiomError("NotHomeomorphism", "domain not open");
  Bitset ran = t.range();
  if (!z.is_open(ran)) throw AxiomError("NotHomeomorphism", "range not open");
  if (ran.count() != t.domain.count())
    throw AxiomError("NotHomeomorphism", "not injective");
  FinSpace dom_sub = fintop::subspace(z, t.domain);
  auto pts = t.domain.to_vector();
  std::vector<int> local(z.size(), -1);
  auto rpts = ran.to_vector();
  for (int i = 0; i < static_cast<int>(rpts.size()); ++i) local[rpts[i]] = i;
  std::vector<int> v;
  for (int p : pts) v.push_back(local[t.value[p]]);
  fintop::CMap m(dom_sub, fintop::subspace(z, ran), v);
  if (!m.is_homeomorphism()) throw AxiomError("NotHomeomorphism", "on subspaces");
}

void SActionOnSpace::verify() const {
  if (!s.unit()) throw AxiomError("NoUnit", "semigroup must be unital");
  if (static_cast<int>(theta.size()) != s.size())
    throw AxiomError("BadAssignment", "theta size");
  for (int t = 0; t < s.size(); ++t) check_partial_homeo(z, theta[t]);
  if (!(theta[*s.unit()] == PartialHomeo::identity_on(z, Bitset::full(z.size()))))
    throw AxiomError("NotUnital", "theta(1) != id");
  for (int t = 0; t < s.size(); ++t)
    for (int u = 0; u < s.size(); ++u) {
      PartialHomeo comp = theta[t].compose_after(theta[u]);
      if (!(comp == theta[s.mult(t, u)]))
        throw AxiomError("NotHomomorphism",
                         "theta(" + s.name(t) + ")theta(" + s.name(u) + ")");
    }
  for (int t = 0; t < s.size(); ++t)
    if (!(theta[s.star(t)] == theta[t].inverse()))
      throw AxiomError("NotHomomorphism", "theta(" + s.name(t) + ")*");
}

ZIsoResult z_isomorphism_check(const InvSemigroup& s, const std::vector<int>& phi,
                               const SActionOnSpace& hat_action) {
  const InvSemigroup& hat = hat_action.s;
  std::string w;
  {
    // phi must be a homomorphism
    for (int a = 0; a < s.size(); ++a)
      for (int b = 0; b < s.size(); ++b)
        if (hat.mult(phi[a], phi[b]) != phi[s.mult(a, b)])
          throw AxiomError("NotHomomorphism", s.name(a) + "," + s.name(b));
  }
  auto dom = [&](int t_hat) { return hat_action.domain(hat.mult(hat.star(t_hat), t_hat)); };
  ZIsoResult res;
  // (1) injectivity: germs equal downstairs must already be equal upstairs
  for (int t1 = 0; t1 < s.size(); ++t1)
    for (int t2 = 0; t2 < s.size(); ++t2)
      for (int zp = 0; zp < hat_action.z.size(); ++zp) {
        if (!dom(phi[t1]).test(zp) || !dom(phi[t2]).test(zp)) continue;
        for (int f : hat.idempotents()) {
          if (!hat_action.domain(f).test(zp)) continue;
          if (hat.mult(phi[t1], f) != hat.mult(phi[t2], f)) continue;
          bool found = false;
          for (int e : s.idempotents()) {
            if (hat_action.domain(phi[e]).test(zp) && s.mult(t1, e) == s.mult(t2, e))
              found = true;
          }
          if (!found) {
            res.ok = false;
            res.witness = "(" + s.name(t1) + "," + s.name(t2) + "," +
                          hat_action.z.point(zp) + ")";
            return res;
          }
        }
      }
  // (2) surjectivity: every germ downstairs is hit
  for (int u = 0; u < hat.size(); ++u)
    for (int zp = 0; zp < hat_action.z.size(); ++zp) {
      if (!dom(u).test(zp)) continue;
      bool found = false;
      for (int t = 0; t < s.size() && !found; ++t) {
        if (!dom(phi[t]).test(zp)) continue;
        for (int f : hat.idempotents())
          if (hat_action.domain(f).test(zp) &&
              hat.mult(u, f) == hat.mult(phi[t], f)) {
            found = true;
            break;
          }
      }
      if (!found) {
        res.ok = false;
        res.witness = "(" + hat.name(u) + "," + hat_action.z.point(zp) + ")";
        return res;
      }
    }
  res.ok = true;
  return res;
}

}  // namespace isg
}  // namespace peq
