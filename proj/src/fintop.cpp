#include "peq/fintop.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace peq {
namespace fintop {

void FinSpace::build_index() {
  index_.clear();
  for (int i = 0; i < size(); ++i) {
    if (!index_.emplace(points_[i], i).second)
      throw AxiomError("DuplicatePoint", points_[i]);
  }
}

int FinSpace::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw AxiomError("UnknownPoint", name);
  return it->second;
}

FinSpace FinSpace::from_min_nbhds(std::vector<std::string> points,
                                  std::vector<Bitset> min_nbhd) {
  FinSpace x;
  x.points_ = std::move(points);
  x.min_nbhd_ = std::move(min_nbhd);
  x.build_index();
  const int n = x.size();
  for (int i = 0; i < n; ++i) {
    if (!x.min_nbhd_[i].test(i))
      throw AxiomError("BadMinimalNeighbourhood", x.points_[i]);
    for (int j = 0; j < n; ++j)
      if (x.min_nbhd_[i].test(j) && !x.min_nbhd_[j].subset_of(x.min_nbhd_[i]))
        throw AxiomError("BadMinimalNeighbourhood",
                         x.points_[i] + " vs " + x.points_[j]);
  }
  return x;
}

FinSpace FinSpace::from_opens(std::vector<std::string> points,
                              const std::vector<std::vector<std::string>>& opens) {
  std::sort(points.begin(), points.end());
  FinSpace tmp;
  tmp.points_ = points;
  tmp.build_index();
  const int n = static_cast<int>(points.size());

  std::vector<Bitset> fam;
  for (const auto& o : opens) {
    Bitset b(n);
    for (const auto& p : o) b.set(tmp.index(p));
    fam.push_back(b);
  }
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());

  auto member = [&](const Bitset& b) {
    return std::binary_search(fam.begin(), fam.end(), b);
  };
  auto show = [&](const Bitset& b) {
    std::string s = "{";
    bool first = true;
    b.for_each([&](int i) {
      if (!first) s += ",";
      s += points[i];
      first = false;
    });
    return s + "}";
  };

  if (!member(Bitset(n)) || !member(Bitset::full(n)))
    throw AxiomError("MissingEmptyOrFull", "empty or full set absent");
  for (const auto& a : fam)
    for (const auto& b : fam) {
      if (!member(a | b))
        throw AxiomError("NotClosedUnderUnion", show(a) + " " + show(b));
      if (!member(a & b))
        throw AxiomError("NotClosedUnderIntersection", show(a) + " " + show(b));
    }

  std::vector<Bitset> mins(n, Bitset(n));
  for (int i = 0; i < n; ++i) {
    Bitset m = Bitset::full(n);
    for (const auto& o : fam)
      if (o.test(i)) m &= o;
    mins[i] = m;
  }
  return from_min_nbhds(std::move(points), std::move(mins));
}

FinSpace FinSpace::from_preorder(
    std::vector<std::string> points,
    const std::vector<std::pair<std::string, std::string>>& leq) {
  FinSpace tmp;
  tmp.points_ = points;
  tmp.build_index();
  const int n = static_cast<int>(points.size());
  // min_nbhd(x) = upward closure of {x} for the generated preorder
  std::vector<Bitset> step(n, Bitset(n));
  for (int i = 0; i < n; ++i) step[i].set(i);
  for (const auto& [a, b] : leq) step[tmp.index(a)].set(tmp.index(b));
  // transitive closure
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      Bitset next = step[i];
      step[i].for_each([&](int j) { next |= step[j]; });
      if (next != step[i]) {
        step[i] = next;
        changed = true;
      }
    }
  }
  return from_min_nbhds(std::move(points), std::move(step));
}

FinSpace FinSpace::discrete(std::vector<std::string> points) {
  const int n = static_cast<int>(points.size());
  std::vector<Bitset> mins;
  for (int i = 0; i < n; ++i) mins.push_back(Bitset::single(n, i));
  return from_min_nbhds(std::move(points), std::move(mins));
}

FinSpace FinSpace::indiscrete(std::vector<std::string> points) {
  const int n = static_cast<int>(points.size());
  std::vector<Bitset> mins(n, Bitset::full(n));
  return from_min_nbhds(std::move(points), std::move(mins));
}

bool FinSpace::is_open(const Bitset& s) const {
  bool ok = true;
  s.for_each([&](int i) {
    if (!min_nbhd_[i].subset_of(s)) ok = false;
  });
  return ok;
}

Bitset FinSpace::closure(const Bitset& s) const {
  Bitset c(size());
  for (int i = 0; i < size(); ++i)
    if (min_nbhd_[i].intersects(s)) c.set(i);
  return c;
}

Bitset FinSpace::interior(const Bitset& s) const {
  Bitset r(size());
  s.for_each([&](int i) {
    if (min_nbhd_[i].subset_of(s)) r.set(i);
  });
  return r;
}

std::uint64_t FinSpace::open_count() const {
  const int n = size();
  if (n > 24) throw AxiomError("TooLargeToEnumerate", points_.empty() ? "" : points_[0]);
  std::uint64_t c = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Bitset b(n);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) b.set(i);
    if (is_open(b)) ++c;
  }
  return c;
}

std::vector<Bitset> FinSpace::opens() const {
  const int n = size();
  if (n > 24) throw AxiomError("TooLargeToEnumerate", points_.empty() ? "" : points_[0]);
  std::vector<Bitset> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    Bitset b(n);
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) b.set(i);
    if (is_open(b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool FinSpace::hausdorff() const {
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (min_nbhd_[i].intersects(min_nbhd_[j])) return false;
  return true;
}

bool FinSpace::t0() const {
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (min_nbhd_[i] == min_nbhd_[j]) return false;
  return true;
}

bool FinSpace::locally_hausdorff() const {
  FinSpace sq = product(*this, *this);
  Bitset diag(sq.size());
  for (int i = 0; i < size(); ++i) diag.set(i * size() + i);
  return sq.locally_closed(diag);
}

bool FinSpace::locally_closed(const Bitset& s) const {
  FinSpace cl = subspace(*this, closure(s));
  Bitset inside(cl.size());
  auto pts = subspace_points(closure(s));
  for (int k = 0; k < cl.size(); ++k)
    if (s.test(pts[k])) inside.set(k);
  return cl.is_open(inside);
}

namespace {

// Backtracking bijection search respecting a compatibility relation.
bool find_bijection(int n, const std::vector<std::vector<char>>& allowed,
                    const std::function<bool(const std::vector<int>&)>& accept) {
  std::vector<int> img(n, -1);
  std::vector<char> used(n, 0);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return accept(img);
    for (int j = 0; j < n; ++j) {
      if (used[j] || !allowed[i][j]) continue;
      img[i] = j;
      used[j] = 1;
      if (rec(i + 1)) return true;
      used[j] = 0;
      img[i] = -1;
    }
    return false;
  };
  return rec(0);
}

}  // namespace

bool FinSpace::homeomorphic_to(const FinSpace& o) const {
  if (size() != o.size()) return false;
  const int n = size();
  std::vector<std::vector<char>> allowed(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      allowed[i][j] = min_nbhd_[i].count() == o.min_nbhd_[j].count() &&
                      closure(Bitset::single(n, i)).count() ==
                          o.closure(Bitset::single(n, j)).count();
  return find_bijection(n, allowed, [&](const std::vector<int>& img) {
    for (int i = 0; i < n; ++i) {
      Bitset mapped(n);
      min_nbhd_[i].for_each([&](int k) { mapped.set(img[k]); });
      if (mapped != o.min_nbhd_[img[i]]) return false;
    }
    return true;
  });
}

// --- CMap -----------------------------------------------------------------

CMap::CMap(FinSpace dom, FinSpace cod, std::vector<int> assignment)
    : dom_(std::move(dom)), cod_(std::move(cod)), map_(std::move(assignment)) {
  if (static_cast<int>(map_.size()) != dom_.size())
    throw AxiomError("BadAssignment", "length mismatch");
  for (int i = 0; i < dom_.size(); ++i)
    if (map_[i] < 0 || map_[i] >= cod_.size())
      throw AxiomError("BadAssignment", dom_.point(i));
  // continuity: f(U_x) subset U_{f(x)}
  for (int i = 0; i < dom_.size(); ++i) {
    bool ok = true;
    dom_.min_nbhd(i).for_each([&](int j) {
      if (!cod_.min_nbhd(map_[i]).test(map_[j])) ok = false;
    });
    if (!ok) throw AxiomError("NotContinuous", dom_.point(i));
  }
}

CMap::CMap(const FinSpace& dom, const FinSpace& cod,
           const std::map<std::string, std::string>& assignment)
    : CMap(dom, cod, [&] {
        std::vector<int> v(dom.size(), -1);
        for (const auto& [a, b] : assignment) v[dom.index(a)] = cod.index(b);
        for (int i = 0; i < dom.size(); ++i)
          if (v[i] < 0) throw AxiomError("BadAssignment", dom.point(i));
        return v;
      }()) {}

CMap CMap::identity(const FinSpace& x) {
  std::vector<int> v(x.size());
  for (int i = 0; i < x.size(); ++i) v[i] = i;
  return CMap(x, x, v);
}

CMap CMap::constant(const FinSpace& dom, const FinSpace& cod, int point) {
  return CMap(dom, cod, std::vector<int>(dom.size(), point));
}

Bitset CMap::image() const {
  Bitset b(cod_.size());
  for (int v : map_) b.set(v);
  return b;
}

Bitset CMap::preimage(const Bitset& s) const {
  Bitset b(dom_.size());
  for (int i = 0; i < dom_.size(); ++i)
    if (s.test(map_[i])) b.set(i);
  return b;
}

Bitset CMap::image_of(const Bitset& s) const {
  Bitset b(cod_.size());
  s.for_each([&](int i) { b.set(map_[i]); });
  return b;
}

bool CMap::is_open() const {
  for (int i = 0; i < dom_.size(); ++i)
    if (!cod_.is_open(image_of(dom_.min_nbhd(i)))) return false;
  return true;
}

bool CMap::is_closed() const {
  // f closed iff cl(f(x)) subset f(cl(x)) for every point x
  for (int i = 0; i < dom_.size(); ++i) {
    Bitset cl_fx = cod_.closure(Bitset::single(cod_.size(), map_[i]));
    Bitset f_clx = image_of(dom_.closure(Bitset::single(dom_.size(), i)));
    if (!cl_fx.subset_of(f_clx)) return false;
  }
  return true;
}

bool CMap::is_surjective() const { return image().count() == cod_.size(); }

bool CMap::is_injective() const {
  std::vector<char> seen(cod_.size(), 0);
  for (int v : map_) {
    if (seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

bool CMap::is_etale() const {
  // local homeomorphism iff on every minimal neighbourhood the map is
  // injective and carries minimal neighbourhoods to minimal neighbourhoods
  for (int x = 0; x < dom_.size(); ++x) {
    const Bitset& u = dom_.min_nbhd(x);
    std::vector<char> seen(cod_.size(), 0);
    bool ok = true;
    u.for_each([&](int z) {
      if (seen[map_[z]]) ok = false;
      seen[map_[z]] = 1;
      if (image_of(dom_.min_nbhd(z)) != cod_.min_nbhd(map_[z])) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool CMap::is_homeomorphism() const {
  if (!is_injective() || !is_surjective()) return false;
  for (int i = 0; i < dom_.size(); ++i)
    if (image_of(dom_.min_nbhd(i)) != cod_.min_nbhd(map_[i])) return false;
  return true;
}

bool CMap::is_homeo_onto_image() const {
  if (!is_injective()) return false;
  Bitset img = image();
  for (int i = 0; i < dom_.size(); ++i)
    if (image_of(dom_.min_nbhd(i)) != (cod_.min_nbhd(map_[i]) & img)) return false;
  return true;
}

MapPredicates CMap::predicates() const {
  MapPredicates p;
  p.continuous = true;
  p.open = is_open();
  p.closed = is_closed();
  p.proper = p.closed;
  p.surjective = is_surjective();
  p.etale = is_etale();
  return p;
}

CMap CMap::compose_after(const CMap& g) const {
  if (g.cod() != dom_) throw AxiomError("GroupoidMismatch", "composition domains");
  std::vector<int> v(g.dom().size());
  for (int i = 0; i < g.dom().size(); ++i) v[i] = map_[g(i)];
  return CMap(g.dom(), cod_, v);
}

// --- constructions --------------------------------------------------------

FinSpace product(const FinSpace& a, const FinSpace& b) {
  const int n = a.size(), m = b.size();
  std::vector<std::string> pts;
  std::vector<Bitset> mins;
  pts.reserve(n * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) pts.push_back("(" + a.point(i) + "|" + b.point(j) + ")");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      Bitset u(n * m);
      a.min_nbhd(i).for_each([&](int x) {
        b.min_nbhd(j).for_each([&](int y) { u.set(x * m + y); });
      });
      mins.push_back(u);
    }
  return FinSpace::from_min_nbhds(std::move(pts), std::move(mins));
}

std::vector<int> subspace_points(const Bitset& s) { return s.to_vector(); }

FinSpace subspace(const FinSpace& x, const Bitset& s) {
  auto pts = s.to_vector();
  const int k = static_cast<int>(pts.size());
  std::vector<int> local(x.size(), -1);
  for (int i = 0; i < k; ++i) local[pts[i]] = i;
  std::vector<std::string> names;
  std::vector<Bitset> mins;
  for (int i = 0; i < k; ++i) {
    names.push_back(x.point(pts[i]));
    Bitset u(k);
    (x.min_nbhd(pts[i]) & s).for_each([&](int p) { u.set(local[p]); });
    mins.push_back(u);
  }
  return FinSpace::from_min_nbhds(std::move(names), std::move(mins));
}

QuotientResult quotient(const FinSpace& x, const std::vector<int>& cls,
                        std::vector<std::string> class_names) {
  const int k = static_cast<int>(class_names.size());
  const int n = x.size();
  // successor sets: class c -> union of q(U_x) over x in class c
  std::vector<Bitset> succ(k, Bitset(k));
  for (int i = 0; i < n; ++i)
    x.min_nbhd(i).for_each([&](int j) { succ[cls[i]].set(cls[j]); });
  // minimal neighbourhood of class c = reachability closure of {c}
  std::vector<Bitset> mins(k, Bitset(k));
  for (int c = 0; c < k; ++c) {
    Bitset u = Bitset::single(k, c);
    bool changed = true;
    while (changed) {
      changed = false;
      Bitset next = u;
      u.for_each([&](int d) { next |= succ[d]; });
      if (next != u) {
        u = next;
        changed = true;
      }
    }
    mins[c] = u;
  }
  QuotientResult r;
  r.space = FinSpace::from_min_nbhds(std::move(class_names), std::move(mins));
  r.projection = CMap(x, r.space, cls);
  return r;
}

FiberProductResult fiber_product(const CMap& f, const CMap& g) {
  if (f.cod() != g.cod()) throw AxiomError("InconsistentAnchors", "codomain mismatch");
  FinSpace prod = product(f.dom(), g.dom());
  const int m = g.dom().size();
  Bitset sub(prod.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < f.dom().size(); ++i)
    for (int j = 0; j < m; ++j)
      if (f(i) == g(j)) {
        sub.set(i * m + j);
        pairs.emplace_back(i, j);
      }
  FiberProductResult r;
  r.space = subspace(prod, sub);
  r.pairs = pairs;
  std::vector<int> left, right;
  for (auto [i, j] : pairs) {
    left.push_back(i);
    right.push_back(j);
  }
  r.to_left = CMap(r.space, f.dom(), left);
  r.to_right = CMap(r.space, g.dom(), right);
  return r;
}

DisjointUnionResult disjoint_union(const std::vector<FinSpace>& parts) {
  int total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<std::string> names;
  std::vector<Bitset> mins;
  DisjointUnionResult r;
  int off = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    r.offset.push_back(off);
    for (int i = 0; i < parts[k].size(); ++i) {
      names.push_back(std::to_string(k) + ":" + parts[k].point(i));
      Bitset u(total);
      parts[k].min_nbhd(i).for_each([&](int j) { u.set(off + j); });
      mins.push_back(u);
    }
    off += parts[k].size();
  }
  r.space = FinSpace::from_min_nbhds(std::move(names), std::move(mins));
  return r;
}

HausdorffPredicates hausdorff_predicates(const FinSpace& x,
                                         const std::optional<Bitset>& s) {
  HausdorffPredicates p;
  p.hausdorff = x.hausdorff();
  p.locally_hausdorff = x.locally_hausdorff();
  p.t0 = x.t0();
  if (s) p.locally_closed = x.locally_closed(*s);
  return p;
}

}  // namespace fintop
}  // namespace peq
