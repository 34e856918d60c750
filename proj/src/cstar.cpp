#include "peq/cstar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace peq {
namespace cstar {

// --- StarAlgebra ---------------------------------------------------------

StarAlgebra StarAlgebra::verify(int ambient, std::vector<Mat> basis,
                                std::vector<std::string> labels) {
  StarAlgebra a;
  a.n_ = ambient;
  a.basis_ = std::move(basis);
  a.labels_ = std::move(labels);
  a.span_ = RowSpace(ambient * ambient);
  for (const auto& m : a.basis_) {
    if (m.rows != ambient || m.cols != ambient)
      throw AxiomError("BadAssignment", "matrix size");
    if (!a.span_.add(m.flatten()))
      throw AxiomError("BasisNotIndependent", "algebra basis");
  }
  for (const auto& x : a.basis_) {
    if (!a.span_.contains(x.adjoint().flatten()))
      throw AxiomError("NotStarClosed", "adjoint leaves the subspace");
    for (const auto& y : a.basis_)
      if (!a.span_.contains((x * y).flatten()))
        throw AxiomError("NotMultClosed", "product leaves the subspace");
  }
  return a;
}

Vec StarAlgebra::coordinates(const Mat& m) const {
  std::vector<Vec> rows;
  for (const auto& b : basis_) rows.push_back(b.flatten());
  auto c = solve_coordinates(rows, m.flatten());
  if (!c) throw AxiomError("NotInSubspace", "coordinates");
  return *c;
}

Mat StarAlgebra::unit() const {
  const int d = dim();
  std::vector<Vec> img(d);
  Vec target;
  for (int j = 0; j < d; ++j) img[j] = Vec();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Vec left = (basis_[j] * basis_[i]).flatten();
      Vec right = (basis_[i] * basis_[j]).flatten();
      img[j].insert(img[j].end(), left.begin(), left.end());
      img[j].insert(img[j].end(), right.begin(), right.end());
    }
    Vec t = basis_[i].flatten();
    target.insert(target.end(), t.begin(), t.end());
    target.insert(target.end(), t.begin(), t.end());
  }
  auto c = solve_coordinates(img, target);
  if (!c) throw AxiomError("NotSemisimple", "algebra has no unit");
  Mat e(n_, n_);
  for (int j = 0; j < d; ++j) e = e + basis_[j].scaled((*c)[j]);
  return e;
}

// --- bimodules -----------------------------------------------------------

RowSpace BimoduleSubspace::span(int ambient) const {
  RowSpace s(ambient * ambient);
  for (const auto& m : basis) s.add(m.flatten());
  return s;
}

void verify_bimodule(const StarAlgebra& a, const BimoduleSubspace& m) {
  const int n = a.ambient();
  RowSpace ms = m.span(n);
  if (ms.rank() != m.dim())
    throw AxiomError("BasisNotIndependent", "bimodule basis");
  for (const auto& x : m.basis) {
    for (const auto& b : a.basis()) {
      if (!ms.contains((b * x).flatten()))
        throw AxiomError("BimoduleDefect", "A M not inside M");
      if (!ms.contains((x * b).flatten()))
        throw AxiomError("BimoduleDefect", "M A not inside M");
    }
    for (const auto& y : m.basis) {
      if (!a.span().contains((x.adjoint() * y).flatten()))
        throw AxiomError("BimoduleDefect", "M* M not inside A");
      if (!a.span().contains((x * y.adjoint()).flatten()))
        throw AxiomError("BimoduleDefect", "M M* not inside A");
      for (const auto& z : m.basis)
        if (!((x * y.adjoint()) * z == x * (y.adjoint() * z)))
          throw AxiomError("BimoduleDefect", "inner product identity");
    }
    if (!is_positive_semidefinite(x.adjoint() * x))
      throw AxiomError("PositivityFailure", "x* x not positive");
  }
}

// --- Fell bundles over S ----------------------------------------------------

const BimoduleSubspace& FellBundleOverS::unit_fiber() const {
  if (!s.unit()) throw AxiomError("NoUnit", "Fell bundle semigroup");
  return fiber[*s.unit()];
}

void FellBundleOverS::verify() const {
  if (!s.unit()) throw AxiomError("NoUnit", "Fell bundle semigroup");
  if (static_cast<int>(fiber.size()) != s.size())
    throw AxiomError("BadAssignment", "fiber count");
  StarAlgebra a = StarAlgebra::verify(ambient, unit_fiber().basis);
  std::vector<RowSpace> spans;
  for (const auto& f : fiber) spans.push_back(f.span(ambient));
  for (int t = 0; t < s.size(); ++t) {
    verify_bimodule(a, fiber[t]);
    // involution
    RowSpace st(ambient * ambient);
    for (const auto& x : fiber[t].basis) st.add(x.adjoint().flatten());
    if (!st.same_space(spans[s.star(t)]))
      throw AxiomError("InvolutionDefect", "fiber " + s.name(t));
    // inclusions along the order
    for (int u = 0; u < s.size(); ++u)
      if (s.leq(t, u) && !spans[u].contains_space(spans[t]))
        throw AxiomError("InclusionDefect",
                         s.name(t) + " not inside " + s.name(u));
  }
  for (int t = 0; t < s.size(); ++t)
    for (int u = 0; u < s.size(); ++u) {
      RowSpace prod(ambient * ambient);
      for (const auto& x : fiber[t].basis)
        for (const auto& y : fiber[u].basis) prod.add((x * y).flatten());
      const RowSpace& target = spans[s.mult(t, u)];
      if (saturated ? !prod.same_space(target) : !target.contains_space(prod))
        throw AxiomError("SaturationFailure", s.name(t) + "," + s.name(u));
    }
}

// --- groupoid algebras ------------------------------------------------------

StarAlgebra groupoid_algebra(const FinGroupoid& l) {
  const int n = l.g1().size();
  std::vector<Mat> basis;
  std::vector<std::string> labels;
  for (int g = 0; g < n; ++g) {
    Mat m(n, n);
    for (int h = 0; h < n; ++h)
      if (l.composable(g, h)) m.at(l.mult(g, h), h) = Scalar(1);
    basis.push_back(m);
    labels.push_back("d:" + l.g1().point(g));
  }
  return StarAlgebra::verify(n, std::move(basis), std::move(labels));
}

FellBundleOverS fell_bundle_from_grading(const SGradedGroupoid& g) {
  g.verify();
  StarAlgebra alg = groupoid_algebra(g.l);
  FellBundleOverS f;
  f.s = g.s;
  f.ambient = alg.ambient();
  f.saturated = g.saturated;
  for (int t = 0; t < g.s.size(); ++t) {
    BimoduleSubspace m;
    g.grading[t].for_each([&](int a) { m.basis.push_back(alg.basis()[a]); });
    f.fiber.push_back(std::move(m));
  }
  f.verify();
  return f;
}

// --- section algebras -------------------------------------------------------

namespace {

struct SectionContext {
  const FellBundleOverS* f;
  int total = 0;
  std::vector<int> offset;
  // coordinates of fiber[t].basis[i] * fiber[u].basis[j] in fiber[tu]
  std::vector<std::vector<std::vector<std::vector<Vec>>>> prod;
  // coordinates of fiber[t].basis[i]^* in fiber[t*]
  std::vector<std::vector<Vec>> star;

  explicit SectionContext(const FellBundleOverS& bundle) : f(&bundle) {
    const auto& s = bundle.s;
    const int ns = s.size();
    offset.assign(ns, 0);
    for (int t = 0; t < ns; ++t) {
      offset[t] = total;
      total += bundle.fiber[t].dim();
    }
    prod.assign(ns, {});
    star.assign(ns, {});
    for (int t = 0; t < ns; ++t) {
      std::vector<Vec> tstar_rows;
      for (const auto& b : bundle.fiber[s.star(t)].basis)
        tstar_rows.push_back(b.flatten());
      for (const auto& x : bundle.fiber[t].basis) {
        auto c = solve_coordinates(tstar_rows, x.adjoint().flatten());
        if (!c) throw AxiomError("InvolutionDefect", "star coordinates");
        star[t].push_back(*c);
      }
      prod[t].assign(ns, {});
      for (int u = 0; u < ns; ++u) {
        const int tu = s.mult(t, u);
        std::vector<Vec> target_rows;
        for (const auto& b : bundle.fiber[tu].basis)
          target_rows.push_back(b.flatten());
        prod[t][u].assign(bundle.fiber[t].dim(), {});
        for (int i = 0; i < bundle.fiber[t].dim(); ++i)
          for (int j = 0; j < bundle.fiber[u].dim(); ++j) {
            auto c = solve_coordinates(
                target_rows,
                (bundle.fiber[t].basis[i] * bundle.fiber[u].basis[j]).flatten());
            if (!c) throw AxiomError("SaturationFailure", "product coordinates");
            prod[t][u][i].push_back(*c);
          }
      }
    }
  }

  Vec convolve(const Vec& x, const Vec& y) const {
    const auto& s = f->s;
    Vec out(total);
    for (int t = 0; t < s.size(); ++t)
      for (int i = 0; i < f->fiber[t].dim(); ++i) {
        if (x[offset[t] + i].is_zero()) continue;
        for (int u = 0; u < s.size(); ++u)
          for (int j = 0; j < f->fiber[u].dim(); ++j) {
            if (y[offset[u] + j].is_zero()) continue;
            Scalar c = x[offset[t] + i] * y[offset[u] + j];
            const Vec& pc = prod[t][u][i][j];
            const int tu = s.mult(t, u);
            for (std::size_t k = 0; k < pc.size(); ++k)
              out[offset[tu] + k] = out[offset[tu] + k] + c * pc[k];
          }
      }
    return out;
  }

  Vec involute(const Vec& x) const {
    const auto& s = f->s;
    Vec out(total);
    for (int t = 0; t < s.size(); ++t)
      for (int i = 0; i < f->fiber[t].dim(); ++i) {
        Scalar c = x[offset[t] + i].conj();
        if (c.is_zero()) continue;
        const int ts = s.star(t);
        for (std::size_t k = 0; k < star[t][i].size(); ++k)
          out[offset[ts] + k] = out[offset[ts] + k] + c * star[t][i][k];
      }
    return out;
  }

  RowSpace relation_span() const {
    const auto& s = f->s;
    RowSpace r(total);
    for (int t = 0; t < s.size(); ++t)
      for (int u = 0; u < s.size(); ++u) {
        if (t == u || !s.leq(t, u)) continue;
        std::vector<Vec> urows;
        for (const auto& b : f->fiber[u].basis) urows.push_back(b.flatten());
        for (int i = 0; i < f->fiber[t].dim(); ++i) {
          auto c = solve_coordinates(urows, f->fiber[t].basis[i].flatten());
          if (!c) throw AxiomError("InclusionDefect", "relation coordinates");
          Vec v(total);
          v[offset[t] + i] = Scalar(1);
          for (std::size_t k = 0; k < c->size(); ++k)
            v[offset[u] + k] = v[offset[u] + k] - (*c)[k];
          r.add(v);
        }
      }
    return r;
  }
};

std::vector<int> block_multiset(const StarAlgebra& a) {
  return wedderburn_blocks(a).block_sizes;
}

}  // namespace

SectionAlgebraResult section_algebra(const FellBundleOverS& f) {
  f.verify();
  SectionContext ctx(f);
  RowSpace rel = ctx.relation_span();

  // relations absorb multiplication and involution
  {
    std::vector<Vec> gens = rel.rows();
    for (const auto& v : gens) {
      if (!rel.contains(ctx.involute(v)))
        throw AxiomError("SectionRelationDefect", "involution");
      for (int t = 0; t < f.s.size(); ++t)
        for (int i = 0; i < f.fiber[t].dim(); ++i) {
          Vec e(ctx.total);
          e[ctx.offset[t] + i] = Scalar(1);
          if (!rel.contains(ctx.convolve(v, e)) ||
              !rel.contains(ctx.convolve(e, v)))
            throw AxiomError("SectionRelationDefect", "product");
        }
    }
  }

  // a complement of the relation span
  std::vector<Vec> qreps;
  {
    RowSpace grow = rel;
    for (int k = 0; k < ctx.total; ++k) {
      Vec e(ctx.total);
      e[k] = Scalar(1);
      if (grow.add(e)) qreps.push_back(e);
    }
  }
  const int m = static_cast<int>(qreps.size());

  // quotient coordinates: v = (relation part) + sum c_i qreps[i]
  std::vector<Vec> mixed;
  for (const auto& r : rel.rows()) mixed.push_back(r);
  for (const auto& q : qreps) mixed.push_back(q);
  auto quotient_coords = [&](const Vec& v) {
    auto c = solve_coordinates(mixed, v);
    if (!c) throw AxiomError("LinearAlgebraDefect", "quotient coordinates");
    return Vec(c->begin() + rel.rank(), c->end());
  };

  // semisimplicity through the trace form of the regular representation
  std::vector<Mat> left(m, Mat(m, m));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) {
      Vec col = quotient_coords(ctx.convolve(qreps[k], qreps[l]));
      for (int i = 0; i < m; ++i) left[k].at(i, l) = col[i];
    }
  Mat gram(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) gram.at(k, l) = (left[k] * left[l]).trace();
  {
    std::vector<Vec> rows;
    for (int k = 0; k < m; ++k) {
      Vec row(m);
      for (int l = 0; l < m; ++l) row[l] = gram.at(k, l);
      rows.push_back(row);
    }
    RowSpace g(m);
    g.add_all(rows);
    if (g.rank() != m)
      throw AxiomError("NotSemisimple", "degenerate trace form");
  }

  // faithful realization inside the ambient algebra
  auto realize = [&](const Vec& v) {
    Mat out(f.ambient, f.ambient);
    for (int t = 0; t < f.s.size(); ++t)
      for (int i = 0; i < f.fiber[t].dim(); ++i)
        if (!v[ctx.offset[t] + i].is_zero())
          out = out + f.fiber[t].basis[i].scaled(v[ctx.offset[t] + i]);
    return out;
  };
  std::vector<Mat> image_basis;
  RowSpace img(f.ambient * f.ambient);
  for (const auto& q : qreps) {
    Mat mq = realize(q);
    if (!img.add(mq.flatten()))
      throw AxiomError("SectionRelationsIncomplete",
                       "kernel exceeds the inclusion relations");
    image_basis.push_back(mq);
  }

  SectionAlgebraResult res;
  res.dim = m;
  res.relation_rank = rel.rank();
  res.algebra = StarAlgebra::verify(f.ambient, image_basis);

  // the unit fibre embeds
  const int one = *f.s.unit();
  RowSpace emb(m);
  int cnt = 0;
  for (int i = 0; i < f.fiber[one].dim(); ++i) {
    Vec e(ctx.total);
    e[ctx.offset[one] + i] = Scalar(1);
    if (emb.add(quotient_coords(e))) ++cnt;
  }
  res.unit_fiber_embeds = cnt == f.fiber[one].dim();
  if (!res.unit_fiber_embeds)
    throw AxiomError("UnitFibreNotEmbedded", "C*(G) -> sections");
  return res;
}

// --- E-map kernels -----------------------------------------------------------

EMapKernel e_map_kernel(const SGradedGroupoid& g) {
  g.verify();
  const int n1 = g.l.g1().size();
  std::vector<Vec> image;
  std::vector<std::pair<int, int>> index;  // (t, arrow)
  for (int t = 0; t < g.s.size(); ++t)
    g.grading[t].for_each([&](int a) {
      Vec v(n1);
      v[a] = Scalar(1);
      image.push_back(v);
      index.emplace_back(t, a);
    });
  const int total = static_cast<int>(image.size());
  RowSpace img(n1);
  img.add_all(image);
  EMapKernel res;
  res.kernel_dim = total - img.rank();
  RowSpace gen(total);
  for (int t = 0; t < g.s.size(); ++t)
    for (int u = 0; u < g.s.size(); ++u) {
      if (t == u || !g.s.leq(t, u)) continue;
      g.grading[t].for_each([&](int a) {
        Vec v(total);
        for (int k = 0; k < total; ++k) {
          if (index[k] == std::make_pair(t, a)) v[k] = Scalar(1);
          if (index[k] == std::make_pair(u, a)) v[k] = v[k] - Scalar(1);
        }
        gen.add(v);
      });
    }
  res.generator_span_dim = gen.rank();
  res.generators_span = res.generator_span_dim == res.kernel_dim;
  return res;
}

EMapKernel e_map_kernel(const FellBundleOverS& f) {
  f.verify();
  SectionContext ctx(f);
  std::vector<Vec> image;
  for (int t = 0; t < f.s.size(); ++t)
    for (const auto& b : f.fiber[t].basis) image.push_back(b.flatten());
  RowSpace img(f.ambient * f.ambient);
  img.add_all(image);
  EMapKernel res;
  res.kernel_dim = ctx.total - img.rank();
  res.generator_span_dim = ctx.relation_span().rank();
  res.generators_span = res.generator_span_dim == res.kernel_dim;
  return res;
}

// --- Wedderburn decomposition -------------------------------------------------

namespace {

struct SubalgebraView {
  std::vector<Mat> basis;
  std::vector<Vec> rows;

  void rebuild_rows() {
    rows.clear();
    for (const auto& b : basis) rows.push_back(b.flatten());
  }
  Vec coords(const Mat& m) const {
    auto c = solve_coordinates(rows, m.flatten());
    if (!c) throw AxiomError("LinearAlgebraDefect", "subalgebra coordinates");
    return *c;
  }
};

// independent spanning family from a generating family
std::vector<Mat> independent(const std::vector<Mat>& gens, int ambient) {
  RowSpace space(ambient * ambient);
  std::vector<Mat> out;
  for (const auto& g : gens)
    if (space.add(g.flatten())) out.push_back(g);
  return out;
}

// minimal polynomial of w inside the unital subalgebra with unit e
std::vector<mpq_class> real_min_poly(const Mat& w, const Mat& e,
                                     const SubalgebraView& view) {
  std::vector<Mat> powers = {e};
  auto poly = minimal_polynomial(
      [&](int d) -> Vec {
        while (static_cast<int>(powers.size()) <= d)
          powers.push_back(powers.back() * w);
        return view.coords(powers[d]);
      },
      static_cast<int>(view.basis.size()) + 1);
  std::vector<mpq_class> out;
  for (const auto& c : poly) {
    if (c.im != 0)
      throw AxiomError("NotSplit", "non-real minimal polynomial coefficient");
    out.push_back(c.re);
  }
  return out;
}

// spectral projection of w at root lambda inside unit-e subalgebra
Mat spectral_projection(const Mat& w, const Mat& e,
                        const std::vector<mpq_class>& roots, std::size_t which) {
  Mat p = e;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (j == which) continue;
    Scalar denom(mpq_class(roots[which] - roots[j]), mpq_class(0));
    p = p * (w - e.scaled(Scalar(roots[j], mpq_class(0)))).scaled(denom.inverse());
  }
  return p;
}

// refine the idempotent e by self-adjoint elements from the pool, inside
// the commutative algebra spanned by pool elements compressed by e; the
// pool must consist of pairwise commuting elements when central == true.
std::vector<Mat> refine(const Mat& e, const std::vector<Mat>& pool, int ambient,
                        bool require_split) {
  for (const auto& w0 : pool) {
    Mat w = e * w0 * e;
    if (w.is_zero()) continue;
    // commutative subalgebra generated by e and w
    SubalgebraView view;
    view.basis = independent([&] {
      std::vector<Mat> gens = {e};
      Mat p = w;
      for (int k = 0; k < ambient * ambient; ++k) {
        gens.push_back(p);
        if (static_cast<int>(gens.size()) > ambient * ambient) break;
        p = p * w;
      }
      return gens;
    }(), ambient);
    view.rebuild_rows();
    if (view.basis.size() <= 1) continue;
    auto mp = real_min_poly(w, e, view);
    auto roots = rational_roots(mp);
    if (!roots.complete) {
      if (require_split)
        throw AxiomError("NotSplit", "irrational spectrum in the centre");
      continue;
    }
    if (roots.roots.size() <= 1) continue;
    std::vector<Mat> parts;
    for (std::size_t k = 0; k < roots.roots.size(); ++k) {
      Mat p = spectral_projection(w, e, roots.roots, k);
      if (!p.is_zero()) parts.push_back(p);
    }
    if (parts.size() <= 1) continue;
    Mat sum(e.rows, e.cols);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      sum = sum + parts[k];
      if (!(parts[k] * parts[k] == parts[k]))
        throw AxiomError("NotSemisimple", "spectral projection not idempotent");
      for (std::size_t l = 0; l < k; ++l)
        if (!(parts[k] * parts[l]).is_zero())
          throw AxiomError("NotSemisimple", "spectral projections not orthogonal");
    }
    if (!(sum == e))
      throw AxiomError("NotSemisimple", "spectral projections do not resolve");
    return parts;
  }
  return {};
}

}  // namespace

WedderburnDecomposition wedderburn_blocks(const StarAlgebra& a) {
  const int n = a.ambient();
  const int d = a.dim();
  // trace form of the left regular representation
  {
    std::vector<Vec> rows;
    std::vector<Vec> basis_rows;
    for (const auto& b : a.basis()) basis_rows.push_back(b.flatten());
    std::vector<Mat> left(d, Mat(d, d));
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        auto c = solve_coordinates(basis_rows, (a.basis()[j] * a.basis()[k]).flatten());
        if (!c) throw AxiomError("NotMultClosed", "regular representation");
        for (int i = 0; i < d; ++i) left[j].at(i, k) = (*c)[i];
      }
    for (int j = 0; j < d; ++j) {
      Vec row(d);
      for (int k = 0; k < d; ++k) row[k] = (left[j] * left[k]).trace();
      rows.push_back(row);
    }
    RowSpace g(d);
    g.add_all(rows);
    if (g.rank() != d) throw AxiomError("NotSemisimple", "degenerate trace form");
  }

  Mat unit = a.unit();

  // the centre
  std::vector<Mat> centre;
  {
    std::vector<Vec> comm;
    for (int j = 0; j < d; ++j) {
      Vec v;
      for (int i = 0; i < d; ++i) {
        Vec w = (a.basis()[j] * a.basis()[i] - a.basis()[i] * a.basis()[j]).flatten();
        v.insert(v.end(), w.begin(), w.end());
      }
      comm.push_back(v);
    }
    for (const auto& k : kernel_basis(comm, d * n * n)) {
      Mat z(n, n);
      for (int j = 0; j < d; ++j) z = z + a.basis()[j].scaled(k[j]);
      centre.push_back(z);
    }
  }

  // hermitian central generators
  std::vector<Mat> central_pool;
  for (const auto& z : centre) {
    central_pool.push_back(z + z.adjoint());
    central_pool.push_back((z - z.adjoint()).scaled(Scalar::i()));
  }

  std::vector<Mat> prim = {unit};
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Mat> next;
    for (const auto& e : prim) {
      auto parts = refine(e, central_pool, n, true);
      if (parts.empty()) {
        next.push_back(e);
      } else {
        for (auto& p : parts) next.push_back(p);
        changed = true;
      }
    }
    prim = next;
  }
  // each piece must have one-dimensional centre
  for (const auto& e : prim) {
    RowSpace ez(n * n);
    for (const auto& z : centre) ez.add((z * e).flatten());
    if (ez.rank() != 1) throw AxiomError("NotSplit", "centre did not split");
  }

  // block sizes via minimal projections
  std::vector<Mat> hermitian_pool;
  for (const auto& b : a.basis()) {
    hermitian_pool.push_back(b + b.adjoint());
    hermitian_pool.push_back((b - b.adjoint()).scaled(Scalar::i()));
  }
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      Mat p = a.basis()[j] * a.basis()[k];
      hermitian_pool.push_back(p + p.adjoint());
      hermitian_pool.push_back((p - p.adjoint()).scaled(Scalar::i()));
    }

  WedderburnDecomposition out;
  for (const auto& e : prim) {
    // compress and refine to a minimal projection
    Mat p = e;
    while (true) {
      RowSpace pap(n * n);
      for (const auto& b : a.basis()) pap.add((p * b * p).flatten());
      if (pap.rank() == 1) break;
      auto parts = refine(p, hermitian_pool, n, false);
      if (parts.empty())
        throw AxiomError("NotSplit", "no minimal projection found");
      p = parts.front();
    }
    RowSpace eap(n * n);
    for (const auto& b : a.basis()) eap.add((e * b * p).flatten());
    int size = eap.rank();
    RowSpace ea(n * n);
    for (const auto& b : a.basis()) ea.add((e * b).flatten());
    if (ea.rank() != size * size)
      throw AxiomError("NotSplit", "block dimension is not a perfect square");
    out.block_sizes.push_back(size);
    out.central_idempotents.push_back(e);
  }
  // sort blocks with their idempotents
  std::vector<int> order(out.block_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return out.block_sizes[x] < out.block_sizes[y];
  });
  WedderburnDecomposition sorted;
  for (int k : order) {
    sorted.block_sizes.push_back(out.block_sizes[k]);
    sorted.central_idempotents.push_back(out.central_idempotents[k]);
  }
  return sorted;
}

bool morita_equivalent(const StarAlgebra& a, const StarAlgebra& b) {
  return wedderburn_blocks(a).block_sizes.size() ==
         wedderburn_blocks(b).block_sizes.size();
}

IdealLattice ideal_and_prim(const StarAlgebra& a) {
  IdealLattice lat;
  lat.blocks = wedderburn_blocks(a);
  const int k = static_cast<int>(lat.blocks.block_sizes.size());
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back("P" + std::to_string(i));
  lat.prim = FinSpace::discrete(names);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    Bitset b(k);
    for (int i = 0; i < k; ++i)
      if ((mask >> i) & 1) b.set(i);
    lat.ideals.push_back(b);
  }
  return lat;
}

RowSpace IdealLattice::ideal_space(const StarAlgebra& a,
                                   const Bitset& blocks_subset) const {
  RowSpace s(a.ambient() * a.ambient());
  blocks_subset.for_each([&](int i) {
    for (const auto& b : a.basis())
      s.add((blocks.central_idempotents[i] * b).flatten());
  });
  return s;
}

SActionOnSpace prim_action(const FellBundleOverS& f) {
  f.verify();
  StarAlgebra a = StarAlgebra::verify(f.ambient, f.unit_fiber().basis);
  IdealLattice lat = ideal_and_prim(a);
  const int k = static_cast<int>(lat.blocks.block_sizes.size());

  SActionOnSpace act;
  act.s = f.s;
  act.z = lat.prim;
  for (int t = 0; t < f.s.size(); ++t) {
    isg::PartialHomeo th;
    th.domain = Bitset(k);
    th.value.assign(k, -1);
    for (int i = 0; i < k; ++i) {
      const Mat& ei = lat.blocks.central_idempotents[i];
      RowSpace mei(f.ambient * f.ambient);
      for (const auto& x : f.fiber[t].basis) mei.add((x * ei).flatten());
      if (mei.rank() == 0) continue;
      int target = -1;
      for (int j = 0; j < k; ++j) {
        const Mat& ej = lat.blocks.central_idempotents[j];
        RowSpace cut(f.ambient * f.ambient);
        for (const auto& x : f.fiber[t].basis) cut.add((ej * x * ei).flatten());
        if (cut.rank() == 0) continue;
        if (target != -1)
          throw AxiomError("RieffelDefect", "block image not unique");
        if (!cut.same_space(mei))
          throw AxiomError("RieffelDefect", "block correspondence");
        target = j;
      }
      th.domain.set(i);
      th.value[i] = target;
    }
    act.theta.push_back(th);
  }
  act.verify();
  return act;
}

SupremaCheck suprema_check(const FinSpace& x, const IdealLattice& lat,
                           const std::vector<Bitset>& m) {
  auto opens = x.opens();
  if (m.size() != opens.size())
    throw AxiomError("BadAssignment", "one ideal per open set");
  auto find_open = [&](const Bitset& u) {
    for (std::size_t k = 0; k < opens.size(); ++k)
      if (opens[k] == u) return static_cast<int>(k);
    throw AxiomError("LinearAlgebraDefect", "open set lookup");
  };
  const int nblocks = static_cast<int>(lat.blocks.block_sizes.size());
  for (const auto& ideal : m)
    if (ideal.universe() != nblocks)
      throw AxiomError("BadAssignment", "ideal encoding");
  // meet preservation is a precondition
  for (std::size_t i = 0; i < opens.size(); ++i)
    for (std::size_t j = 0; j < opens.size(); ++j)
      if (!((m[i] & m[j]) == m[find_open(opens[i] & opens[j])]))
        throw AxiomError("NotMeetPreserving",
                         "opens " + std::to_string(i) + "," + std::to_string(j));
  SupremaCheck res;
  int empty_idx = find_open(Bitset(x.size()));
  if (m[empty_idx].any()) {
    res.ok = false;
    res.witness = "m(empty) != 0";
    return res;
  }
  for (std::size_t i = 0; i < opens.size(); ++i)
    for (std::size_t j = 0; j < opens.size(); ++j)
      if (!((m[i] | m[j]) == m[find_open(opens[i] | opens[j])])) {
        res.ok = false;
        res.witness = "join of opens " + std::to_string(i) + "," + std::to_string(j);
        return res;
      }
  res.ok = true;
  return res;
}

// --- the explicit example ----------------------------------------------------

TwistedActionReport verify_twisted_action_s9() {
  TwistedActionReport rep;
  const int n = 4;
  auto E = [&](int i, int j) { return Mat::unit(n, i, j); };

  std::vector<Mat> b_basis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b_basis.push_back(E(i, j));
  for (int i = 2; i < 4; ++i)
    for (int j = 2; j < 4; ++j) b_basis.push_back(E(i, j));
  StarAlgebra b = StarAlgebra::verify(n, b_basis);

  std::vector<Mat> a_basis = {E(0, 0), E(1, 1), E(2, 2), E(2, 3), E(3, 2), E(3, 3)};
  StarAlgebra a = StarAlgebra::verify(n, a_basis);
  std::vector<Mat> ae_basis = {E(2, 2), E(2, 3), E(3, 2), E(3, 3)};

  Mat u = E(0, 1) + E(1, 0) + E(2, 3) + E(3, 2);

  // A_g = u A = A u
  std::vector<Mat> ag_basis;
  {
    RowSpace ag(n * n);
    for (const auto& x : a_basis) {
      Mat ux = u * x;
      if (ag.add(ux.flatten())) ag_basis.push_back(ux);
    }
    RowSpace au(n * n);
    for (const auto& x : a_basis) au.add((x * u).flatten());
    rep.a_g_two_sided = ag.same_space(au);
  }
  rep.dims_ok = a.dim() == 6 && static_cast<int>(ae_basis.size()) == 4 &&
                static_cast<int>(ag_basis.size()) == 6;

  RowSpace a_span = a.span();
  RowSpace ag_span(n * n);
  for (const auto& x : ag_basis) ag_span.add(x.flatten());
  RowSpace ae_span(n * n);
  for (const auto& x : ae_basis) ae_span.add(x.flatten());

  // A_1 n A_g = A_e and A_1 + A_g = B
  {
    RowSpace sum = a_span;
    for (const auto& x : ag_basis) sum.add(x.flatten());
    rep.sum_ok = sum.rank() == 8 && sum.same_space(b.span());
    int meet_dim = a.dim() + static_cast<int>(ag_basis.size()) - sum.rank();
    bool ae_inside = a_span.contains_space(ae_span) && ag_span.contains_space(ae_span);
    rep.intersection_ok = meet_dim == 4 && ae_inside;
  }

  // alpha_g = Ad(u), order two, not inner on A, u a multiplier of A_e
  {
    rep.alpha_order_two = u * u == Mat::identity(n);
    bool maps_a = true;
    for (const auto& x : a_basis)
      if (!a.contains(u * x * u)) maps_a = false;
    rep.alpha_order_two = rep.alpha_order_two && maps_a;
    rep.alpha_not_inner = !a.contains(u * E(0, 0));
    bool mult_ok = true;
    for (const auto& x : ae_basis)
      if (!ae_span.contains((u * x).flatten()) || !ae_span.contains((x * u).flatten()))
        mult_ok = false;
    rep.u_multiplier_of_ideal = mult_ok;
  }

  // twisted-action identities over S = {1, e, g}
  {
    InvSemigroup s3 = InvSemigroup::verify(
        {"1", "e", "g"}, {{0, 1, 2}, {1, 1, 1}, {2, 1, 0}});
    const int one = 0, e_idx = 1, g_idx = 2;
    Mat idm = Mat::identity(n);
    auto omega = [&](int x, int y) {
      if (x == one || y == one) return idm;
      if (x == e_idx && y == e_idx) return idm;
      if (x == g_idx && y == g_idx) return idm;
      return u;  // (e, g) and (g, e)
    };
    auto alpha = [&](int x, const Mat& mat) {
      return x == g_idx ? u * mat * u : mat;
    };
    auto ideal_basis = [&](int x) {
      return x == e_idx ? ae_basis : a_basis;
    };
    bool ok = true;
    // composition: alpha_x alpha_y = Ad(omega(x,y)) alpha_{xy} on the ideal
    for (int x = 0; x < 3 && ok; ++x)
      for (int y = 0; y < 3 && ok; ++y) {
        int xy = s3.mult(x, y);
        Mat w = omega(x, y);
        for (const auto& mat : ideal_basis(s3.mult(s3.star(xy), xy)))
          if (!(alpha(x, alpha(y, mat)) == w * alpha(xy, mat) * w.adjoint()))
            ok = false;
      }
    // cocycle: alpha_x(omega(y,z)) omega(x,yz) = omega(x,y) omega(xy,z)
    for (int x = 0; x < 3 && ok; ++x)
      for (int y = 0; y < 3 && ok; ++y)
        for (int z = 0; z < 3 && ok; ++z) {
          Mat lhs = alpha(x, omega(y, z)) * omega(x, s3.mult(y, z));
          Mat rhs = omega(x, y) * omega(s3.mult(x, y), z);
          int xyz = s3.mult(s3.mult(x, y), z);
          for (const auto& mat : ideal_basis(xyz))
            if (!(lhs * mat == rhs * mat)) ok = false;
        }
    rep.cocycle_ok = ok;
    // Sieben requires trivial twists over idempotent pairs
    bool nontrivial = false;
    for (const auto& mat : ae_basis)
      if (!(omega(e_idx, g_idx) * mat == mat)) nontrivial = true;
    rep.sieben_fails = nontrivial;

    // the associated Fell bundle
    FellBundleOverS f;
    f.s = s3;
    f.ambient = n;
    f.fiber.resize(3);
    f.fiber[one].basis = a_basis;
    f.fiber[e_idx].basis = ae_basis;
    f.fiber[g_idx].basis = ag_basis;
    f.verify();
    rep.bundle_matches = true;
    rep.bundle = f;

    auto sec = section_algebra(f);
    rep.section_dim = sec.dim;
    rep.section_blocks = block_multiset(sec.algebra);
  }
  return rep;
}

// --- Fell bundles over groupoids ----------------------------------------------

void FellBundleOverGroupoid::verify() const {
  const int n1 = l.g1().size();
  if (static_cast<int>(fiber.size()) != n1)
    throw AxiomError("BadAssignment", "fiber count");
  std::vector<RowSpace> spans;
  for (const auto& f : fiber) spans.push_back(f.span(ambient));
  for (int g = 0; g < n1; ++g) {
    if (spans[g].rank() != fiber[g].dim())
      throw AxiomError("BasisNotIndependent", "fiber basis");
    RowSpace st(ambient * ambient);
    for (const auto& x : fiber[g].basis) st.add(x.adjoint().flatten());
    if (!st.same_space(spans[l.inv(g)]))
      throw AxiomError("InvolutionDefect", "fiber " + l.g1().point(g));
    for (int h = 0; h < n1; ++h) {
      if (!l.composable(g, h)) continue;
      for (const auto& x : fiber[g].basis)
        for (const auto& y : fiber[h].basis)
          if (!spans[l.mult(g, h)].contains((x * y).flatten()))
            throw AxiomError("BimoduleDefect", "B_g B_h outside B_{gh}");
    }
    for (const auto& x : fiber[g].basis)
      if (!is_positive_semidefinite(x.adjoint() * x))
        throw AxiomError("PositivityFailure", l.g1().point(g));
  }
}

StarAlgebra bundle_convolution_algebra(const FellBundleOverGroupoid& b,
                                       const Bitset& arrows) {
  const int n1 = b.l.g1().size();
  const int nn = b.ambient * b.ambient;
  const int big = nn * n1;
  std::vector<Mat> basis;
  std::vector<std::string> labels;
  arrows.for_each([&](int g) {
    for (int i = 0; i < b.fiber[g].dim(); ++i) {
      Mat lift(big, big);
      Mat lop = b.fiber[g].basis[i].left_mult_operator(b.ambient);
      for (int h = 0; h < n1; ++h) {
        if (!b.l.composable(g, h)) continue;
        int gh = b.l.mult(g, h);
        for (int r = 0; r < nn; ++r)
          for (int c = 0; c < nn; ++c)
            if (!lop.at(r, c).is_zero()) lift.at(gh * nn + r, h * nn + c) = lop.at(r, c);
      }
      basis.push_back(lift);
      labels.push_back("d:" + b.l.g1().point(g) + "#" + std::to_string(i));
    }
  });
  return StarAlgebra::verify(big, std::move(basis), std::move(labels));
}

IteratedSectionResult groupoid_fell_section_algebra(const FellBundleOverGroupoid& b,
                                                    const SGradedGroupoid& g) {
  b.verify();
  g.verify();
  if (!(g.l == b.l)) throw AxiomError("GroupoidMismatch", "bundle vs grading");

  IteratedSectionResult res;
  res.via_groupoid =
      bundle_convolution_algebra(b, Bitset::full(b.l.g1().size()));

  // the S-indexed bundle: C_t spanned by the lifts over arrows in L_t
  FellBundleOverS f;
  f.s = g.s;
  f.ambient = res.via_groupoid.ambient();
  f.saturated = g.saturated;
  f.fiber.resize(g.s.size());
  {
    int k = 0;
    for (int arrow = 0; arrow < b.l.g1().size(); ++arrow)
      for (int i = 0; i < b.fiber[arrow].dim(); ++i, ++k)
        for (int t = 0; t < g.s.size(); ++t)
          if (g.grading[t].test(arrow))
            f.fiber[t].basis.push_back(res.via_groupoid.basis()[k]);
  }
  f.verify();
  res.s_bundle = f;
  res.via_sections = section_algebra(f);
  res.dims_match = res.via_sections.dim == res.via_groupoid.dim();
  res.blocks_match = block_multiset(res.via_sections.algebra) ==
                     block_multiset(res.via_groupoid);
  res.unit_fiber_embeds = res.via_sections.unit_fiber_embeds;
  if (!res.via_sections.algebra.span().same_space(res.via_groupoid.span()))
    throw AxiomError("SectionRelationsIncomplete", "basis correspondence");
  return res;
}

}  // namespace cstar
}  // namespace peq
