// Acceptance suite: runs every criterion exactly and prints one line per
// criterion.  Exit status 0 only when all criteria hold.

#include <chrono>
#include <iostream>
#include <random>

#include "peq/action.hpp"
#include "peq/cstar.hpp"
#include "peq/examples.hpp"
#include "peq/isg.hpp"
#include "peq/report.hpp"

using namespace peq;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& name, bool pass, double seconds,
               double budget_seconds) {
  bool in_time = seconds <= budget_seconds;
  if (!pass || !in_time) ++failures;
  std::cout << (pass && in_time ? "[PASS]" : "[FAIL]") << " criterion " << number
            << ": " << name << " (" << seconds << "s";
  if (!in_time) std::cout << ", over budget " << budget_seconds << "s";
  std::cout << ")\n";
}

template <typename F>
void run(int number, const std::string& name, double budget_seconds, F body) {
  auto start = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = body();
  } catch (const std::exception& e) {
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  criterion(number, name, pass, secs, budget_seconds);
  if (!detail.empty()) std::cout << "        " << detail << "\n";
}

std::vector<action::SGradedGroupoid> shipped_gradings() {
  std::vector<action::SGradedGroupoid> out;
  out.push_back(examples::gm_s3_grading());
  out.push_back(examples::z4_z2_grading());
  out.push_back(examples::trivial_grading(examples::gm()));
  out.push_back(examples::trivial_grading(examples::p2()));
  out.push_back(examples::trivial_grading(examples::z4()));
  out.push_back(examples::trivial_grading(examples::cech3().groupoid));
  // the desingularized translation action: the S-graded Cech-style cover
  {
    groupoid::FinGroupoid gm = examples::gm();
    const auto& g1 = gm.g1();
    Bitset one(3), e(3), g(3);
    one.set(g1.index("1c"));
    one.set(g1.index("1o"));
    e.set(g1.index("1o"));
    g.set(g1.index("1o"));
    g.set(g1.index("g-"));
    auto act = examples::translation_action(gm, examples::s3(), {one, e, g});
    Bitset u1(3), u2(3);
    u1.set(g1.index("1o"));
    u1.set(g1.index("1c"));
    u2.set(g1.index("1o"));
    u2.set(g1.index("g-"));
    out.push_back(action::desingularize(act, {u1, u2}).graded);
  }
  return out;
}

// wide inverse semigroup models for the etale fixtures, as bisections
struct WideModel {
  std::string name;
  groupoid::FinGroupoid h;
  isg::InvSemigroup s;
  std::vector<Bitset> f;
  std::vector<Bitset> cover;  // open cover of the arrow space
};

std::vector<WideModel> wide_models() {
  std::vector<WideModel> out;
  {
    WideModel m;
    m.name = "Gm";
    m.h = examples::gm();
    m.s = examples::s3();
    const auto& g1 = m.h.g1();
    Bitset one(3), e(3), g(3);
    one.set(g1.index("1c"));
    one.set(g1.index("1o"));
    e.set(g1.index("1o"));
    g.set(g1.index("1o"));
    g.set(g1.index("g-"));
    m.f = {one, e, g};
    Bitset u1(3), u2(3);
    u1.set(g1.index("1o"));
    u1.set(g1.index("1c"));
    u2.set(g1.index("1o"));
    u2.set(g1.index("g-"));
    m.cover = {u1, u2};
    out.push_back(m);
  }
  {
    WideModel m;
    m.name = "P2";
    m.h = examples::p2();
    // {1, swap, empty}
    Bitset one(4), swap(4), empty(4);
    for (int a = 0; a < 4; ++a) {
      if (m.h.r()(a) == m.h.s()(a)) one.set(a);
      else swap.set(a);
    }
    m.s = isg::InvSemigroup::verify({"1", "w", "0"},
                                    {{0, 1, 2}, {1, 0, 2}, {2, 2, 2}});
    m.f = {one, swap, empty};
    m.cover = {Bitset::full(4)};
    out.push_back(m);
  }
  {
    WideModel m;
    m.name = "Z4";
    m.h = examples::z4();
    // singleton bisections plus the empty one: Z/4 with zero
    std::vector<std::vector<int>> table(5, std::vector<int>(5, 4));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) table[a][b] = (a + b) % 4;
    m.s = isg::InvSemigroup::verify({"0", "1", "2", "3", "zero"}, table);
    for (int a = 0; a < 4; ++a) m.f.push_back(Bitset::single(4, a));
    m.f.push_back(Bitset(4));
    m.cover = {Bitset::full(4)};
    out.push_back(m);
  }
  {
    WideModel m;
    m.name = "Cech3";
    m.h = examples::cech3().groupoid;
    const int n1 = m.h.g1().size();
    Bitset one(n1), w(n1), e(n1), empty(n1);
    for (int a = 0; a < n1; ++a) {
      if (m.h.is_unit(a)) one.set(a);
      else w.set(a);  // the two arrows between the b-sheets
    }
    // e = w w = the partial identity over the two b-sheets
    w.for_each([&](int a) {
      w.for_each([&](int b) {
        if (m.h.composable(a, b)) e.set(m.h.mult(a, b));
      });
    });
    m.s = isg::InvSemigroup::verify(
        {"1", "w", "e", "0"},
        {{0, 1, 2, 3}, {1, 2, 1, 3}, {2, 1, 2, 3}, {3, 3, 3, 3}});
    m.f = {one, w, e, empty};
    m.cover = {Bitset::full(n1)};
    out.push_back(m);
  }
  return out;
}

}  // namespace

int main() {
  // 1. reproduction of the explicit example
  run(1, "explicit-example reproduction", 5.0, [] {
    auto bis = isg::bisections(examples::gm());
    if (bis.semigroup.size() != 4) return false;
    const auto& g1 = examples::gm().g1();
    Bitset one(3), e(3), g(3);
    one.set(g1.index("1c"));
    one.set(g1.index("1o"));
    e.set(g1.index("1o"));
    g.set(g1.index("1o"));
    g.set(g1.index("g-"));
    int i1 = bis.index_of(one), ie = bis.index_of(e), ig = bis.index_of(g);
    if (bis.semigroup.mult(ig, ig) != i1) return false;
    if ((bis.bisection[i1] & bis.bisection[ig]) != bis.bisection[ie]) return false;
    if (!bis.semigroup.isomorphic_to(
            isg::adjoin(examples::s3(), isg::Adjoin::zero)))
      return false;

    auto rep = cstar::verify_twisted_action_s9();
    if (!rep.all_ok()) return false;
    std::vector<int> dims;
    for (const auto& f : rep.bundle.fiber) dims.push_back(f.dim());
    // element order 1, e, g: dimensions (6, 4, 6)
    if (dims != std::vector<int>({6, 4, 6})) return false;
    if (rep.section_dim != 8) return false;
    if (rep.section_blocks != std::vector<int>({2, 2})) return false;
    return true;
  });

  // 2. germ-model reproduction
  run(2, "germ model of the trivial action", 1.0, [] {
    auto germ = action::germ_groupoid(examples::s3_on_sigma());
    const auto& l = germ.graded.l;
    if (l.g1().size() != 3) return false;
    if (l.g1().open_count() != 5) return false;
    if (!l.predicates().etale) return false;
    if (l.predicates().basic) return false;
    if (l.g1().locally_hausdorff()) return false;
    // the two arrows over the closed point admit no disjoint neighbourhoods
    int c = l.g0().index("c");
    std::vector<int> over_c;
    for (int a = 0; a < 3; ++a)
      if (l.r()(a) == c) over_c.push_back(a);
    if (over_c.size() != 2) return false;
    for (const auto& u : l.g1().opens())
      for (const auto& v : l.g1().opens())
        if (u.test(over_c[0]) && v.test(over_c[1]) && !u.intersects(v))
          return false;
    return true;
  });

  // 3. grading round trip, fixtures plus 200 random instances
  run(3, "grading round trip (fixtures + 200 random)", 60.0, [] {
    auto check = [](const action::SGradedGroupoid& g) {
      action::SAction a = action::action_from_grading(g);
      auto tr = action::transformation_groupoid(a);
      if (!action::graded_isomorphic(tr.graded, g)) return false;
      return action::actions_isomorphic(a, action::action_from_grading(tr.graded));
    };
    for (const auto& g : shipped_gradings())
      if (!check(g)) return false;
    std::mt19937_64 rng(20260809);
    int done = 0, attempts = 0;
    while (done < 200 && attempts < 40000) {
      ++attempts;
      auto g = report::random_grading(rng);
      if (!g) continue;
      if (!check(*g)) return false;
      ++done;
    }
    return done == 200;
  });

  // 4. iterated crossed products at finite scale
  run(4, "section algebra = groupoid algebra on shipped gradings", 60.0, [] {
    for (const auto& g : shipped_gradings()) {
      auto f = cstar::fell_bundle_from_grading(g);
      auto sec = cstar::section_algebra(f);
      if (sec.dim != g.l.g1().size()) return false;
      if (cstar::wedderburn_blocks(sec.algebra).block_sizes !=
          cstar::wedderburn_blocks(cstar::groupoid_algebra(g.l)).block_sizes)
        return false;
      if (!sec.unit_fiber_embeds) return false;
    }
    return true;
  });

  // 5. kernel of the summing map
  run(5, "inclusion relations span the summing-map kernel", 10.0, [] {
    auto k = cstar::e_map_kernel(examples::gm_s3_grading());
    if (k.kernel_dim != 2 || !k.generators_span) return false;
    auto k9 = cstar::e_map_kernel(cstar::verify_twisted_action_s9().bundle);
    if (k9.kernel_dim != 8 || !k9.generators_span) return false;
    for (const auto& g : shipped_gradings()) {
      auto kk = cstar::e_map_kernel(g);
      int total = 0;
      for (const auto& b : g.grading) total += b.count();
      if (kk.kernel_dim != total - g.l.g1().size()) return false;
      if (!kk.generators_span) return false;
      auto kb = cstar::e_map_kernel(cstar::fell_bundle_from_grading(g));
      if (kb.kernel_dim != kk.kernel_dim || !kb.generators_span) return false;
    }
    return true;
  });

  // 6. desingularized translation actions are basic with the right algebra
  run(6, "translation actions desingularize to covers of the object space",
      60.0, [] {
        for (const auto& m : wide_models()) {
          auto wide = isg::is_wide(m.s, m.f, m.h);
          if (!wide.wide) return false;
          auto act = examples::translation_action(m.h, m.s, m.f);
          auto res = action::desingularize(act, m.cover);
          if (!res.graded.l.predicates().basic) return false;
          auto orb = groupoid::orbit_space(res.graded.l);
          if (!orb.space.homeomorphic_to(m.h.g0())) return false;
          auto alg = cstar::groupoid_algebra(res.graded.l);
          auto functions =
              cstar::groupoid_algebra(groupoid::space_groupoid(m.h.g0()));
          if (!cstar::morita_equivalent(alg, functions)) return false;
          if (static_cast<int>(cstar::wedderburn_blocks(alg).block_sizes.size()) !=
              m.h.g0().size())
            return false;
        }
        return true;
      });

  // 7. inclusion and involution coherence on all fixture actions
  run(7, "involution and inclusion coherence", 30.0, [] {
    for (const auto& g : shipped_gradings()) {
      action::SAction a = action::action_from_grading(g);
      auto o = action::derive_order_structure(a);
      const auto& s = a.s();
      for (int t = 0; t < s.size(); ++t) {
        int ts = s.star(t);
        for (int xi = 0; xi < a.space(t).size(); ++xi) {
          int xs = o.star[t][xi];
          // x x* x = x
          if (a.mu(s.mult(t, ts), t, a.mu(t, ts, xi, xs), xi) != xi) return false;
          // x x* is the unit at r(x)
          if (o.kappa[s.mult(t, ts)][a.mu(t, ts, xi, xs)] !=
              a.base().unit(a.r(t)(xi)))
            return false;
        }
        for (int u = 0; u < s.size(); ++u)
          for (int xi = 0; xi < a.space(t).size(); ++xi)
            for (int yi = 0; yi < a.space(u).size(); ++yi) {
              if (a.src(t)(xi) != a.r(u)(yi)) continue;
              if (o.star[s.mult(t, u)][a.mu(t, u, xi, yi)] !=
                  a.mu(s.star(u), s.star(t), o.star[u][yi], o.star[t][xi]))
                return false;
            }
      }
      // j composition and star-compatibility run inside the derivation;
      // the diagrams were checked pointwise there
    }
    return true;
  });

  // 8. duality oracle on small fixtures
  run(8, "duality oracle by brute-force enumeration", 120.0, [] {
    report::Options opt;
    opt.max_size = 12;
    auto rep = report::run_peq_suite(opt);
    for (const auto& e : rep.entries)
      if (!e.pass) return false;
    // idempotent trivializations of the idempotent slices
    for (const auto& g : shipped_gradings()) {
      action::SAction a = action::action_from_grading(g);
      for (int e : a.s().idempotents()) {
        auto pe = a.as_peq(e);
        if (pe.space().size() > 12) continue;
        auto cc = bibundle::compose(pe, pe);
        std::vector<int> mu(cc.composite.space().size(), -1);
        for (int x = 0; x < pe.space().size(); ++x)
          for (int y = 0; y < pe.space().size(); ++y)
            if (cc.cls[x][y] >= 0) mu[cc.cls[x][y]] = a.mu(e, e, x, y);
        auto triv = bibundle::idempotent_trivialize(pe, cc, mu);
        if (triv.invariant_open != pe.range_subset()) return false;
      }
    }
    return true;
  });

  // 9. wide and model checks
  run(9, "wide subsemigroups and the bisection-grading extension", 10.0, [] {
    groupoid::FinGroupoid gm = examples::gm();
    const auto& g1 = gm.g1();
    Bitset one(3), e(3), g(3);
    one.set(g1.index("1c"));
    one.set(g1.index("1o"));
    e.set(g1.index("1o"));
    g.set(g1.index("1o"));
    g.set(g1.index("g-"));
    if (!isg::is_wide(examples::s3(), {one, e, g}, gm).wide) return false;
    if (isg::is_wide(examples::z2_group(), {one, g}, gm).wide) return false;

    auto bis = isg::bisections(gm);
    isg::SActionOnSpace hat;
    hat.s = bis.semigroup;
    hat.z = gm.g0();
    for (const auto& b : bis.bisection) {
      isg::PartialHomeo t;
      t.domain = Bitset(2);
      t.value.assign(2, -1);
      b.for_each([&](int arr) {
        t.domain.set(gm.s()(arr));
        t.value[gm.s()(arr)] = gm.r()(arr);
      });
      hat.theta.push_back(t);
    }
    hat.verify();
    std::vector<int> phi = {bis.index_of(one), bis.index_of(e), bis.index_of(g)};
    if (!isg::z_isomorphism_check(examples::s3(), phi, hat).ok) return false;

    action::SAction a = action::action_on_space_groupoid(examples::s3_on_sigma());
    auto orb = groupoid::orbit_space(a.base());
    std::vector<int> psi_v(2);
    for (int i = 0; i < 2; ++i) {
      const std::string& nm = orb.space.point(i);
      psi_v[i] = gm.g0().index(nm.substr(1, nm.size() - 2));
    }
    fintop::CMap psi(orb.space, gm.g0(), psi_v);
    std::vector<int> phi_s3(3);
    phi_s3[a.s().index("1")] = bis.index_of(one);
    phi_s3[a.s().index("e")] = bis.index_of(e);
    phi_s3[a.s().index("g")] = bis.index_of(g);
    auto ext = action::extend_grading_to_bisections(a, gm, phi_s3, psi);
    // exactly the four slices of the bisection semigroup
    auto tr = action::transformation_groupoid(a);
    if (ext.graded.s.size() != 4) return false;
    for (int t = 0; t < 3; ++t)
      if (ext.graded.grading[phi_s3[t]] != tr.graded.grading[t]) return false;
    Bitset empty_slice = ext.graded.grading[ext.bis.index_of(Bitset(3))];
    return empty_slice.none();
  });

  // 10. topological predicate suite
  run(10, "non-Hausdorff predicate suite", 30.0, [] {
    fintop::FinSpace sig = examples::sierpinski();
    fintop::FinSpace sq = fintop::product(sig, sig);
    Bitset diag(4);
    for (int i = 0; i < 2; ++i) diag.set(i * 2 + i);
    if (sig.locally_hausdorff()) return false;
    if (sq.locally_closed(diag) != sig.locally_hausdorff()) return false;

    // covering groupoids are basic with orbit space the codomain
    std::vector<fintop::CMap> covers;
    covers.push_back(examples::cech3().cover_map);
    covers.push_back(fintop::CMap::identity(examples::d3()));
    covers.push_back(fintop::CMap(
        examples::d2(), fintop::FinSpace::discrete({"*"}), std::vector<int>{0, 0}));
    for (const auto& f : covers) {
      auto g = groupoid::covering_groupoid(f);
      if (!g.predicates().basic) return false;
      if (!groupoid::orbit_space(g).space.homeomorphic_to(f.cod())) return false;
    }

    // free + proper implies basic when the object space is Hausdorff
    std::vector<groupoid::FinGroupoid> fixtures = {
        examples::p2(), examples::z4(), examples::cech3().groupoid,
        groupoid::space_groupoid(examples::d3()), examples::gm()};
    for (const auto& g : fixtures) {
      if (!g.g0().hausdorff()) continue;
      auto p = g.predicates();
      if (p.free && p.proper && !p.basic) return false;
      if (p.free && p.basic &&
          groupoid::orbit_space(g).space.hausdorff() != p.proper)
        return false;
    }
    return true;
  });

  if (failures == 0) {
    std::cout << "all acceptance criteria hold\n";
    return 0;
  }
  std::cout << failures << " criteria failed\n";
  return 1;
}
