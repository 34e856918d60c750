#include "peq/examples.hpp"

namespace peq {
namespace examples {

using fintop::CMap;

FinSpace sierpinski() {
  return FinSpace::from_opens({"c", "o"}, {{}, {"o"}, {"c", "o"}});
}

FinSpace d2() { return FinSpace::discrete({"a", "b"}); }

FinSpace d3() { return FinSpace::discrete({"a", "b", "c"}); }

FinGroupoid gm() {
  FinSpace g0 = sierpinski();
  FinSpace g1 = FinSpace::from_opens(
      {"1c", "1o", "g-"},
      {{}, {"1o"}, {"1c", "1o"}, {"1o", "g-"}, {"1c", "1o", "g-"}});
  std::map<std::string, std::string> anchor = {{"1c", "c"}, {"1o", "o"}, {"g-", "c"}};
  CMap r(g1, g0, anchor), s(g1, g0, anchor);
  const int i1c = g1.index("1c"), i1o = g1.index("1o"), ig = g1.index("g-");
  std::vector<std::vector<int>> mult(3, std::vector<int>(3, -1));
  mult[i1c][i1c] = i1c;
  mult[i1c][ig] = ig;
  mult[ig][i1c] = ig;
  mult[ig][ig] = i1c;
  mult[i1o][i1o] = i1o;
  std::vector<int> unit(2);
  unit[g0.index("c")] = i1c;
  unit[g0.index("o")] = i1o;
  std::vector<int> inv = {i1c, i1o, ig};
  return FinGroupoid::verify(g0, g1, r, s, mult, unit, inv);
}

InvSemigroup s3() {
  return InvSemigroup::verify({"1", "e", "g"}, {{0, 1, 2}, {1, 1, 1}, {2, 1, 0}});
}

InvSemigroup z2_group() {
  return InvSemigroup::verify({"1", "g"}, {{0, 1}, {1, 0}});
}

FinGroupoid z4() { return groupoid::cyclic_group(4); }

FinGroupoid p2() { return groupoid::pair_groupoid(d2()); }

groupoid::CechResult cech3() {
  FinSpace z = d3();
  Bitset u1(3), u2(3);
  u1.set(z.index("a"));
  u1.set(z.index("b"));
  u2.set(z.index("b"));
  u2.set(z.index("c"));
  return groupoid::cech_groupoid(z, {u1, u2});
}

SActionOnSpace s3_on_sigma() {
  SActionOnSpace a;
  a.s = s3();
  a.z = sierpinski();
  Bitset full = Bitset::full(2);
  Bitset open_o(2);
  open_o.set(a.z.index("o"));
  a.theta.resize(3);
  a.theta[a.s.index("1")] = isg::PartialHomeo::identity_on(a.z, full);
  a.theta[a.s.index("e")] = isg::PartialHomeo::identity_on(a.z, open_o);
  a.theta[a.s.index("g")] = isg::PartialHomeo::identity_on(a.z, full);
  a.verify();
  return a;
}

SGradedGroupoid gm_s3_grading() {
  SGradedGroupoid g;
  g.s = s3();
  g.l = gm();
  const auto& arr = g.l.g1();
  g.grading.assign(3, Bitset(3));
  g.grading[g.s.index("1")].set(arr.index("1c"));
  g.grading[g.s.index("1")].set(arr.index("1o"));
  g.grading[g.s.index("e")].set(arr.index("1o"));
  g.grading[g.s.index("g")].set(arr.index("1o"));
  g.grading[g.s.index("g")].set(arr.index("g-"));
  g.verify();
  return g;
}

SGradedGroupoid z4_z2_grading() {
  FinGroupoid l = z4();
  std::vector<int> pi(4);
  for (int k = 0; k < 4; ++k) pi[k] = k % 2;
  auto res = action::grading_from_cocycle(l, z2_group(), pi);
  return res.graded;
}

SGradedGroupoid trivial_grading(const FinGroupoid& g) {
  SGradedGroupoid gg;
  gg.s = InvSemigroup::verify({"1"}, {{0}});
  gg.l = g;
  gg.grading.assign(1, Bitset::full(g.g1().size()));
  gg.verify();
  return gg;
}

SActionOnSpace translation_action(const FinGroupoid& h, const InvSemigroup& s,
                                  const std::vector<Bitset>& f) {
  SActionOnSpace a;
  a.s = s;
  a.z = h.g1();
  a.theta.resize(s.size());
  for (int t = 0; t < s.size(); ++t) {
    isg::PartialHomeo th;
    th.domain = Bitset(h.g1().size());
    th.value.assign(h.g1().size(), -1);
    f[t].for_each([&](int g) {
      for (int z = 0; z < h.g1().size(); ++z)
        if (h.s()(g) == h.r()(z)) {
          th.domain.set(z);
          th.value[z] = h.mult(g, z);
        }
    });
    a.theta[t] = th;
  }
  a.verify();
  return a;
}

}  // namespace examples
}  // namespace peq
