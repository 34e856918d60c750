#include "peq/json_io.hpp"

#include <algorithm>

namespace peq {
namespace io {

using peq::Bitset;
using fintop::CMap;
using fintop::FinSpace;
using groupoid::FinGroupoid;
using isg::InvSemigroup;

namespace {

json subset_to_json(const FinSpace& x, const Bitset& b) {
  std::vector<std::string> names;
  b.for_each([&](int i) { names.push_back(x.point(i)); });
  std::sort(names.begin(), names.end());
  return json(names);
}

Bitset subset_from_json(const FinSpace& x, const json& j) {
  Bitset b(x.size());
  for (const auto& p : j) b.set(x.index(p.get<std::string>()));
  return b;
}

json assignment_to_json(const FinSpace& dom, const FinSpace& cod,
                        const std::vector<int>& v) {
  json j = json::object();
  for (int i = 0; i < dom.size(); ++i) j[dom.point(i)] = cod.point(v[i]);
  return j;
}

std::vector<int> assignment_from_json(const FinSpace& dom, const FinSpace& cod,
                                      const json& j) {
  std::vector<int> v(dom.size(), -1);
  for (auto it = j.begin(); it != j.end(); ++it)
    v[dom.index(it.key())] = cod.index(it.value().get<std::string>());
  for (int i = 0; i < dom.size(); ++i)
    if (v[i] < 0) throw AxiomError("BadAssignment", dom.point(i));
  return v;
}

}  // namespace

json space_to_json(const FinSpace& x) {
  json j;
  j["kind"] = "space";
  std::vector<std::string> pts = x.points();
  std::sort(pts.begin(), pts.end());
  j["points"] = pts;
  std::vector<json> opens;
  for (const auto& o : x.opens()) opens.push_back(subset_to_json(x, o));
  std::sort(opens.begin(), opens.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  j["opens"] = opens;
  return j;
}

FinSpace space_from_json(const json& j) {
  std::vector<std::string> pts = j.at("points").get<std::vector<std::string>>();
  std::vector<std::vector<std::string>> opens;
  for (const auto& o : j.at("opens"))
    opens.push_back(o.get<std::vector<std::string>>());
  return FinSpace::from_opens(pts, opens);
}

json cmap_to_json(const CMap& f) {
  json j;
  j["kind"] = "cmap";
  j["dom"] = space_to_json(f.dom());
  j["cod"] = space_to_json(f.cod());
  j["map"] = assignment_to_json(f.dom(), f.cod(), f.assignment());
  return j;
}

CMap cmap_from_json(const json& j) {
  FinSpace dom = space_from_json(j.at("dom"));
  FinSpace cod = space_from_json(j.at("cod"));
  return CMap(dom, cod, assignment_from_json(dom, cod, j.at("map")));
}

json groupoid_to_json(const FinGroupoid& g) {
  json j;
  j["kind"] = "groupoid";
  j["g0"] = space_to_json(g.g0());
  j["g1"] = space_to_json(g.g1());
  j["r"] = assignment_to_json(g.g1(), g.g0(), g.r().assignment());
  j["s"] = assignment_to_json(g.g1(), g.g0(), g.s().assignment());
  std::vector<json> mult;
  for (int a = 0; a < g.g1().size(); ++a)
    for (int b = 0; b < g.g1().size(); ++b)
      if (g.mult(a, b) >= 0)
        mult.push_back(json::array({g.g1().point(a), g.g1().point(b),
                                    g.g1().point(g.mult(a, b))}));
  std::sort(mult.begin(), mult.end(),
            [](const json& a, const json& b) { return a.dump() < b.dump(); });
  j["mult"] = mult;
  json unit = json::object(), inv = json::object();
  for (int x = 0; x < g.g0().size(); ++x)
    unit[g.g0().point(x)] = g.g1().point(g.unit(x));
  for (int a = 0; a < g.g1().size(); ++a)
    inv[g.g1().point(a)] = g.g1().point(g.inv(a));
  j["unit"] = unit;
  j["inv"] = inv;
  return j;
}

FinGroupoid groupoid_from_json(const json& j) {
  FinSpace g0 = space_from_json(j.at("g0"));
  FinSpace g1 = space_from_json(j.at("g1"));
  const int n1 = g1.size();
  std::vector<std::vector<int>> mult(n1, std::vector<int>(n1, -1));
  for (const auto& row : j.at("mult"))
    mult[g1.index(row.at(0).get<std::string>())]
        [g1.index(row.at(1).get<std::string>())] =
            g1.index(row.at(2).get<std::string>());
  std::vector<int> unit(g0.size(), -1), inv(n1, -1);
  for (auto it = j.at("unit").begin(); it != j.at("unit").end(); ++it)
    unit[g0.index(it.key())] = g1.index(it.value().get<std::string>());
  for (auto it = j.at("inv").begin(); it != j.at("inv").end(); ++it)
    inv[g1.index(it.key())] = g1.index(it.value().get<std::string>());
  return FinGroupoid::verify(
      g0, g1, CMap(g1, g0, assignment_from_json(g1, g0, j.at("r"))),
      CMap(g1, g0, assignment_from_json(g1, g0, j.at("s"))), mult, unit, inv);
}

json semigroup_to_json(const InvSemigroup& s) {
  json j;
  j["kind"] = "semigroup";
  j["elements"] = s.elements();
  std::vector<std::vector<std::string>> table(s.size(),
                                              std::vector<std::string>(s.size()));
  for (int a = 0; a < s.size(); ++a)
    for (int b = 0; b < s.size(); ++b) table[a][b] = s.name(s.mult(a, b));
  j["table"] = table;
  return j;
}

InvSemigroup semigroup_from_json(const json& j) {
  std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < elems.size(); ++i) idx[elems[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> table(elems.size(), std::vector<int>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a)
    for (std::size_t b = 0; b < elems.size(); ++b)
      table[a][b] = idx.at(j.at("table").at(a).at(b).get<std::string>());
  return InvSemigroup::verify(elems, table);
}

json bibundle_to_json(const bibundle::PartialEquivalence& x) {
  json j;
  j["kind"] = "bibundle";
  j["left"] = groupoid_to_json(x.left());
  j["right"] = groupoid_to_json(x.right());
  j["space"] = space_to_json(x.space());
  j["r"] = assignment_to_json(x.space(), x.left().g0(), x.r().assignment());
  j["s"] = assignment_to_json(x.space(), x.right().g0(), x.s().assignment());
  std::vector<json> la, ra;
  for (int g = 0; g < x.left().g1().size(); ++g)
    for (int xi = 0; xi < x.space().size(); ++xi)
      if (x.left_act(g, xi) >= 0)
        la.push_back(json::array({x.left().g1().point(g), x.space().point(xi),
                                  x.space().point(x.left_act(g, xi))}));
  for (int xi = 0; xi < x.space().size(); ++xi)
    for (int h = 0; h < x.right().g1().size(); ++h)
      if (x.right_act(xi, h) >= 0)
        ra.push_back(json::array({x.space().point(xi), x.right().g1().point(h),
                                  x.space().point(x.right_act(xi, h))}));
  auto by_dump = [](const json& a, const json& b) { return a.dump() < b.dump(); };
  std::sort(la.begin(), la.end(), by_dump);
  std::sort(ra.begin(), ra.end(), by_dump);
  j["left_act"] = la;
  j["right_act"] = ra;
  return j;
}

bibundle::PartialEquivalence bibundle_from_json(const json& j) {
  FinGroupoid left = groupoid_from_json(j.at("left"));
  FinGroupoid right = groupoid_from_json(j.at("right"));
  FinSpace x = space_from_json(j.at("space"));
  std::vector<std::vector<int>> la(left.g1().size(),
                                   std::vector<int>(x.size(), -1));
  std::vector<std::vector<int>> ra(x.size(),
                                   std::vector<int>(right.g1().size(), -1));
  for (const auto& row : j.at("left_act"))
    la[left.g1().index(row.at(0).get<std::string>())]
        [x.index(row.at(1).get<std::string>())] =
            x.index(row.at(2).get<std::string>());
  for (const auto& row : j.at("right_act"))
    ra[x.index(row.at(0).get<std::string>())]
        [right.g1().index(row.at(1).get<std::string>())] =
            x.index(row.at(2).get<std::string>());
  return bibundle::PartialEquivalence::verify(
      left, right, x,
      CMap(x, left.g0(), assignment_from_json(x, left.g0(), j.at("r"))),
      CMap(x, right.g0(), assignment_from_json(x, right.g0(), j.at("s"))), la, ra);
}

json grading_to_json(const action::SGradedGroupoid& g) {
  json j;
  j["kind"] = "grading";
  j["semigroup"] = semigroup_to_json(g.s);
  j["groupoid"] = groupoid_to_json(g.l);
  json slices = json::object();
  for (int t = 0; t < g.s.size(); ++t)
    slices[g.s.name(t)] = subset_to_json(g.l.g1(), g.grading[t]);
  j["grading"] = slices;
  j["saturated"] = g.saturated;
  return j;
}

action::SGradedGroupoid grading_from_json(const json& j) {
  action::SGradedGroupoid g;
  g.s = semigroup_from_json(j.at("semigroup"));
  g.l = groupoid_from_json(j.at("groupoid"));
  g.grading.assign(g.s.size(), Bitset(g.l.g1().size()));
  for (auto it = j.at("grading").begin(); it != j.at("grading").end(); ++it)
    g.grading[g.s.index(it.key())] = subset_from_json(g.l.g1(), it.value());
  g.saturated = j.value("saturated", true);
  g.verify();
  return g;
}

json space_action_to_json(const isg::SActionOnSpace& a) {
  json j;
  j["kind"] = "space-action";
  j["semigroup"] = semigroup_to_json(a.s);
  j["space"] = space_to_json(a.z);
  json theta = json::object();
  for (int t = 0; t < a.s.size(); ++t) {
    json entry;
    entry["dom"] = subset_to_json(a.z, a.theta[t].domain);
    json map = json::object();
    a.theta[t].domain.for_each(
        [&](int z) { map[a.z.point(z)] = a.z.point(a.theta[t].value[z]); });
    entry["map"] = map;
    theta[a.s.name(t)] = entry;
  }
  j["theta"] = theta;
  return j;
}

isg::SActionOnSpace space_action_from_json(const json& j) {
  isg::SActionOnSpace a;
  a.s = semigroup_from_json(j.at("semigroup"));
  a.z = space_from_json(j.at("space"));
  a.theta.assign(a.s.size(), isg::PartialHomeo{Bitset(a.z.size()),
                                               std::vector<int>(a.z.size(), -1)});
  for (auto it = j.at("theta").begin(); it != j.at("theta").end(); ++it) {
    int t = a.s.index(it.key());
    a.theta[t].domain = subset_from_json(a.z, it.value().at("dom"));
    for (auto m = it.value().at("map").begin(); m != it.value().at("map").end(); ++m)
      a.theta[t].value[a.z.index(m.key())] = a.z.index(m.value().get<std::string>());
  }
  a.verify();
  return a;
}

json action_to_json(const action::SAction& a) {
  json j;
  j["kind"] = "action";
  j["semigroup"] = semigroup_to_json(a.s());
  j["base"] = groupoid_to_json(a.base());
  json spaces = json::object(), rr = json::object(), ss = json::object(),
       mu = json::object();
  for (int t = 0; t < a.s().size(); ++t) {
    spaces[a.s().name(t)] = space_to_json(a.space(t));
    rr[a.s().name(t)] =
        assignment_to_json(a.space(t), a.base().g0(), a.r(t).assignment());
    ss[a.s().name(t)] =
        assignment_to_json(a.space(t), a.base().g0(), a.src(t).assignment());
  }
  for (int t = 0; t < a.s().size(); ++t)
    for (int u = 0; u < a.s().size(); ++u) {
      std::vector<json> rows;
      for (int xi = 0; xi < a.space(t).size(); ++xi)
        for (int yi = 0; yi < a.space(u).size(); ++yi)
          if (a.mu(t, u, xi, yi) >= 0)
            rows.push_back(json::array(
                {a.space(t).point(xi), a.space(u).point(yi),
                 a.space(a.s().mult(t, u)).point(a.mu(t, u, xi, yi))}));
      mu[a.s().name(t) + "|" + a.s().name(u)] = rows;
    }
  j["spaces"] = spaces;
  j["r"] = rr;
  j["s"] = ss;
  j["mu"] = mu;
  return j;
}

action::SAction action_from_json(const json& j) {
  InvSemigroup s = semigroup_from_json(j.at("semigroup"));
  FinGroupoid base = groupoid_from_json(j.at("base"));
  std::vector<FinSpace> spaces(s.size());
  std::vector<CMap> rr(s.size()), ss(s.size());
  for (int t = 0; t < s.size(); ++t) {
    spaces[t] = space_from_json(j.at("spaces").at(s.name(t)));
    rr[t] = CMap(spaces[t], base.g0(),
                 assignment_from_json(spaces[t], base.g0(), j.at("r").at(s.name(t))));
    ss[t] = CMap(spaces[t], base.g0(),
                 assignment_from_json(spaces[t], base.g0(), j.at("s").at(s.name(t))));
  }
  std::vector<std::vector<std::vector<std::vector<int>>>> mu(
      s.size(), std::vector<std::vector<std::vector<int>>>(s.size()));
  for (int t = 0; t < s.size(); ++t)
    for (int u = 0; u < s.size(); ++u) {
      mu[t][u].assign(spaces[t].size(), std::vector<int>(spaces[u].size(), -1));
      const int tu = s.mult(t, u);
      for (const auto& row :
           j.at("mu").at(s.name(t) + "|" + s.name(u)))
        mu[t][u][spaces[t].index(row.at(0).get<std::string>())]
            [spaces[u].index(row.at(1).get<std::string>())] =
                spaces[tu].index(row.at(2).get<std::string>());
    }
  return action::SAction::verify(s, base, spaces, rr, ss, mu);
}

json algebra_to_json(const cstar::StarAlgebra& a) {
  json j;
  j["kind"] = "algebra";
  j["ambient"] = a.ambient();
  std::vector<json> basis;
  for (const auto& m : a.basis()) {
    std::vector<std::vector<std::string>> rows(a.ambient(),
                                               std::vector<std::string>(a.ambient()));
    for (int r = 0; r < a.ambient(); ++r)
      for (int c = 0; c < a.ambient(); ++c) rows[r][c] = m.at(r, c).str();
    basis.push_back(json(rows));
  }
  j["basis"] = basis;
  if (!a.labels().empty()) j["labels"] = a.labels();
  return j;
}

namespace {

cstar::Mat mat_from_json(int n, const json& j) {
  cstar::Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      m.at(r, c) = cstar::Scalar::parse(j.at(r).at(c).get<std::string>());
  return m;
}

}  // namespace

cstar::StarAlgebra algebra_from_json(const json& j) {
  const int n = j.at("ambient").get<int>();
  std::vector<cstar::Mat> basis;
  for (const auto& b : j.at("basis")) basis.push_back(mat_from_json(n, b));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return cstar::StarAlgebra::verify(n, basis, labels);
}

json fell_bundle_to_json(const cstar::FellBundleOverS& f) {
  json j;
  j["kind"] = "fell-bundle";
  j["semigroup"] = semigroup_to_json(f.s);
  j["ambient"] = f.ambient;
  j["saturated"] = f.saturated;
  json fibers = json::object();
  for (int t = 0; t < f.s.size(); ++t) {
    std::vector<json> mats;
    for (const auto& m : f.fiber[t].basis) {
      std::vector<std::vector<std::string>> rows(f.ambient,
                                                 std::vector<std::string>(f.ambient));
      for (int r = 0; r < f.ambient; ++r)
        for (int c = 0; c < f.ambient; ++c) rows[r][c] = m.at(r, c).str();
      mats.push_back(json(rows));
    }
    fibers[f.s.name(t)] = mats;
  }
  j["fibers"] = fibers;
  return j;
}

cstar::FellBundleOverS fell_bundle_from_json(const json& j) {
  cstar::FellBundleOverS f;
  f.s = semigroup_from_json(j.at("semigroup"));
  f.ambient = j.at("ambient").get<int>();
  f.saturated = j.value("saturated", true);
  f.fiber.resize(f.s.size());
  for (int t = 0; t < f.s.size(); ++t)
    for (const auto& b : j.at("fibers").at(f.s.name(t)))
      f.fiber[t].basis.push_back(mat_from_json(f.ambient, b));
  f.verify();
  return f;
}

std::string validate_fixture(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "space") {
    FinSpace x = space_from_json(j);
    auto p = fintop::hausdorff_predicates(x);
    return "space: " + std::to_string(x.size()) + " points, " +
           std::to_string(x.open_count()) + " opens, hausdorff:" +
           (p.hausdorff ? "yes" : "no") + " locally_hausdorff:" +
           (p.locally_hausdorff ? "yes" : "no");
  }
  if (kind == "cmap") {
    CMap f = cmap_from_json(j);
    auto p = f.predicates();
    return std::string("cmap: open:") + (p.open ? "yes" : "no") + " closed:" +
           (p.closed ? "yes" : "no") + " proper:" + (p.proper ? "yes" : "no") +
           " surjective:" + (p.surjective ? "yes" : "no") + " etale:" +
           (p.etale ? "yes" : "no");
  }
  if (kind == "groupoid") {
    FinGroupoid g = groupoid_from_json(j);
    auto p = g.predicates();
    return "groupoid: " + std::to_string(g.g0().size()) + " objects, " +
           std::to_string(g.g1().size()) + " arrows, etale:" +
           (p.etale ? "yes" : "no") + " basic:" + (p.basic ? "yes" : "no") +
           " proper:" + (p.proper ? "yes" : "no") + " locally_hausdorff:" +
           (g.g1().locally_hausdorff() ? "yes" : "no");
  }
  if (kind == "semigroup") {
    InvSemigroup s = semigroup_from_json(j);
    return "semigroup: " + std::to_string(s.size()) + " elements, " +
           std::to_string(s.idempotents().size()) + " idempotents";
  }
  if (kind == "bibundle") {
    auto x = bibundle_from_json(j);
    return std::string("bibundle: ") + std::to_string(x.space().size()) +
           " points, global:" + (x.global() ? "yes" : "no");
  }
  if (kind == "grading") {
    auto g = grading_from_json(j);
    return "grading: " + std::to_string(g.s.size()) + " slices on " +
           std::to_string(g.l.g1().size()) + " arrows, saturated:" +
           (g.saturated ? "yes" : "no");
  }
  if (kind == "space-action") {
    auto a = space_action_from_json(j);
    return "space-action: " + std::to_string(a.s.size()) + " elements on " +
           std::to_string(a.z.size()) + " points";
  }
  if (kind == "action") {
    auto a = action_from_json(j);
    return "action: |S| = " + std::to_string(a.s().size());
  }
  if (kind == "algebra") {
    auto a = algebra_from_json(j);
    return "algebra: dim " + std::to_string(a.dim()) + " in M_" +
           std::to_string(a.ambient());
  }
  if (kind == "fell-bundle") {
    auto f = fell_bundle_from_json(j);
    return "fell-bundle: over " + std::to_string(f.s.size()) + " elements";
  }
  if (kind == "report") return "report (not re-checked)";
  throw AxiomError("ParseError", "unknown kind " + kind);
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

}  // namespace io
}  // namespace peq
