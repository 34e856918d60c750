// Command-line front end: fixture validation, constructions, built-in
// example generators, and the invariant-suite reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "peq/examples.hpp"
#include "peq/json_io.hpp"
#include "peq/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace peq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw AxiomError("ParseError", "cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw AxiomError("ParseError", path + ": " + e.what());
  }
  return j;
}

// built-in fixtures addressable by name from build commands
json builtin_fixture(const std::string& name) {
  if (name == "sigma") return io::space_to_json(examples::sierpinski());
  if (name == "d2") return io::space_to_json(examples::d2());
  if (name == "gm") return io::groupoid_to_json(examples::gm());
  if (name == "p2") return io::groupoid_to_json(examples::p2());
  if (name == "z4") return io::groupoid_to_json(examples::z4());
  if (name == "cech3") return io::groupoid_to_json(examples::cech3().groupoid);
  if (name == "s3") return io::semigroup_to_json(examples::s3());
  if (name == "s3-on-sigma")
    return io::space_action_to_json(examples::s3_on_sigma());
  if (name == "gm-s3") return io::grading_to_json(examples::gm_s3_grading());
  if (name == "z4-z2") return io::grading_to_json(examples::z4_z2_grading());
  if (name == "s9")
    return io::fell_bundle_to_json(cstar::verify_twisted_action_s9().bundle);
  if (name == "swap-d2") {
    isg::PartialHomeo swap;
    swap.domain = Bitset::full(2);
    swap.value = {1, 0};
    return io::bibundle_to_json(bibundle::from_partial_homeo(examples::d2(), swap));
  }
  throw AxiomError("DanglingReference", name);
}

json load_ref(const std::string& ref) {
  if (fs::exists(ref)) return load_file(ref);
  return builtin_fixture(ref);
}

void write_fixture(const std::string& out_dir, const std::string& name,
                   const json& j) {
  fs::create_directories(out_dir);
  std::string path = (fs::path(out_dir) / (name + ".json")).string();
  std::ofstream out(path, std::ios::binary);
  out << io::dump_canonical(j);
  std::cout << "wrote " << path << "\n";
}

std::vector<Bitset> parse_cover(const fintop::FinSpace& z, const std::string& text) {
  std::vector<Bitset> cover;
  Bitset current(z.size());
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) {
      current.set(z.index(token));
      token.clear();
    }
  };
  for (char c : text) {
    if (c == ',') {
      flush_token();
    } else if (c == ';') {
      flush_token();
      cover.push_back(current);
      current = Bitset(z.size());
    } else {
      token += c;
    }
  }
  flush_token();
  cover.push_back(current);
  return cover;
}

int cmd_validate(const std::vector<std::string>& paths) {
  if (paths.empty()) {
    std::cerr << "usage: peq validate FILE...\n";
    return kExitUsage;
  }
  bool all_ok = true;
  for (const auto& p : paths) {
    try {
      std::string summary = io::validate_fixture(load_file(p));
      std::cout << "[PASS] " << p << ": " << summary << "\n";
    } catch (const AxiomError& e) {
      std::cout << "[FAIL] " << p << ": " << e.what() << "\n";
      all_ok = false;
    }
  }
  return all_ok ? kExitOk : kExitFail;
}

int cmd_example(const std::string& name, const std::string& out_dir) {
  if (name == "section9") {
    write_fixture(out_dir, "s3", io::semigroup_to_json(examples::s3()));
    auto rep = cstar::verify_twisted_action_s9();
    write_fixture(out_dir, "s9-bundle", io::fell_bundle_to_json(rep.bundle));
    auto sec = cstar::section_algebra(rep.bundle);
    write_fixture(out_dir, "s9-section", io::algebra_to_json(sec.algebra));
    json report;
    report["kind"] = "report";
    report["twisted_action"] = {{"dims_ok", rep.dims_ok},
                                {"u_a_equals_a_u", rep.a_g_two_sided},
                                {"intersection_is_ideal", rep.intersection_ok},
                                {"sum_is_ambient", rep.sum_ok},
                                {"alpha_order_two", rep.alpha_order_two},
                                {"alpha_not_inner", rep.alpha_not_inner},
                                {"u_multiplier_of_ideal", rep.u_multiplier_of_ideal},
                                {"cocycle_identities", rep.cocycle_ok},
                                {"sieben_condition_fails", rep.sieben_fails},
                                {"bundle_matches", rep.bundle_matches},
                                {"section_dim", rep.section_dim},
                                {"section_blocks", rep.section_blocks}};
    write_fixture(out_dir, "s9-report", report);
    return rep.all_ok() ? kExitOk : kExitFail;
  }
  if (name == "germ-sigma") {
    write_fixture(out_dir, "sigma", io::space_to_json(examples::sierpinski()));
    write_fixture(out_dir, "s3-on-sigma",
                  io::space_action_to_json(examples::s3_on_sigma()));
    auto germ = action::germ_groupoid(examples::s3_on_sigma());
    write_fixture(out_dir, "gm", io::groupoid_to_json(germ.graded.l));
    write_fixture(out_dir, "gm-grading", io::grading_to_json(germ.graded));
    return kExitOk;
  }
  if (name == "z4") {
    write_fixture(out_dir, "z4", io::groupoid_to_json(examples::z4()));
    write_fixture(out_dir, "z4-z2", io::grading_to_json(examples::z4_z2_grading()));
    return kExitOk;
  }
  if (name == "cech3") {
    auto c = examples::cech3();
    write_fixture(out_dir, "d3", io::space_to_json(examples::d3()));
    write_fixture(out_dir, "cech3", io::groupoid_to_json(c.groupoid));
    write_fixture(out_dir, "cech3-cover-map", io::cmap_to_json(c.cover_map));
    return kExitOk;
  }
  if (name == "pair") {
    write_fixture(out_dir, "p2", io::groupoid_to_json(examples::p2()));
    auto bis = isg::bisections(examples::p2());
    write_fixture(out_dir, "p2-bisections", io::semigroup_to_json(bis.semigroup));
    return kExitOk;
  }
  std::cerr << "UnknownExample: " << name << "\n";
  return kExitUsage;
}

int cmd_build(const std::string& kind, const std::string& arg1,
              const std::string& arg2, const std::string& cover_text,
              bool require_global, const std::string& out_dir) {
  if (kind == "transformation") {
    auto a = io::action_from_json(load_ref(arg1));
    auto tr = action::transformation_groupoid(a);
    write_fixture(out_dir, "transformation", io::grading_to_json(tr.graded));
  } else if (kind == "germ") {
    auto a = io::space_action_from_json(load_ref(arg1));
    auto germ = action::germ_groupoid(a);
    write_fixture(out_dir, "germ", io::grading_to_json(germ.graded));
  } else if (kind == "cech") {
    auto z = io::space_from_json(load_ref(arg1));
    auto res = groupoid::cech_groupoid(z, parse_cover(z, cover_text));
    write_fixture(out_dir, "cech", io::groupoid_to_json(res.groupoid));
  } else if (kind == "covering") {
    auto f = io::cmap_from_json(load_ref(arg1));
    write_fixture(out_dir, "covering",
                  io::groupoid_to_json(groupoid::covering_groupoid(f)));
  } else if (kind == "linking") {
    auto x = io::bibundle_from_json(load_ref(arg1));
    auto link = bibundle::linking_groupoid(x, require_global);
    write_fixture(out_dir, "linking", io::groupoid_to_json(link.groupoid));
  } else if (kind == "compose") {
    auto x = io::bibundle_from_json(load_ref(arg1));
    auto y = io::bibundle_from_json(load_ref(arg2));
    auto c = bibundle::compose(x, y);
    write_fixture(out_dir, "compose", io::bibundle_to_json(c.composite));
  } else if (kind == "dual") {
    auto x = io::bibundle_from_json(load_ref(arg1));
    write_fixture(out_dir, "dual", io::bibundle_to_json(bibundle::dual(x)));
  } else if (kind == "fell") {
    auto g = io::grading_from_json(load_ref(arg1));
    write_fixture(out_dir, "fell",
                  io::fell_bundle_to_json(cstar::fell_bundle_from_grading(g)));
  } else if (kind == "section") {
    auto f = io::fell_bundle_from_json(load_ref(arg1));
    auto sec = cstar::section_algebra(f);
    write_fixture(out_dir, "section", io::algebra_to_json(sec.algebra));
    auto blocks = cstar::wedderburn_blocks(sec.algebra);
    std::cout << "section dimension " << sec.dim << ", blocks {";
    for (std::size_t i = 0; i < blocks.block_sizes.size(); ++i)
      std::cout << (i ? "," : "") << blocks.block_sizes[i];
    std::cout << "}\n";
  } else if (kind == "desingularize") {
    auto a = io::space_action_from_json(load_ref(arg1));
    auto res = action::desingularize(a, parse_cover(a.z, cover_text));
    write_fixture(out_dir, "desingularize", io::grading_to_json(res.graded));
  } else {
    std::cerr << "unknown build kind: " << kind << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_report(const std::string& suite, const report::Options& opt,
               const std::string& format) {
  report::Report rep;
  if (suite == "all")
    rep = report::run_all(opt);
  else if (suite == "fintop")
    rep = report::run_fintop_suite(opt);
  else if (suite == "peq")
    rep = report::run_peq_suite(opt);
  else if (suite == "action")
    rep = report::run_action_suite(opt);
  else if (suite == "cstar")
    rep = report::run_cstar_suite(opt);
  else {
    std::cerr << "unknown suite: " << suite << "\n";
    return kExitUsage;
  }
  if (format == "json") {
    json j = json::array();
    for (const auto& e : rep.entries)
      j.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& e : rep.entries)
      std::cout << (e.pass ? "[PASS] " : "[FAIL] ") << e.name
                << (e.detail.empty() ? "" : " -- " + e.detail) << "\n";
  }
  return rep.all_pass() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite groupoids, partial equivalences, and Fell bundles"};
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "verify fixture files");
  validate->add_option("files", validate_paths, "fixture files");

  std::string example_name, out_dir = ".";
  auto* example = app.add_subcommand("example", "emit built-in fixtures");
  example->add_option("name", example_name,
                      "section9 | germ-sigma | z4 | cech3 | pair")
      ->required();
  example->add_option("--out", out_dir, "output directory");

  std::string build_kind, arg_main, arg_right, cover_text;
  bool require_global = false;
  auto* build = app.add_subcommand("build", "run a construction");
  build->add_option("kind", build_kind,
                    "transformation | germ | cech | covering | linking | "
                    "compose | dual | fell | section | desingularize")
      ->required();
  build->add_option("--action,--grading,--bundle,--space,--map,--bibundle,--left,"
                    "--input",
                    arg_main, "main input fixture (file or builtin name)");
  build->add_option("--right", arg_right, "right operand for compose");
  build->add_option("--cover", cover_text, "cover as a;b,c;d lists");
  build->add_flag("--require-global", require_global, "fail on partial input");
  build->add_option("--out", out_dir, "output directory");

  std::string suite = "all", format = "text";
  report::Options opt;
  auto* rep = app.add_subcommand("report", "run invariant suites");
  rep->add_option("suite", suite, "all | fintop | peq | action | cstar");
  rep->add_option("--format", format, "json | text");
  rep->add_option("--max-size", opt.max_size, "enumeration bound");
  rep->add_option("--seed", opt.seed, "random fixture seed");
  rep->add_option("--count", opt.random_gradings, "random grading count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_paths);
    if (example->parsed()) return cmd_example(example_name, out_dir);
    if (build->parsed())
      return cmd_build(build_kind, arg_main, arg_right, cover_text,
                       require_global, out_dir);
    if (rep->parsed()) return cmd_report(suite, opt, format);
  } catch (const AxiomError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
