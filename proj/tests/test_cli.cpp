#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("PEQ_CLI_BIN");
  REQUIRE(b != nullptr);
  return b;
}

int run(const std::string& args) {
  std::string cmd = bin() + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("peqcli-" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("examples emit fixtures that re-validate") {
  fs::path d = fresh_dir("examples");
  CHECK(run("example germ-sigma --out " + d.string()) == 0);
  CHECK(run("example section9 --out " + d.string()) == 0);
  CHECK(run("example pair --out " + d.string()) == 0);
  std::string files;
  for (const auto& e : fs::directory_iterator(d)) files += " " + e.path().string();
  CHECK(run("validate" + files) == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
  REQUIRE(run("example germ-sigma --out " + d1.string()) == 0);
  REQUIRE(run("example germ-sigma --out " + d2.string()) == 0);
  for (const auto& e : fs::directory_iterator(d1)) {
    fs::path other = d2 / e.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(e.path()) == slurp(other));
  }
}

TEST_CASE("build pipelines") {
  fs::path d = fresh_dir("build");
  CHECK(run("build germ --action s3-on-sigma --out " + d.string()) == 0);
  CHECK(run("validate " + (d / "germ.json").string()) == 0);
  CHECK(run("build compose --left swap-d2 --right swap-d2 --out " + d.string()) ==
        0);
  CHECK(run("build fell --grading gm-s3 --out " + d.string()) == 0);
  CHECK(run("build section --bundle s9 --out " + d.string()) == 0);
  CHECK(run("build cech --space sigma --cover \"o;c,o\" --out " + d.string()) == 0);
  CHECK(run("build dual --bibundle swap-d2 --out " + d.string()) == 0);
  std::string files;
  for (const auto& e : fs::directory_iterator(d)) files += " " + e.path().string();
  CHECK(run("validate" + files) == 0);
}

TEST_CASE("exit codes distinguish failure kinds") {
  // usage errors
  CHECK(run("validate") == 2);
  CHECK(run("example unknown-name") == 2);
  // verification failure: a corrupted fixture file
  fs::path d = fresh_dir("corrupt");
  std::ofstream bad(d / "bad.json");
  bad << R"({"kind":"space","points":["a","b"],"opens":[["a"],["a","b"]]})";
  bad.close();
  CHECK(run("validate " + (d / "bad.json").string()) == 1);
  std::ofstream garbled(d / "garbled.json");
  garbled << "{not json";
  garbled.close();
  CHECK(run("validate " + (d / "garbled.json").string()) == 1);
}

TEST_CASE("report suites run clean") {
  CHECK(run("report fintop") == 0);
  CHECK(run("report peq --max-size 10") == 0);
}
