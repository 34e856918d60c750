#ifndef PEQ_REPORT_HPP
#define PEQ_REPORT_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "peq/action.hpp"
#include "peq/bibundle.hpp"
#include "peq/cstar.hpp"
#include "peq/examples.hpp"

namespace peq {
namespace report {

struct Entry {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<Entry> entries;

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  void add(const std::string& name, bool pass, const std::string& detail = "") {
    entries.push_back({name, pass, detail});
  }
  // runs the callable, recording an exception as a failure
  void check(const std::string& name, const std::function<bool()>& body);
  void merge(const Report& o) {
    entries.insert(entries.end(), o.entries.begin(), o.entries.end());
  }
};

struct Options {
  int max_size = 12;      // bibundle enumeration bound
  unsigned seed = 7;
  int random_spaces = 40;
  int random_gradings = 50;
};

Report run_fintop_suite(const Options& opt);
Report run_peq_suite(const Options& opt);
Report run_action_suite(const Options& opt);
Report run_cstar_suite(const Options& opt);
Report run_all(const Options& opt);

fintop::FinSpace random_space(std::mt19937_64& rng, int max_points);
std::optional<action::SGradedGroupoid> random_grading(std::mt19937_64& rng);

// the Morita equivalence bibundle between covering groupoids of two open
// surjections onto the same base
bibundle::PartialEquivalence cover_equivalence(const fintop::CMap& f1,
                                               const fintop::CMap& f2);

}  // namespace report
}  // namespace peq

#endif
