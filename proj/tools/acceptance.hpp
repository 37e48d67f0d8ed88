#ifndef ZHU_TOOLS_ACCEPTANCE_HPP
#define ZHU_TOOLS_ACCEPTANCE_HPP

#include "zhu/io.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace zhu::acceptance {

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  std::size_t checks = 0;
  double seconds = 0;
  double budget_seconds = 0;
  /// First few failure messages.
  std::vector<std::string> failures;
  /// Windowed dimensions by field, then by table name.
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> dims;
  /// Q versus GF(7) dimension differences (criterion 12 only).
  std::vector<std::string> divergences;
};

/// Runs the twelve criteria in order, calling `done` after each one.
std::vector<Criterion> run_all(const std::function<void(const Criterion&)>& done = {});

/// "PASS  3  Virasoro bracket  (1.20 s, 2401 checks)".
std::string summary_line(const Criterion& c);

Json to_json(const Criterion& c, bool with_timings);

}  // namespace zhu::acceptance

#endif  // ZHU_TOOLS_ACCEPTANCE_HPP
