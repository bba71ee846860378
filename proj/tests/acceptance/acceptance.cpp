// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any selected criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "superstar/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  superstar::SuiteConfig cfg;
  bool verbose = false;
  app.add_option("--criterion,-c", ids, "criteria to run (default: all)")->check(CLI::Range(1, superstar::kCriterionCount));
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--strict", cfg.strict, "larger randomized samples");
  app.add_flag("--verbose,-v", verbose, "print every check");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int i = 1; i <= superstar::kCriterionCount; ++i) ids.push_back(i);

  bool ok = true;
  for (int id : ids) {
    superstar::CriterionReport r;
    try {
      r = superstar::run_criterion(id, cfg);
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion " << id << ": exception: " << e.what() << std::endl;
      ok = false;
      continue;
    }
    std::cout << superstar::pass_line(r) << std::endl;
    if (verbose)
      for (const auto& c : r.checks)
        std::cout << "    " << (c.pass() ? "ok   " : "FAIL ") << c.name << " = " << c.value << (c.upper ? " < " : " > ")
                  << c.bound << "\n";
    ok = ok && r.passed();
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
