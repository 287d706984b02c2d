#include "pytrim/error.hpp"
#include "pytrim/eval_harness.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv) {
  CLI::App app{"Replay recorded dependency removals and measure how many files are reproduced."};
  std::string cases_dir;
  bool json = false;
  std::vector<std::string> only;
  app.add_option("cases", cases_dir, "Directory of cases (<id>/pre, <id>/post, <id>/case.json)")->required();
  app.add_flag("--json", json, "Machine-readable output");
  app.add_option("--case", only, "Run only these case ids");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    std::vector<pytrim::eval::ReplicationResult> results;
    for (const auto &c : pytrim::eval::load_cases(cases_dir)) {
      if (!only.empty() && std::find(only.begin(), only.end(), c.case_id) == only.end())
        continue;
      results.push_back(pytrim::eval::replicate(c));
    }
    const auto summary = pytrim::eval::summarize(results);
    if (json)
      std::cout << pytrim::eval::render_summary_json(summary, results);
    else
      std::cout << pytrim::eval::render_summary_markdown(summary, results);
    return summary.mismatched == 0 ? 0 : 1;
  } catch (const pytrim::Error &e) {
    std::cerr << "pytrim-eval: " << e.what() << "\n";
    return e.kind() == pytrim::ErrorKind::CaseSetupError ? 2 : 3;
  }
}
