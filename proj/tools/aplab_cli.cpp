// Command-line front end for the aplab shared library. Talks to the core
// exclusively through the C API in aplab.h.

#include <atomic>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "aplab.h"

namespace {

struct RunOptions {
  std::vector<std::string> scenarios;
  std::string out_dir;
  std::string formats = "json";
  std::string grid;
  std::vector<std::string> tols;
  bool list_builtins = false;
  int jobs = 1;
};

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

struct ScenarioHandle {
  aplab_scenario* p = nullptr;
  ~ScenarioHandle() { aplab_scenario_free(p); }
};

struct ReportHandle {
  aplab_report* p = nullptr;
  ~ReportHandle() { aplab_report_free(p); }
};

/// 0 = checks pass, 1 = a check failed, 2 = usage/config error
int run_one(const RunOptions& opt, const std::string& spec, std::string* stdout_text) {
  ScenarioHandle sc;
  aplab_status rc;
  const std::string builtin_prefix = "builtin:";
  if (spec.rfind(builtin_prefix, 0) == 0)
    rc = aplab_scenario_builtin(spec.substr(builtin_prefix.size()).c_str(), &sc.p);
  else
    rc = aplab_scenario_load_file(spec.c_str(), &sc.p);
  if (rc != APLAB_OK) {
    std::cerr << "error loading '" << spec << "': " << aplab_last_error() << "\n";
    return 2;
  }

  if (!opt.grid.empty()) {
    int nb = 0, np = 0;
    if (std::sscanf(opt.grid.c_str(), "%d,%d", &nb, &np) != 2)
      return fail_usage("--grid expects N,M");
    if (aplab_scenario_set_grid(sc.p, nb, np) != APLAB_OK)
      return fail_usage(aplab_last_error());
  }
  for (const auto& t : opt.tols) {
    auto eq = t.find('=');
    if (eq == std::string::npos) return fail_usage("--tol expects NAME=VALUE");
    char* end = nullptr;
    double v = std::strtod(t.c_str() + eq + 1, &end);
    if (end == t.c_str() + eq + 1) return fail_usage("--tol value is not a number");
    if (aplab_scenario_set_tolerance(sc.p, t.substr(0, eq).c_str(), v) != APLAB_OK)
      return fail_usage(aplab_last_error());
  }

  ReportHandle rep;
  rc = aplab_run(sc.p, &rep.p);
  if (rc != APLAB_OK) {
    std::cerr << "error running '" << spec << "': " << aplab_last_error() << "\n";
    return 2;
  }

  if (!opt.out_dir.empty()) {
    rc = aplab_report_write(rep.p, opt.out_dir.c_str(), opt.formats.c_str());
    if (rc != APLAB_OK) {
      std::cerr << "error writing report for '" << spec
                << "': " << aplab_last_error() << "\n";
      return 2;
    }
  } else if (stdout_text) {
    *stdout_text = aplab_report_json(rep.p);
  }
  return aplab_report_all_passed(rep.p) ? 0 : 1;
}

int cmd_run(const RunOptions& opt) {
  if (opt.list_builtins) {
    for (int i = 0; i < aplab_builtin_count(); ++i)
      std::cout << "builtin:" << aplab_builtin_id(i) << "\n";
    return 0;
  }
  if (opt.scenarios.empty())
    return fail_usage("no scenario given (use --list-builtins to see builtins)");

  const int jobs = std::max(1, opt.jobs);
  std::vector<int> codes(opt.scenarios.size(), 0);
  std::vector<std::string> outputs(opt.scenarios.size());

  if (jobs == 1 || opt.scenarios.size() == 1) {
    for (std::size_t i = 0; i < opt.scenarios.size(); ++i)
      codes[i] = run_one(opt, opt.scenarios[i], &outputs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= opt.scenarios.size()) return;
          codes[i] = run_one(opt, opt.scenarios[i], &outputs[i]);
        }
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& text : outputs)
    if (!text.empty()) std::cout << text;

  int worst = 0;
  for (int c : codes) worst = std::max(worst, c);
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aplab: numerical workbench for the parametric argument principle"};
  app.require_subcommand(0, 1);

  RunOptions opt;
  auto* run = app.add_subcommand("run", "load scenarios, run them, emit reports");
  run->add_option("scenario", opt.scenarios,
                  "scenario file path or builtin:<id>; repeatable");
  run->add_option("--out", opt.out_dir, "output directory (default: print JSON)");
  run->add_option("--formats", opt.formats, "comma list of json,csv,svg")
      ->capture_default_str();
  run->add_option("--grid", opt.grid, "override grids as N,M (boundary, parameter)");
  run->add_option("--tol", opt.tols, "override a tolerance as NAME=VALUE");
  run->add_flag("--list-builtins", opt.list_builtins, "list builtin scenario ids");
  run->add_option("--jobs", opt.jobs, "run scenarios concurrently");

  bool version = false;
  app.add_flag("--version", version, "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (version) {
    std::cout << "aplab " << aplab_version() << "\n";
    return 0;
  }
  if (run->parsed()) return cmd_run(opt);
  std::cerr << app.help();
  return 2;
}
