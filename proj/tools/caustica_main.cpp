#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "caustica/scenario.hpp"

namespace {

int cmd_run(const std::vector<std::string>& configs, const caustica::RunOptions& opt) {
  bool all_pass = true;
  for (const std::string& path : configs) {
    caustica::Report rep = caustica::run_scenario(path, opt);
    std::printf("%s: %s (max residual %.3g, %zu rows)\n", rep.scenario.c_str(),
                rep.pass ? "pass" : "FAIL", rep.max_residual, rep.rows.size());
    for (const std::string& note : rep.notes) std::printf("  %s\n", note.c_str());
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_list_cases() {
  for (caustica::ExoticCase c : caustica::all_exotic_cases()) {
    std::printf("%s%s\n", caustica::exotic_name(c),
                caustica::exotic_needs_degree(c) ? " (takes --N)" : "");
  }
  return 0;
}

int cmd_print_integral(const std::string& name, int n) {
  std::optional<caustica::ExoticCase> c = caustica::exotic_from_name(name);
  if (!c) {
    std::fprintf(stderr, "unknown case '%s'; see list-cases\n", name.c_str());
    return 2;
  }
  caustica::CanonicalIntegral ci = caustica::canonical_integral(*c, n);
  std::printf("case %s", name.c_str());
  if (caustica::exotic_needs_degree(*c)) std::printf(" (N = %d)", n);
  std::printf("\nfactored, in v1 = M2, v2 = -M1, Delta = M3:\n  %s\n", ci.factored.c_str());
  std::printf("expanded numerator:\n  %s\n", ci.rat.num.to_string().c_str());
  std::printf("expanded denominator:\n  %s\n", ci.rat.den.to_string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projective billiard property experiments"};
  app.require_subcommand(1);

  caustica::RunOptions opt;
  if (const char* env = std::getenv("CAUSTICA_OUT_DIR")) opt.out_dir = env;
  std::vector<std::string> configs;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = 0;

  CLI::App* run = app.add_subcommand("run", "run scenario config files");
  run->add_option("configs", configs, "scenario config files")->required()->expected(-1);
  CLI::Option* oseed = run->add_option("--seed", seed, "override scenario seed");
  CLI::Option* osamples = run->add_option("--samples", samples, "override sample count");
  CLI::Option* otol = run->add_option("--tol", tol, "override tolerance");
  run->add_option("--out-dir", opt.out_dir, "output directory for CSV/SVG");

  CLI::App* list = app.add_subcommand("list-cases", "list the exotic parabola cases");

  std::string case_name;
  int n = 1;
  CLI::App* pi = app.add_subcommand("print-integral", "print a canonical integral");
  pi->add_option("case", case_name, "case label (2a1, 2a2, 2b1, 2b2, 2c1, 2c2, 2d)")->required();
  pi->add_option("--N", n, "family index for 2a1/2a2");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (*oseed) opt.seed = seed;
      if (*osamples) opt.samples = samples;
      if (*otol) opt.tol = tol;
      return cmd_run(configs, opt);
    }
    if (list->parsed()) return cmd_list_cases();
    if (pi->parsed()) return cmd_print_integral(case_name, n);
  } catch (const caustica::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
