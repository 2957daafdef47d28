#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* kCli = CAUSTICA_CLI_PATH;

struct CliResult {
  int status = -1;
  std::string out, err;
};

fs::path work_root() {
  static fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "caustica_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(bool(out));
  out << text;
}

// run the CLI through the shell, capturing exit status and both streams
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int serial = 0;
  fs::path out = work_root() / ("stdout." + std::to_string(serial));
  fs::path err = work_root() / ("stderr." + std::to_string(serial));
  ++serial;
  std::string cmd = env_prefix + "\"" + kCli + "\" " + args + " > " + out.string() + " 2> " +
                    err.string();
  int rc = std::system(cmd.c_str());
  CliResult r;
  if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = work_root() / name;
  fs::create_directories(p);
  return p;
}

int csv_data_rows(const std::string& csv) {
  int n = -1;  // skip the header
  std::istringstream is(csv);
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) ++n;
  return n;
}

const char* kOrbitCfg =
    "[scenario]\n"
    "name = orbit-demo\n"
    "kind = simulate\n"
    "\n"
    "[table]\n"
    "shape = ellipse\n"
    "a = 2\n"
    "b = 1\n"
    "\n"
    "[simulate]\n"
    "x = 1.2\n"
    "y = 0.55\n"
    "dx = -0.9\n"
    "dy = 0.2\n"
    "steps = 12\n";

const char* kCausticPassCfg =
    "[scenario]\n"
    "name = confocal-pass\n"
    "kind = verify-caustic\n"
    "seed = 11\n"
    "samples = 120\n"
    "\n"
    "[table]\n"
    "shape = ellipse\n"
    "a = 2\n"
    "b = 1\n"
    "\n"
    "[caustic]\n"
    "lambda = 0.5\n";

// same table, but the candidate conic sits outside the confocal family
const char* kCausticFailCfg =
    "[scenario]\n"
    "name = confocal-fail\n"
    "kind = verify-caustic\n"
    "seed = 11\n"
    "samples = 120\n"
    "\n"
    "[table]\n"
    "shape = ellipse\n"
    "a = 2\n"
    "b = 1\n"
    "\n"
    "[caustic]\n"
    "conic = 0.3333333333 0 0 1 0 -1\n";

const char* kIntegralCfg =
    "[scenario]\n"
    "name = jet-2c1\n"
    "kind = verify-integral\n"
    "seed = 7\n"
    "\n"
    "[table]\n"
    "shape = parabola\n"
    "field = exotic\n"
    "case = 2c1\n"
    "\n"
    "[integral]\n"
    "kind = canonical\n";

}  // namespace

TEST_CASE("run writes a csv report and an svg plot") {
  fs::path cfg = work_root() / "orbit.cfg";
  spit(cfg, kOrbitCfg);
  fs::path out = fresh_dir("orbit-out");
  CliResult r = run_cli("run " + cfg.string() + " --out-dir " + out.string());
  CHECK(r.status == 0);
  CHECK(r.out.find("orbit-demo: pass") != std::string::npos);
  std::string csv = slurp(out / "orbit-demo.csv");
  CHECK(csv.rfind("scenario,check_id,sample_id,residual,verdict\n", 0) == 0);
  CHECK(csv.find(",on-boundary,") != std::string::npos);
  CHECK(csv.find(",tangency,") != std::string::npos);
  CHECK(csv.find(",pass") != std::string::npos);
  std::string svg = slurp(out / "orbit-demo.svg");
  CHECK(svg.find("<svg ") != std::string::npos);
  CHECK(svg.find("viewBox") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("identical scenario and seed produce byte-identical outputs") {
  fs::path cfg = work_root() / "repeat.cfg";
  spit(cfg, kCausticPassCfg);
  fs::path d1 = fresh_dir("rep1"), d2 = fresh_dir("rep2");
  CHECK(run_cli("run " + cfg.string() + " --out-dir " + d1.string()).status == 0);
  CHECK(run_cli("run " + cfg.string() + " --out-dir " + d2.string()).status == 0);
  CHECK(slurp(d1 / "confocal-pass.csv") == slurp(d2 / "confocal-pass.csv"));

  fs::path ocfg = work_root() / "repeat-orbit.cfg";
  spit(ocfg, kOrbitCfg);
  fs::path d3 = fresh_dir("rep3"), d4 = fresh_dir("rep4");
  CHECK(run_cli("run " + ocfg.string() + " --out-dir " + d3.string()).status == 0);
  CHECK(run_cli("run " + ocfg.string() + " --out-dir " + d4.string()).status == 0);
  CHECK(slurp(d3 / "orbit-demo.svg") == slurp(d4 / "orbit-demo.svg"));
  CHECK(slurp(d3 / "orbit-demo.csv") == slurp(d4 / "orbit-demo.csv"));
}

TEST_CASE("exit code 1 flags a failing scenario and overrides apply") {
  fs::path cfg = work_root() / "fail.cfg";
  spit(cfg, kCausticFailCfg);
  fs::path out = fresh_dir("fail-out");
  CliResult r = run_cli("run " + cfg.string() + " --out-dir " + out.string());
  CHECK(r.status == 1);
  CHECK(r.out.find("confocal-fail: FAIL") != std::string::npos);
  std::string csv = slurp(out / "confocal-fail.csv");
  CHECK(csv.find(",fail") != std::string::npos);
  // a generous tolerance override turns the same run into a pass
  CliResult loose = run_cli("run " + cfg.string() + " --out-dir " + out.string() + " --tol 1.0");
  CHECK(loose.status == 0);
}

TEST_CASE("exit code 2 diagnoses config problems by name") {
  fs::path cfg = work_root() / "missing.cfg";
  spit(cfg,
       "[scenario]\n"
       "name = broken\n"
       "kind = simulate\n"
       "\n"
       "[table]\n"
       "shape = circle\n"
       "r = 1\n"
       "\n"
       "[simulate]\n"
       "x = 0\n"
       "y = 1\n"
       "dx = 1\n");
  CliResult r = run_cli("run " + cfg.string());
  CHECK(r.status == 2);
  CHECK(r.err.find("missing required key simulate.dy") != std::string::npos);

  fs::path kindcfg = work_root() / "kind.cfg";
  spit(kindcfg,
       "[scenario]\n"
       "name = broken2\n"
       "kind = frobnicate\n");
  r = run_cli("run " + kindcfg.string());
  CHECK(r.status == 2);
  CHECK(r.err.find("unknown scenario.kind 'frobnicate'") != std::string::npos);

  r = run_cli("run " + (work_root() / "no-such-file.cfg").string());
  CHECK(r.status == 2);
  CHECK(r.err.find("cannot open config file") != std::string::npos);
}

TEST_CASE("sample count override changes the number of report rows") {
  fs::path cfg = work_root() / "jet.cfg";
  spit(cfg, kIntegralCfg);
  fs::path d1 = fresh_dir("jet30"), d2 = fresh_dir("jet60");
  CliResult a = run_cli("run " + cfg.string() + " --out-dir " + d1.string() + " --samples 30");
  CliResult b = run_cli("run " + cfg.string() + " --out-dir " + d2.string() + " --samples 60");
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  int n1 = csv_data_rows(slurp(d1 / "jet-2c1.csv"));
  int n2 = csv_data_rows(slurp(d2 / "jet-2c1.csv"));
  CHECK(n1 > 0);
  CHECK(n1 < n2);
}

TEST_CASE("the default output root comes from the environment") {
  fs::path cfg = work_root() / "envout.cfg";
  spit(cfg, kOrbitCfg);
  fs::path out = fresh_dir("env-out");
  CliResult r = run_cli("run " + cfg.string(), "CAUSTICA_OUT_DIR=" + out.string() + " ");
  CHECK(r.status == 0);
  CHECK(fs::exists(out / "orbit-demo.csv"));
}

TEST_CASE("list-cases prints the seven field families") {
  CliResult r = run_cli("list-cases");
  CHECK(r.status == 0);
  std::vector<std::string> lines;
  std::istringstream is(r.out);
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) lines.push_back(line);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "2a1 (takes --N)");
  CHECK(lines[1] == "2a2 (takes --N)");
  CHECK(lines[2] == "2b1");
  CHECK(lines[3] == "2b2");
  CHECK(lines[4] == "2c1");
  CHECK(lines[5] == "2c2");
  CHECK(lines[6] == "2d");
}

TEST_CASE("print-integral shows factored and expanded forms") {
  CliResult r = run_cli("print-integral 2c1");
  CHECK(r.status == 0);
  CHECK(r.out.find("case 2c1") != std::string::npos);
  CHECK(r.out.find("(4*v1*Delta - v2^2)^3") != std::string::npos);
  CHECK(r.out.find("expanded numerator") != std::string::npos);
  CHECK(r.out.find("M2^6") != std::string::npos);

  CliResult deg = run_cli("print-integral 2a1 --N 2");
  CHECK(deg.status == 0);
  CHECK(deg.out.find("(N = 2)") != std::string::npos);

  CliResult bad = run_cli("print-integral bogus");
  CHECK(bad.status == 2);
  CHECK(bad.err.find("unknown case 'bogus'") != std::string::npos);
}
