// End-to-end checks of the CLI binary and its file formats: exit codes,
// byte-identical reruns, golden format fragments, env-var cap override.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + VICSEK_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "vicsek_format_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("generate writes edge list + sidecar and prints the vertex count") {
  fs::path out = work_dir() / "v24.edges";
  RunResult r = run_cli("generate --star 4 --s 4 --t 2 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "125\n");

  std::string edges = slurp(out);
  CHECK(edges.substr(0, 8) == "125 124\n");
  CHECK(edges.find("0 25\n") != std::string::npos);

  auto sidecar = json::parse(slurp(out.string() + ".json"));
  CHECK(sidecar["n0"] == 5);
  CHECK(sidecar["s"] == 4);
  CHECK(sidecar["t"] == 2);
  CHECK(sidecar["vertex_count"] == 125);
  CHECK(sidecar["birth_step"].size() == 125);
  CHECK(sidecar["vertex_kind"].size() == 125);
}

TEST_CASE("generate --single grows the star") {
  fs::path out = work_dir() / "single.edges";
  RunResult r = run_cli("generate --single --s 4 --t 1 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "5\n");
  CHECK(slurp(out) == "5 4\n0 1\n0 2\n0 3\n0 4\n");
}

TEST_CASE("generate from a seed file honors the loosened seed rule") {
  fs::path seed = work_dir() / "spider.txt";
  std::ofstream(seed) << "# five-vertex spider\n5 4\n0 1\n0 2\n0 3\n3 4\n";
  fs::path out = work_dir() / "spider_s3.edges";
  RunResult r = run_cli("generate --seed-file " + seed.string() + " --s 3 --t 1 --out " +
                        out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "20\n");
}

TEST_CASE("generate reruns are byte-identical") {
  fs::path a = work_dir() / "rerun_a.edges";
  fs::path b = work_dir() / "rerun_b.edges";
  CHECK(run_cli("generate --star 3 --s 3 --t 3 --out " + a.string()).exit_code == 0);
  CHECK(run_cli("generate --star 3 --s 3 --t 3 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a.string() + ".json") == slurp(b.string() + ".json"));
}

TEST_CASE("exit codes: usage 2, cap 3, env override") {
  CHECK(run_cli("generate --star 4 --s 4 --t 9 --out /dev/null").exit_code == 3);
  CHECK(run_cli("generate --star 4 --s 4").exit_code == 2);               // missing flags
  CHECK(run_cli("generate --star 0 --s 4 --t 1 --out /dev/null").exit_code == 2);
  CHECK(run_cli("generate --star 5 --s 4 --t 1 --out /dev/null").exit_code == 2);  // degree > s
  CHECK(run_cli("analyze --star 2 --s 2 --t 1 --mode nonsense").exit_code == 2);
  CHECK(run_cli("analyze --star 2 --single --s 2 --t 1").exit_code == 2);  // two seed sources

  fs::path out = work_dir() / "env_cap.edges";
  RunResult env_capped =
      run_cli("generate --star 4 --s 4 --t 2 --out " + out.string(), "VICSEK_CAP_VERTICES=10");
  CHECK(env_capped.exit_code == 3);
}

TEST_CASE("analyze: closed + oracle agree on the 9-vertex fractal") {
  RunResult r = run_cli("analyze --star 2 --s 2 --t 1 --mode closed,oracle,spectral");
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["methods"]["closed"]["wiener"] == "120");
  CHECK(j["methods"]["closed"]["mfpt"]["num"] == "80");
  CHECK(j["methods"]["closed"]["mfpt"]["den"] == "3");
  CHECK(j["methods"]["oracle"]["wiener"] == "120");
  CHECK(j["cross_checks"].size() == 2);
  for (const auto& c : j["cross_checks"]) CHECK(c["ok"] == true);
}

TEST_CASE("analyze: mc mode is reproducible per seed and lands near the exact value") {
  fs::path a = work_dir() / "mc_a.json";
  fs::path b = work_dir() / "mc_b.json";
  std::string flags = "analyze --star 2 --s 2 --t 1 --mode closed,mc --pair-samples 20000 "
                      "--rng-seed 7 --out ";
  CHECK(run_cli(flags + a.string()).exit_code == 0);
  CHECK(run_cli(flags + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  auto j = json::parse(slurp(a));
  CHECK(j["methods"]["mc"]["exact_num"] == "80");
  CHECK(j["methods"]["mc"]["exact_den"] == "3");
  double mean = j["methods"]["mc"]["mean"];
  CHECK(std::fabs(mean - 80.0 / 3.0) / (80.0 / 3.0) < 0.05);
}

TEST_CASE("analyze accepts scientific-notation sample counts") {
  RunResult r = run_cli(
      "analyze --star 2 --s 2 --t 1 --mode closed,mc --pair-samples 2e4 --rng-seed 7");
  CHECK(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["methods"]["mc"]["samples"] == 20000);
  CHECK(run_cli("analyze --star 2 --s 2 --t 1 --mode mc --pair-samples 1.5").exit_code == 2);
}

TEST_CASE("analyze csv format") {
  RunResult r = run_cli("analyze --star 2 --s 2 --t 1 --mode closed --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("method,wiener,mfpt_num,mfpt_den,mfpt_float\n") == 0);
  CHECK(r.out.find("closed,120,80,3,") != std::string::npos);
}

TEST_CASE("scaling CSV covers the grid with the lambda column") {
  fs::path seed = work_dir() / "spider.txt";
  std::ofstream(seed) << "5 4\n0 1\n0 2\n0 3\n3 4\n";
  RunResult r = run_cli("scaling --seed-file " + seed.string() + " --s-list 4,5 --t-max 6");
  CHECK(r.exit_code == 0);
  std::istringstream is(r.out);
  std::string header;
  std::getline(is, header);
  CHECK(header == "s,t,vertex_count,mfpt_num,mfpt_den,delta,lambda");
  int rows = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 14);  // two s values, t = 0..6
  CHECK(r.out.find("4,1,25,652,5,") != std::string::npos);  // A(spider, s=4, t=1) = 2*1630/25

  // rejected grids exit 2
  CHECK(run_cli("scaling --single --s-list 4 --t-max 0").exit_code == 2);
  CHECK(run_cli("scaling --seed-file " + seed.string() + " --s-list 2 --t-max 3").exit_code == 2);
}

TEST_CASE("errata reproduces the published-vs-derived comparison") {
  fs::path out = work_dir() / "errata.json";
  RunResult r = run_cli("errata --s-list 2,3 --t-max 2 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("MISMATCH") != std::string::npos);

  auto j = json::parse(slurp(out));
  CHECK(j["derived_vs_oracle_ok"] == true);
  bool saw_agreement_point = false, saw_thm3_mismatch = false;
  for (const auto& cell : j["grid"]) {
    if (cell["s"] == 2 && cell["t"] == 1) {
      CHECK(cell["printed_theorem3"]["matches_derived"] == true);
      CHECK(cell["printed_corollary5"]["matches_derived"] == false);
      CHECK(cell["printed_ap5"]["matches_derived"] == false);
      CHECK(cell["printed_ap5"]["total"]["num"] == "8");
      saw_agreement_point = true;
    }
    if (cell["s"] == 3 && cell["t"] == 1) {
      CHECK(cell["printed_theorem3"]["wiener"]["num"] == "452");
      CHECK(cell["derived"]["wiener"] == "516");
      CHECK(cell["printed_theorem3"]["matches_oracle"] == false);
      CHECK(cell["variants"].size() == 5);  // derived + four printed forms (star seed)
      CHECK(cell["variants"][0]["variant"] == "derived");
      CHECK(cell["variants"][4]["variant"] == "printed-AP5");
      saw_thm3_mismatch = true;
    }
  }
  CHECK(saw_agreement_point);
  CHECK(saw_thm3_mismatch);
}

TEST_CASE("spectrum writes CSV + decimation JSON") {
  fs::path out = work_dir() / "p9.spectrum.csv";
  RunResult r = run_cli("spectrum --star 2 --s 2 --t 1 --out " + out.string());
  CHECK(r.exit_code == 0);
  std::string csv = slurp(out);
  CHECK(csv.find("index,eigenvalue,multiplicity_hint\n") == 0);
  int rows = -1;  // header
  for (char c : csv) {
    if (c == '\n') ++rows;
  }
  CHECK(rows == 9);

  auto decim = json::parse(slurp(out.string() + ".decimation.json"));
  CHECK(decim["s"] == 2);
  CHECK(decim["parent_generation"] == 1);
  CHECK(decim["child_generation"] == 2);
  CHECK(decim["all_matched"] == true);
  CHECK(decim["entries"].size() == 8);  // all nonzero P9 eigenvalues decimate

  // 1024-vertex child is within the dense cap; 4096 is not
  fs::path big = work_dir() / "big.spectrum.csv";
  RunResult r2 = run_cli("spectrum --star 3 --s 3 --t 4 --out " + big.string());
  CHECK(r2.exit_code == 0);
  auto skipped = json::parse(slurp(big.string() + ".decimation.json"));
  CHECK(skipped.contains("skipped"));
}
