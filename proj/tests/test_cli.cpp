#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "vmz_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& rel) {
  return (scratch_dir() / rel).string();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VMZ_CLI_PATH) + " " + args + " >> " +
                          path_of("cli.log") + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

void write_file(const std::string& rel, const std::string& content) {
  std::ofstream out(scratch_dir() / rel);
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

// Numeric fields of the first row whose leading columns equal the given keys.
std::vector<double> csv_row(const std::string& path,
                            const std::vector<std::string>& keys) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto fields = split_commas(line);
    if (fields.size() < keys.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < keys.size(); ++k)
      if (fields[k] != keys[k]) match = false;
    if (!match) continue;
    std::vector<double> values;
    for (std::size_t k = keys.size(); k < fields.size(); ++k)
      values.push_back(std::strtod(fields[k].c_str(), nullptr));
    return values;
  }
  FAIL("row not found in " << path);
  return {};
}

void write_toy_inputs() {
  static bool done = false;
  if (done) return;
  done = true;
  write_file("edges.tsv",
             "ZA\tu1\t0.5\n"
             "u2\tu1\t0.5\n"
             "ZB\tu2\t0.5\n"
             "u1\tu2\t0.5\n");
  write_file("labels.tsv",
             "ZA\tA\t1\n"
             "ZB\tB\t1\n"
             "u1\tA\t0\n"
             "u2\tB\t0\n");
  REQUIRE(run_cli("ingest --edges " + path_of("edges.tsv") + " --labels " +
                  path_of("labels.tsv") + " --out " + path_of("ing")) == 0);
}

// Two parties, one zealot and three users each, strong inward weights.
void write_planted_inputs() {
  static bool done = false;
  if (done) return;
  done = true;
  std::ostringstream edges, labels;
  for (int p = 1; p <= 2; ++p) {
    labels << "Z" << p << "\tP" << p << "\t1\n";
    for (int u = 1; u <= 3; ++u)
      labels << "P" << p << "_U" << u << "\tP" << p << "\t0\n";
  }
  for (int p = 1; p <= 2; ++p) {
    const int q = 3 - p;
    for (int u = 1; u <= 3; ++u) {
      const std::string user = "P" + std::to_string(p) + "_U" + std::to_string(u);
      edges << "Z" << p << "\t" << user << "\t9\n";
      for (int v = 1; v <= 3; ++v)
        if (v != u)
          edges << "P" << p << "_U" << v << "\t" << user << "\t9\n";
      edges << "Z" << q << "\t" << user << "\t1\n";
      for (int v = 1; v <= 3; ++v)
        edges << "P" << q << "_U" << v << "\t" << user << "\t1\n";
    }
  }
  write_file("planted_edges.tsv", edges.str());
  write_file("planted_labels.tsv", labels.str());
  REQUIRE(run_cli("ingest --edges " + path_of("planted_edges.tsv") + " --labels " +
                  path_of("planted_labels.tsv") + " --out " + path_of("planted")) ==
          0);
}

}  // namespace

TEST_CASE("pipeline on the two-user loop reproduces closed forms") {
  write_toy_inputs();
  CHECK(fs::exists(path_of("ing/network.json")));
  CHECK(fs::exists(path_of("ing/config.ingest.json")));

  const std::string net = path_of("ing/network.json");
  REQUIRE(run_cli("solve --network " + net + " --out " + path_of("sol")) == 0);
  const auto u1 = csv_row(path_of("sol/opinions.csv"), {"u1"});
  REQUIRE(u1.size() == 2);
  CHECK(u1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(u1[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
  const auto u2 = csv_row(path_of("sol/opinions.csv"), {"u2"});
  CHECK(u2[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  const std::string opinions = path_of("sol/opinions.csv");
  REQUIRE(run_cli("discord --network " + net + " --opinions " + opinions +
                  " --mode exact --out " + path_of("rho_exact")) == 0);
  const auto exact = csv_row(path_of("rho_exact/rho.csv"), {"u1", "u2"});
  REQUIRE(exact.size() == 1);
  CHECK(exact[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  REQUIRE(run_cli("discord --network " + net + " --opinions " + opinions +
                  " --mode approx --out " + path_of("rho_approx")) == 0);
  const auto approx = csv_row(path_of("rho_approx/rho.csv"), {"u1", "u2"});
  CHECK(approx[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-8));

  REQUIRE(run_cli("bruteforce --network " + net + " --out " + path_of("brute")) ==
          0);
  const auto bu1 = csv_row(path_of("brute/exact_nodes.csv"), {"u1"});
  CHECK(bu1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  const auto bpair = csv_row(path_of("brute/exact_pairs.csv"), {"u1", "u2"});
  CHECK(bpair[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  REQUIRE(run_cli("simulate --network " + net +
                  " --burn-in 20000 --samples 50000 --seed 5 --all-pairs --out " +
                  path_of("sim")) == 0);
  const auto su1 = csv_row(path_of("sim/sim_nodes.csv"), {"u1"});
  CHECK(std::abs(su1[0] - 2.0 / 3.0) < 0.05);
  const auto spair = csv_row(path_of("sim/sim_pairs.csv"), {"u1", "u2"});
  CHECK(std::abs(spair[0] - 1.0 / 3.0) < 0.05);

  REQUIRE(run_cli("evaluate --network " + net + " --opinions " + opinions +
                  " --rho " + path_of("rho_exact/rho.csv") + " --out " +
                  path_of("eval")) == 0);
  nlohmann::json metrics;
  {
    std::ifstream in(path_of("eval/metrics.json"));
    in >> metrics;
  }
  CHECK(metrics.at("argmax").at("overall").get<double>() == 1.0);
  CHECK(metrics.at("discord").is_object());
  CHECK(fs::exists(path_of("eval/metrics.txt")));
  CHECK(fs::exists(path_of("eval/hist_own_A.csv")));
  CHECK(fs::exists(path_of("eval/hist_discord_within.csv")));

  REQUIRE(run_cli("evaluate --network " + net + " --opinions " + opinions +
                  " --out " + path_of("eval_plain")) == 0);
  nlohmann::json plain;
  {
    std::ifstream in(path_of("eval_plain/metrics.json"));
    in >> plain;
  }
  CHECK(plain.at("discord").is_null());
  CHECK_FALSE(fs::exists(path_of("eval_plain/hist_discord_within.csv")));
}

TEST_CASE("failures map to documented exit codes") {
  write_toy_inputs();
  CHECK(run_cli("ingest --edges " + path_of("missing.tsv") + " --labels " +
                path_of("labels.tsv") + " --out " + path_of("bad_ing")) == 2);

  const std::string net = path_of("ing/network.json");
  CHECK(run_cli("solve --network " + net + " --max-iters 1 --out " +
                path_of("bad_sol")) == 3);

  // Nine users exceed the exact enumeration bound.
  std::ostringstream edges, labels;
  labels << "ZA\tA\t1\nZB\tB\t1\n";
  for (int i = 1; i <= 9; ++i) {
    labels << "v" << i << "\t" << (i % 2 ? "A" : "B") << "\t0\n";
    edges << "ZA\tv" << i << "\t1\nZB\tv" << i << "\t1\n";
  }
  write_file("big_edges.tsv", edges.str());
  write_file("big_labels.tsv", labels.str());
  REQUIRE(run_cli("ingest --edges " + path_of("big_edges.tsv") + " --labels " +
                  path_of("big_labels.tsv") + " --out " + path_of("big")) == 0);
  CHECK(run_cli("bruteforce --network " + path_of("big/network.json") + " --out " +
                path_of("bad_brute")) == 4);

  // The two-user loop has no within-party pairs to compare.
  CHECK(run_cli("compare --variant tiny=" + net + " --out " +
                path_of("bad_cmp")) == 2);

  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("seeded commands and config echoes reproduce outputs exactly") {
  write_toy_inputs();
  const std::string net = path_of("ing/network.json");

  REQUIRE(run_cli("solve --network " + net + " --out " + path_of("sol_a")) == 0);
  REQUIRE(run_cli("solve --config " + path_of("sol_a/config.solve.json") +
                  " --out " + path_of("sol_b")) == 0);
  CHECK(slurp(path_of("sol_b/opinions.csv")) == slurp(path_of("sol_a/opinions.csv")));

  REQUIRE(run_cli("simulate --network " + net +
                  " --burn-in 500 --samples 400 --seed 11 --all-pairs --out " +
                  path_of("sim_a")) == 0);
  REQUIRE(run_cli("simulate --network " + net +
                  " --burn-in 500 --samples 400 --seed 11 --all-pairs --out " +
                  path_of("sim_b")) == 0);
  CHECK(slurp(path_of("sim_b/sim_nodes.csv")) ==
        slurp(path_of("sim_a/sim_nodes.csv")));
  CHECK(slurp(path_of("sim_b/sim_pairs.csv")) ==
        slurp(path_of("sim_a/sim_pairs.csv")));
  REQUIRE(run_cli("simulate --config " + path_of("sim_a/config.simulate.json") +
                  " --out " + path_of("sim_c")) == 0);
  CHECK(slurp(path_of("sim_c/sim_nodes.csv")) ==
        slurp(path_of("sim_a/sim_nodes.csv")));

  write_planted_inputs();
  const std::string pnet = path_of("planted/network.json");
  const std::string popinions = path_of("psol/opinions.csv");
  REQUIRE(run_cli("solve --network " + pnet + " --out " + path_of("psol")) == 0);
  REQUIRE(run_cli("discord --network " + pnet + " --opinions " + popinions +
                  " --mode approx --sample 10 --seed 3 --out " +
                  path_of("prho_a")) == 0);
  REQUIRE(run_cli("discord --network " + pnet + " --opinions " + popinions +
                  " --mode approx --sample 10 --seed 3 --out " +
                  path_of("prho_b")) == 0);
  CHECK(slurp(path_of("prho_b/rho.csv")) == slurp(path_of("prho_a/rho.csv")));

  CHECK(run_cli("simulate --config " + path_of("sol_a/config.solve.json") +
                " --out " + path_of("sim_wrong")) == 2);
}

TEST_CASE("raw ingest feeds the transform stage") {
  write_toy_inputs();
  REQUIRE(run_cli("ingest --edges " + path_of("edges.tsv") + " --labels " +
                  path_of("labels.tsv") + " --raw --out " + path_of("raw")) == 0);
  CHECK(fs::exists(path_of("raw/network.raw.json")));

  REQUIRE(run_cli("transform --network " + path_of("raw/network.raw.json") +
                  " --mode undirected_unweighted --out " + path_of("uu")) == 0);
  REQUIRE(run_cli("solve --network " + path_of("uu/network.json") + " --out " +
                  path_of("uu_sol")) == 0);
  const auto u1 = csv_row(path_of("uu_sol/opinions.csv"), {"u1"});
  REQUIRE(u1.size() == 2);
  CHECK(u1[0] + u1[1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(u1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

  // Transform refuses a network that is already normalized.
  CHECK(run_cli("transform --network " + path_of("ing/network.json") +
                " --mode undirected --out " + path_of("uu_bad")) == 2);
}

TEST_CASE("compare runs variants side by side and reruns identically") {
  write_planted_inputs();
  REQUIRE(run_cli("ingest --edges " + path_of("planted_edges.tsv") + " --labels " +
                  path_of("planted_labels.tsv") +
                  " --transform undirected_unweighted --out " +
                  path_of("planted_uu")) == 0);

  const std::string variants = "--variant directed=" + path_of("planted/network.json") +
                               " --variant flattened=" +
                               path_of("planted_uu/network.json");
  REQUIRE(run_cli("compare " + variants + " --discord exact --out " +
                  path_of("cmp_a")) == 0);
  const auto directed = csv_row(path_of("cmp_a/comparison.csv"), {"directed"});
  REQUIRE(directed.size() == 9);
  CHECK(directed[0] == 1.0);  // argmax accuracy
  const auto flattened = csv_row(path_of("cmp_a/comparison.csv"), {"flattened"});
  CHECK(flattened[0] <= directed[0]);

  REQUIRE(run_cli("compare " + variants + " --discord exact --out " +
                  path_of("cmp_b")) == 0);
  CHECK(slurp(path_of("cmp_b/comparison.csv")) ==
        slurp(path_of("cmp_a/comparison.csv")));
}
