#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vmz/discord.hpp"
#include "vmz/dynamics.hpp"
#include "vmz/equilibrium.hpp"
#include "vmz/evaluation.hpp"
#include "vmz/io.hpp"
#include "vmz/network.hpp"
#include "vmz/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace vmz;

namespace {

// Applies an echoed config as new defaults; flags given on the command line
// still win because CLI11 only writes bound variables it actually parsed.
struct ConfigReader {
  const ordered_json& j;
  const std::string& path;
  std::set<std::string> used{"command"};

  template <class T>
  void get(const char* key, T& var) {
    used.insert(key);
    if (j.contains(key)) {
      try {
        j.at(key).get_to(var);
      } catch (const ordered_json::exception&) {
        throw ParseError(path + ": bad value for config key '" + std::string(key) +
                         "'");
      }
    }
  }

  void finish() const {
    for (const auto& [key, value] : j.items())
      if (used.find(key) == used.end())
        throw ParseError(path + ": unknown config key '" + key + "'");
  }
};

void check_command(const ordered_json& config, const std::string& config_path,
                   const std::string& command) {
  if (config.is_null()) return;
  if (!config.is_object() || !config.contains("command"))
    throw ParseError(config_path + ": not an echoed config (no \"command\" key)");
  const std::string owner = config.at("command").get<std::string>();
  if (owner != command)
    throw ParseError(config_path + ": config belongs to '" + owner +
                     "', not to '" + command + "'");
}

fs::path prepare_out(const std::string& out) {
  if (out.empty()) throw ParseError("--out is required");
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ParseError("cannot create output directory '" + out + "'");
  return dir;
}

void write_config(const ordered_json& j, const fs::path& dir,
                  const std::string& command) {
  std::ofstream out(dir / ("config." + command + ".json"));
  if (!out) throw ParseError("cannot write config echo");
  out << j.dump(1) << "\n";
}

void apply_threads(int threads) {
  if (threads > 0) Eigen::setNbThreads(threads);
}

TransformMode parse_mode(const std::string& text) {
  if (text == "unweighted") return TransformMode::unweighted;
  if (text == "undirected") return TransformMode::undirected;
  if (text == "undirected_unweighted") return TransformMode::undirected_unweighted;
  throw ParseError("unknown transform mode '" + text + "'");
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
}

Network read_normalized(const std::string& path) {
  Network net = read_network_json(path);
  if (!net.normalized)
    throw DomainError(path + ": network is raw; run ingest or transform first");
  return net;
}

std::vector<Pair> sample_user_pairs(int n, long long cap, std::uint64_t seed) {
  if (cap < 1) throw DomainError("--sample must be at least 1");
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  std::vector<Pair> pairs;
  if (total <= cap + cap / 4) {
    pairs.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
  }
  std::mt19937_64 rng(mix64(seed));
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(cap) * 2);
  pairs.reserve(static_cast<std::size_t>(cap));
  while (static_cast<long long>(pairs.size()) < cap) {
    const int a = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    if (seen.insert(pair_key(a, b)).second) pairs.push_back(canonical_pair(a, b));
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

void print_network_line(const Network& net) {
  const NetworkStats s = stats(net);
  std::cout << s.users << " users, " << s.zealots << " zealots, " << s.edges
            << " in-edges, " << s.weak_links << " weak links, zero-exposure share "
            << format_scalar(s.zero_exposure_share) << "\n";
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::string edges, labels, space, transform_mode = "none", out;
  bool raw = false;
  int threads = 0;
};

void run_ingest(const IngestOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "ingest";
  echo["edges"] = opt.edges;
  echo["labels"] = opt.labels;
  echo["space"] = opt.space;
  echo["transform"] = opt.transform_mode;
  echo["raw"] = opt.raw;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "ingest");

  const OpinionSpace space = opt.space.empty()
                                 ? space_from_labels_file(opt.labels)
                                 : OpinionSpace(split_commas(opt.space));
  LoadStats ls;
  Network net = load_network(opt.edges, opt.labels, space, &ls);
  std::cout << "loaded " << ls.label_rows << " label rows, " << ls.edge_rows
            << " edge rows; excluded " << ls.excluded_unlabeled << " unlabeled and "
            << ls.excluded_multi_label << " multi-label nodes, dropped "
            << ls.dropped_edges << " incident edges, " << ls.zero_weight_edges
            << " zero-weight edges; " << ls.into_zealot_edges
            << " edges into zealots kept as weak links\n";
  if (opt.transform_mode != "none")
    net = transform(net, parse_mode(opt.transform_mode));
  const int before = net.num_nodes();
  if (!opt.raw) {
    net = filter(net);
    std::cout << "filter removed " << before - net.num_nodes() << " of " << before
              << " nodes\n";
  }
  print_network_line(net);
  const fs::path file = dir / (opt.raw ? "network.raw.json" : "network.json");
  write_network_json(net, file.string());
  std::cout << "wrote " << file.string() << "\n";
}

// ---------------------------------------------------------------- transform

struct TransformOptions {
  std::string network, mode, out;
  bool raw = false;
  int threads = 0;
};

void run_transform(const TransformOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "transform";
  echo["network"] = opt.network;
  echo["mode"] = opt.mode;
  echo["raw"] = opt.raw;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "transform");

  Network net = read_network_json(opt.network);
  if (net.normalized)
    throw DomainError(opt.network +
                      ": transform needs raw weights; ingest with --raw first");
  net = transform(net, parse_mode(opt.mode));
  const int before = net.num_nodes();
  if (!opt.raw) {
    net = filter(net);
    std::cout << "filter removed " << before - net.num_nodes() << " of " << before
              << " nodes\n";
  }
  print_network_line(net);
  const fs::path file = dir / (opt.raw ? "network.raw.json" : "network.json");
  write_network_json(net, file.string());
  std::cout << "wrote " << file.string() << "\n";
}

// ---------------------------------------------------------------- solve

struct SolveOptions {
  std::string network, init = "uniform", out;
  double tolerance = 1e-10;
  long long max_iterations = 100000;
  int threads = 0;
};

void run_solve(const SolveOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "solve";
  echo["network"] = opt.network;
  echo["tolerance"] = opt.tolerance;
  echo["max_iterations"] = opt.max_iterations;
  echo["init"] = opt.init;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "solve");

  const Network net = read_normalized(opt.network);
  SolverConfig cfg;
  cfg.tolerance = opt.tolerance;
  cfg.max_iterations = opt.max_iterations;
  if (opt.init == "uniform")
    cfg.init = SolverConfig::Init::uniform;
  else if (opt.init == "zeros")
    cfg.init = SolverConfig::Init::zeros;
  else
    throw ParseError("unknown init '" + opt.init + "'");

  const OpinionMatrix x = solve_equilibrium(net, cfg);
  write_opinion_csv(x, net.space, (dir / "opinions.csv").string());
  write_opinion_meta(x, net.space, (dir / "opinions.meta.json").string());
  std::cout << "solved " << x.ids.size() << " users in " << x.iterations
            << " iterations, residual " << format_scalar(x.residual) << "\n"
            << "wrote " << (dir / "opinions.csv").string() << "\n";
}

// ---------------------------------------------------------------- discord

struct DiscordOptions {
  std::string network, opinions, mode = "exact", pairs_file, out;
  long long sample = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  long long max_iterations = 100000;
  int threads = 0;
};

void run_discord(const DiscordOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "discord";
  echo["network"] = opt.network;
  echo["opinions"] = opt.opinions;
  echo["mode"] = opt.mode;
  echo["pairs"] = opt.pairs_file;
  echo["sample"] = opt.sample;
  echo["seed"] = opt.seed;
  echo["tolerance"] = opt.tolerance;
  echo["max_iterations"] = opt.max_iterations;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "discord");

  const Network net = read_normalized(opt.network);
  const OpinionMatrix x = read_opinion_csv(net, opt.opinions);

  PairSet pairs = PairSet::all();
  if (!opt.pairs_file.empty() && opt.sample > 0)
    throw ParseError("--pairs and --sample are mutually exclusive");
  if (!opt.pairs_file.empty())
    pairs = PairSet::listed(read_pairs_file(net, opt.pairs_file));
  else if (opt.sample > 0)
    pairs = PairSet::listed(
        sample_user_pairs(static_cast<int>(x.ids.size()), opt.sample, opt.seed));

  DiscordStore rho;
  if (opt.mode == "exact") {
    SolverConfig cfg;
    cfg.tolerance = opt.tolerance;
    cfg.max_iterations = opt.max_iterations;
    rho = discord_exact(net, x, pairs, cfg);
  } else if (opt.mode == "approx") {
    rho = discord_approx(x, pairs);
  } else {
    throw ParseError("unknown discord mode '" + opt.mode + "'");
  }
  write_discord_csv(rho, (dir / "rho.csv").string());
  write_discord_meta(rho, (dir / "rho.meta.json").string());
  std::cout << rho.pairs.size() << " pairs (" << opt.mode << ")";
  if (rho.mode == DiscordStore::Mode::exact)
    std::cout << ", " << rho.iterations << " iterations, residual "
              << format_scalar(rho.residual);
  std::cout << "\nwrote " << (dir / "rho.csv").string() << "\n";
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string network, pairs_file, out;
  long long burn_in = -1;
  long long samples = 10000;
  long long thinning = 1;
  std::uint64_t seed = 0;
  bool all_pairs = false;
  int threads = 0;
};

void run_simulate(const SimulateOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  const Network net = read_normalized(opt.network);

  SimConfig cfg;
  cfg.burn_in = opt.burn_in >= 0
                    ? opt.burn_in
                    : 100LL * net.num_users() * net.space.size();
  cfg.samples = opt.samples;
  cfg.thinning = opt.thinning;
  cfg.seed = opt.seed;

  ordered_json echo;
  echo["command"] = "simulate";
  echo["network"] = opt.network;
  echo["burn_in"] = cfg.burn_in;
  echo["samples"] = cfg.samples;
  echo["thinning"] = cfg.thinning;
  echo["seed"] = cfg.seed;
  echo["pairs"] = opt.pairs_file;
  echo["all_pairs"] = opt.all_pairs;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "simulate");

  PairSet pairs = PairSet::none();
  if (!opt.pairs_file.empty() && opt.all_pairs)
    throw ParseError("--pairs and --all-pairs are mutually exclusive");
  if (!opt.pairs_file.empty())
    pairs = PairSet::listed(read_pairs_file(net, opt.pairs_file));
  else if (opt.all_pairs)
    pairs = PairSet::all();

  const SimStats sim = simulate(net, cfg, pairs);
  write_simstats(sim, net.space, (dir / "sim_nodes.csv").string(),
                 (dir / "sim_pairs.csv").string());
  std::cout << "recorded " << sim.samples << " samples (burn-in " << cfg.burn_in
            << ", thinning " << cfg.thinning << ")\n"
            << "wrote " << (dir / "sim_nodes.csv").string() << "\n";
}

// ---------------------------------------------------------------- bruteforce

struct BruteforceOptions {
  std::string network, pairs_file, out;
  bool no_pairs = false;
  int threads = 0;
};

void run_bruteforce(const BruteforceOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "bruteforce";
  echo["network"] = opt.network;
  echo["pairs"] = opt.pairs_file;
  echo["no_pairs"] = opt.no_pairs;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "bruteforce");

  const Network net = read_normalized(opt.network);
  PairSet pairs = PairSet::all();
  if (!opt.pairs_file.empty() && opt.no_pairs)
    throw ParseError("--pairs and --no-pairs are mutually exclusive");
  if (!opt.pairs_file.empty())
    pairs = PairSet::listed(read_pairs_file(net, opt.pairs_file));
  else if (opt.no_pairs)
    pairs = PairSet::none();

  const SimStats exact = brute_force_stationary(net, pairs);
  write_simstats(exact, net.space, (dir / "exact_nodes.csv").string(),
                 (dir / "exact_pairs.csv").string());
  std::cout << "enumerated stationary distribution over "
            << exact.ids.size() << " users\n"
            << "wrote " << (dir / "exact_nodes.csv").string() << "\n";
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string network, opinions, rho, out;
  int bins = 50;
  bool no_classifier = false;
  bool baseline = false;
  std::uint64_t seed = 0;
  int threads = 0;
};

void run_evaluate(const EvaluateOptions& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "evaluate";
  echo["network"] = opt.network;
  echo["opinions"] = opt.opinions;
  echo["rho"] = opt.rho;
  echo["bins"] = opt.bins;
  echo["no_classifier"] = opt.no_classifier;
  echo["baseline"] = opt.baseline;
  echo["seed"] = opt.seed;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "evaluate");

  const Network net = read_normalized(opt.network);
  const OpinionMatrix x = read_opinion_csv(net, opt.opinions);
  DiscordStore rho;
  const bool with_rho = !opt.rho.empty();
  if (with_rho) rho = read_discord_csv(net, opt.rho);

  ReportOptions ropts;
  ropts.histogram_bins = opt.bins;
  ropts.with_classifier = !opt.no_classifier;
  ropts.with_baseline = opt.baseline;
  ropts.seed = opt.seed;
  const MetricsReport report =
      build_metrics_report(net, x, with_rho ? &rho : nullptr, ropts);

  write_metrics_json(report, (dir / "metrics.json").string());
  write_metrics_text(report, (dir / "metrics.txt").string());
  for (std::size_t c = 0; c < report.opinion_labels.size(); ++c) {
    write_histogram_csv(report.own_histograms[c],
                        (dir / ("hist_own_" + report.opinion_labels[c] + ".csv"))
                            .string());
    write_histogram_csv(report.other_histograms[c],
                        (dir / ("hist_other_" + report.opinion_labels[c] + ".csv"))
                            .string());
  }
  if (report.discord_within_histogram)
    write_histogram_csv(*report.discord_within_histogram,
                        (dir / "hist_discord_within.csv").string());
  if (report.discord_cross_histogram)
    write_histogram_csv(*report.discord_cross_histogram,
                        (dir / "hist_discord_cross.csv").string());
  std::cout << "argmax accuracy " << format_scalar(report.argmax.overall) << " over "
            << report.argmax.evaluated << " users\n"
            << "wrote " << (dir / "metrics.json").string() << "\n";
}

// ---------------------------------------------------------------- compare

struct CompareOptions_ {
  std::vector<std::string> variants;
  std::string discord_mode = "approx", out;
  long long pair_cap = 1000000;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  long long max_iterations = 100000;
  int threads = 0;
};

void run_compare(const CompareOptions_& opt) {
  apply_threads(opt.threads);
  const fs::path dir = prepare_out(opt.out);
  ordered_json echo;
  echo["command"] = "compare";
  echo["variants"] = opt.variants;
  echo["discord"] = opt.discord_mode;
  echo["pair_cap"] = opt.pair_cap;
  echo["seed"] = opt.seed;
  echo["tolerance"] = opt.tolerance;
  echo["max_iterations"] = opt.max_iterations;
  echo["out"] = opt.out;
  echo["threads"] = opt.threads;
  write_config(echo, dir, "compare");

  if (opt.variants.empty()) throw ParseError("need at least one --variant name=path");
  std::vector<std::pair<std::string, Network>> variants;
  for (const std::string& spec : opt.variants) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw ParseError("--variant must look like name=path, got '" + spec + "'");
    variants.emplace_back(spec.substr(0, eq),
                          read_normalized(spec.substr(eq + 1)));
  }

  CompareOptions copts;
  copts.solver.tolerance = opt.tolerance;
  copts.solver.max_iterations = opt.max_iterations;
  if (opt.discord_mode == "exact")
    copts.discord_mode = DiscordStore::Mode::exact;
  else if (opt.discord_mode == "approx")
    copts.discord_mode = DiscordStore::Mode::approx;
  else
    throw ParseError("unknown discord mode '" + opt.discord_mode + "'");
  copts.pair_cap = opt.pair_cap;
  copts.seed = opt.seed;

  const auto rows = compare_networks(variants, copts);
  write_comparison_csv(rows, (dir / "comparison.csv").string());
  for (const auto& row : rows)
    std::cout << row.name << ": argmax " << format_scalar(row.argmax_accuracy)
              << ", discord accuracy " << format_scalar(row.discord_accuracy)
              << "\n";
  std::cout << "wrote " << (dir / "comparison.csv").string() << "\n";
}

// ---------------------------------------------------------------- wiring

ordered_json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  std::string config_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
  }

  try {
    ordered_json config;
    if (!config_path.empty()) config = load_config_file(config_path);
    const std::string config_owner =
        config.is_object() && config.contains("command")
            ? config.at("command").get<std::string>()
            : "";

    CLI::App app{"multi-state voter model with zealots on directed networks"};
    app.require_subcommand(1);
    std::string config_opt;  // consumed by the pre-scan above

    auto configure = [&](CLI::App* sub, const std::string& name,
                         auto apply_config) {
      sub->add_option("--config", config_opt,
                      "echoed config file to use as defaults");
      if (!config_path.empty() && config_owner == name) {
        ConfigReader reader{config, config_path};
        apply_config(reader);
        reader.finish();
      }
      sub->parse_complete_callback([&config, &config_path, name] {
        check_command(config, config_path, name);
      });
    };

    auto ingest = std::make_shared<IngestOptions>();
    {
      CLI::App* sub = app.add_subcommand("ingest", "load TSV files into a network");
      configure(sub, "ingest", [&](ConfigReader& c) {
        c.get("edges", ingest->edges);
        c.get("labels", ingest->labels);
        c.get("space", ingest->space);
        c.get("transform", ingest->transform_mode);
        c.get("raw", ingest->raw);
        c.get("out", ingest->out);
        c.get("threads", ingest->threads);
      });
      sub->add_option("--edges", ingest->edges, "edges TSV: source, target, weight");
      sub->add_option("--labels", ingest->labels, "labels TSV: id, label, zealot flag");
      sub->add_option("--space", ingest->space,
                      "comma-separated opinion labels (default: from labels file)");
      sub->add_option("--transform", ingest->transform_mode,
                      "none|unweighted|undirected|undirected_unweighted");
      sub->add_flag("--raw", ingest->raw, "skip filter + normalize, keep raw weights");
      sub->add_option("--out", ingest->out, "output directory");
      sub->add_option("--threads", ingest->threads, "cap worker threads (0 = library default)");
      sub->final_callback([ingest] { run_ingest(*ingest); });
    }

    auto trans = std::make_shared<TransformOptions>();
    {
      CLI::App* sub = app.add_subcommand("transform", "reweight or symmetrize a raw network");
      configure(sub, "transform", [&](ConfigReader& c) {
        c.get("network", trans->network);
        c.get("mode", trans->mode);
        c.get("raw", trans->raw);
        c.get("out", trans->out);
        c.get("threads", trans->threads);
      });
      sub->add_option("--network", trans->network, "raw canonical network file");
      sub->add_option("--mode", trans->mode,
                      "unweighted|undirected|undirected_unweighted");
      sub->add_flag("--raw", trans->raw, "skip filter + normalize on the result");
      sub->add_option("--out", trans->out, "output directory");
      sub->add_option("--threads", trans->threads, "cap worker threads");
      sub->final_callback([trans] { run_transform(*trans); });
    }

    auto solve = std::make_shared<SolveOptions>();
    {
      CLI::App* sub = app.add_subcommand("solve", "equilibrium opinion distributions");
      configure(sub, "solve", [&](ConfigReader& c) {
        c.get("network", solve->network);
        c.get("tolerance", solve->tolerance);
        c.get("max_iterations", solve->max_iterations);
        c.get("init", solve->init);
        c.get("out", solve->out);
        c.get("threads", solve->threads);
      });
      sub->add_option("--network", solve->network, "canonical network file");
      sub->add_option("--tolerance", solve->tolerance, "sup-norm residual target");
      sub->add_option("--max-iters", solve->max_iterations, "iteration cap");
      sub->add_option("--init", solve->init, "uniform|zeros");
      sub->add_option("--out", solve->out, "output directory");
      sub->add_option("--threads", solve->threads, "cap worker threads");
      sub->final_callback([solve] { run_solve(*solve); });
    }

    auto disc = std::make_shared<DiscordOptions>();
    {
      CLI::App* sub = app.add_subcommand("discord", "pairwise discord probabilities");
      configure(sub, "discord", [&](ConfigReader& c) {
        c.get("network", disc->network);
        c.get("opinions", disc->opinions);
        c.get("mode", disc->mode);
        c.get("pairs", disc->pairs_file);
        c.get("sample", disc->sample);
        c.get("seed", disc->seed);
        c.get("tolerance", disc->tolerance);
        c.get("max_iterations", disc->max_iterations);
        c.get("out", disc->out);
        c.get("threads", disc->threads);
      });
      sub->add_option("--network", disc->network, "canonical network file");
      sub->add_option("--opinions", disc->opinions, "opinions CSV from solve");
      sub->add_option("--mode", disc->mode, "exact|approx");
      sub->add_option("--pairs", disc->pairs_file, "pair list file (id_i<TAB>id_j)");
      sub->add_option("--sample", disc->sample,
                      "sample this many user pairs instead of all");
      sub->add_option("--seed", disc->seed, "pair-sampling seed");
      sub->add_option("--tolerance", disc->tolerance, "sup-norm residual target");
      sub->add_option("--max-iters", disc->max_iterations, "iteration cap");
      sub->add_option("--out", disc->out, "output directory");
      sub->add_option("--threads", disc->threads, "cap worker threads");
      sub->final_callback([disc] { run_discord(*disc); });
    }

    auto sim = std::make_shared<SimulateOptions>();
    {
      CLI::App* sub = app.add_subcommand("simulate", "Monte Carlo voter dynamics");
      configure(sub, "simulate", [&](ConfigReader& c) {
        c.get("network", sim->network);
        c.get("burn_in", sim->burn_in);
        c.get("samples", sim->samples);
        c.get("thinning", sim->thinning);
        c.get("seed", sim->seed);
        c.get("pairs", sim->pairs_file);
        c.get("all_pairs", sim->all_pairs);
        c.get("out", sim->out);
        c.get("threads", sim->threads);
      });
      sub->add_option("--network", sim->network, "canonical network file");
      sub->add_option("--burn-in", sim->burn_in,
                      "steps before sampling (default 100 * users * opinions)");
      sub->add_option("--samples", sim->samples, "number of recorded samples");
      sub->add_option("--thinning", sim->thinning, "steps between samples");
      sub->add_option("--seed", sim->seed, "simulation seed");
      sub->add_option("--pairs", sim->pairs_file, "pair list file for disagreement");
      sub->add_flag("--all-pairs", sim->all_pairs, "track all user pairs");
      sub->add_option("--out", sim->out, "output directory");
      sub->add_option("--threads", sim->threads, "cap worker threads");
      sub->final_callback([sim] { run_simulate(*sim); });
    }

    auto brute = std::make_shared<BruteforceOptions>();
    {
      CLI::App* sub =
          app.add_subcommand("bruteforce", "exact stationary distribution (tiny networks)");
      configure(sub, "bruteforce", [&](ConfigReader& c) {
        c.get("network", brute->network);
        c.get("pairs", brute->pairs_file);
        c.get("no_pairs", brute->no_pairs);
        c.get("out", brute->out);
        c.get("threads", brute->threads);
      });
      sub->add_option("--network", brute->network, "canonical network file");
      sub->add_option("--pairs", brute->pairs_file, "pair list file (default: all pairs)");
      sub->add_flag("--no-pairs", brute->no_pairs, "skip pair disagreement");
      sub->add_option("--out", brute->out, "output directory");
      sub->add_option("--threads", brute->threads, "cap worker threads");
      sub->final_callback([brute] { run_bruteforce(*brute); });
    }

    auto eval = std::make_shared<EvaluateOptions>();
    {
      CLI::App* sub = app.add_subcommand("evaluate", "accuracy and separation metrics");
      configure(sub, "evaluate", [&](ConfigReader& c) {
        c.get("network", eval->network);
        c.get("opinions", eval->opinions);
        c.get("rho", eval->rho);
        c.get("bins", eval->bins);
        c.get("no_classifier", eval->no_classifier);
        c.get("baseline", eval->baseline);
        c.get("seed", eval->seed);
        c.get("out", eval->out);
        c.get("threads", eval->threads);
      });
      sub->add_option("--network", eval->network, "canonical network file");
      sub->add_option("--opinions", eval->opinions, "opinions CSV from solve");
      sub->add_option("--rho", eval->rho, "discord CSV from discord");
      sub->add_option("--bins", eval->bins, "histogram bins");
      sub->add_flag("--no-classifier", eval->no_classifier, "skip classifier training");
      sub->add_flag("--baseline", eval->baseline,
                    "compare against raw zealot exposures");
      sub->add_option("--seed", eval->seed, "seed echoed to downstream metrics");
      sub->add_option("--out", eval->out, "output directory");
      sub->add_option("--threads", eval->threads, "cap worker threads");
      sub->final_callback([eval] { run_evaluate(*eval); });
    }

    auto comp = std::make_shared<CompareOptions_>();
    {
      CLI::App* sub = app.add_subcommand("compare", "summary table across network variants");
      configure(sub, "compare", [&](ConfigReader& c) {
        c.get("variants", comp->variants);
        c.get("discord", comp->discord_mode);
        c.get("pair_cap", comp->pair_cap);
        c.get("seed", comp->seed);
        c.get("tolerance", comp->tolerance);
        c.get("max_iterations", comp->max_iterations);
        c.get("out", comp->out);
        c.get("threads", comp->threads);
      });
      sub->add_option("--variant", comp->variants,
                      "name=path of a canonical network file (repeatable)");
      sub->add_option("--discord", comp->discord_mode, "exact|approx");
      sub->add_option("--pair-cap", comp->pair_cap,
                      "max sampled pairs for distance/discord statistics");
      sub->add_option("--seed", comp->seed, "pair-sampling seed");
      sub->add_option("--tolerance", comp->tolerance, "solver residual target");
      sub->add_option("--max-iters", comp->max_iterations, "solver iteration cap");
      sub->add_option("--out", comp->out, "output directory");
      sub->add_option("--threads", comp->threads, "cap worker threads");
      sub->final_callback([comp] { run_compare(*comp); });
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? 0 : 2;
    }
    return 0;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
