#include "linscan/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "linscan/density.hpp"
#include "linscan/io.hpp"
#include "linscan/pipeline.hpp"

namespace linscan::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kManifest = "manifest.json";

bool takes_input(Command c) {
  return c == Command::dbscan || c == Command::optics || c == Command::linscan;
}

bool uses_generator(Command c) {
  return c == Command::generate || c == Command::benchmark || c == Command::search;
}

ordered_json number_or_inf(double v) {
  if (std::isinf(v) && v > 0) return "inf";
  return v;
}

double read_number_or_inf(const ordered_json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw ConfigError("manifest: expected a number or \"inf\"");
  }
  return j.get<double>();
}

ordered_json params_json(const LinscanParams& p) {
  ordered_json j;
  j["ecc_pts"] = p.ecc_pts;
  j["min_pts"] = p.min_pts;
  j["xi"] = p.xi;
  j["eps"] = number_or_inf(p.eps);
  j["tau"] = p.tau;
  j["seed"] = p.seed;
  return j;
}

LinscanParams params_from(const ordered_json& j) {
  LinscanParams p;
  p.ecc_pts = j.at("ecc_pts").get<int>();
  p.min_pts = j.at("min_pts").get<int>();
  p.xi = j.at("xi").get<double>();
  p.eps = read_number_or_inf(j.at("eps"));
  p.tau = j.at("tau").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

ordered_json generator_json(const SyntheticSpec& s) {
  ordered_json j;
  j["n_linear"] = s.n_linear;
  j["n_isotropic"] = s.n_isotropic;
  j["n_crossing_pairs"] = s.n_crossing_pairs;
  j["angle_min"] = s.angle_min;
  j["angle_max"] = s.angle_max;
  j["points_per_cluster"] = s.points_per_cluster;
  j["line_length"] = s.line_length;
  j["orthogonal_noise_sd"] = s.orthogonal_noise_sd;
  j["isotropic_sd"] = s.isotropic_sd;
  j["placement_margin"] = s.placement_margin;
  j["noise_fraction"] = s.noise_fraction;
  return j;
}

SyntheticSpec generator_from(const ordered_json& j) {
  SyntheticSpec s;
  s.n_linear = j.at("n_linear").get<int>();
  s.n_isotropic = j.at("n_isotropic").get<int>();
  s.n_crossing_pairs = j.at("n_crossing_pairs").get<int>();
  s.angle_min = j.at("angle_min").get<double>();
  s.angle_max = j.at("angle_max").get<double>();
  s.points_per_cluster = j.at("points_per_cluster").get<int>();
  s.line_length = j.at("line_length").get<double>();
  s.orthogonal_noise_sd = j.at("orthogonal_noise_sd").get<double>();
  s.isotropic_sd = j.at("isotropic_sd").get<double>();
  s.placement_margin = j.at("placement_margin").get<double>();
  s.noise_fraction = j.at("noise_fraction").get<double>();
  return s;
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = to_string(c.command);
  if (takes_input(c.command)) j["input"] = c.input.generic_string();
  j["params"] = params_json(c.params);
  j["prune"] = c.prune;
  j["svg"] = c.svg;
  if (uses_generator(c.command)) {
    j["dataset"] = c.dataset;
    j["generator"] = generator_json(c.suite);
    j["crossing_angle_deg"] = c.crossing_angle_deg;
    j["algorithm"] = c.algorithm;
    j["trials"] = c.trials;
    j["validation_sets"] = c.validation_sets;
    j["test_sets"] = c.test_sets;
  }
  return j;
}

std::string dump_line(const ordered_json& j) { return j.dump() + "\n"; }

void add_svg(io::ArtifactSet& files, const RunConfig& c, const PointCloud& cloud, const Labeling& labels) {
  if (c.svg) files.add("scatter.svg", io::scatter_svg(cloud, labels));
}

// Generator settings for `benchmark` and `search`: the suite, seeded per set.
std::vector<SyntheticDataset> test_suite(const RunConfig& c) {
  return make_datasets(c.suite, c.test_sets, test_seed(c.params.seed));
}

ordered_json trial_json(const TrialRecord& t) {
  ordered_json j;
  j["trial"] = t.trial;
  j["params"] = params_json(t.params);
  j["per_set_ari"] = t.per_set_ari;
  j["mean_ari"] = t.mean_ari;
  return j;
}

void produce(const RunConfig& c, io::ArtifactSet& files, ordered_json& manifest) {
  const LinscanParams& p = c.params;
  switch (c.command) {
    case Command::dbscan: {
      const std::string text = io::read_file(c.input);
      const PointCloud cloud = io::parse_points(text);
      manifest["input_sha256"] = io::sha256_hex(text);
      const Labeling labels = dbscan(EuclideanOracle(cloud), p.eps, p.min_pts);
      files.add("labels.csv", io::labels_csv(cloud, labels));
      add_svg(files, c, cloud, labels);
      return;
    }
    case Command::optics: {
      const std::string text = io::read_file(c.input);
      const PointCloud cloud = io::parse_points(text);
      manifest["input_sha256"] = io::sha256_hex(text);
      const OpticsResult result = optics(EuclideanOracle(cloud), p.eps, p.min_pts);
      const Labeling labels = extract_xi(result, p.xi, p.min_pts);
      files.add("labels.csv", io::labels_csv(cloud, labels));
      files.add("reachability.csv", io::reachability_csv(result));
      add_svg(files, c, cloud, labels);
      return;
    }
    case Command::linscan: {
      const std::string text = io::read_file(c.input);
      const PointCloud cloud = io::parse_points(text);
      manifest["input_sha256"] = io::sha256_hex(text);
      LinscanOptions options;
      options.prune = c.prune;
      const LinscanResult raw = linscan(cloud, p, options);
      const FilterResult filtered = spectral_filter(cloud, raw.labels, p.tau);
      files.add("labels.csv", io::labels_csv(cloud, filtered.labels));
      files.add("reachability.csv", io::reachability_csv(raw.optics));
      files.add("summaries.csv", io::summaries_csv(filtered.summaries));
      add_svg(files, c, cloud, filtered.labels);
      return;
    }
    case Command::generate: {
      SyntheticDataset data = [&] {
        if (c.dataset == "crossing") {
          CrossingSpec spec;
          spec.angle = c.crossing_angle_deg * std::numbers::pi / 180.0;
          spec.points_per_line = c.suite.points_per_cluster;
          spec.line_length = c.suite.line_length;
          spec.noise_sd = c.suite.orthogonal_noise_sd;
          spec.seed = p.seed;
          return generate_crossing(spec);
        }
        SyntheticSpec spec = c.suite;
        spec.seed = p.seed;
        return generate(spec);
      }();
      files.add("points.csv", io::points_csv(data.cloud));
      files.add("truth.csv", io::labels_csv(data.cloud, data.truth));
      add_svg(files, c, data.cloud, data.truth);
      return;
    }
    case Command::benchmark: {
      const auto sets = test_suite(c);
      const Algorithm alg = algorithm_from_string(c.algorithm);
      const BenchmarkResult r = benchmark(p, sets, alg);
      ordered_json j;
      j["algorithm"] = c.algorithm;
      j["params"] = params_json(p);
      j["per_set_ari"] = r.per_set;
      j["mean_ari"] = r.mean_ari;
      files.add("benchmark.jsonl", dump_line(j));
      return;
    }
    case Command::search: {
      StudyConfig study;
      study.data = c.suite;
      study.trials = c.trials;
      study.validation_sets = c.validation_sets;
      study.test_sets = c.test_sets;
      study.seed = p.seed;
      std::vector<Algorithm> algs;
      if (c.algorithm == "both") {
        algs = {Algorithm::linscan, Algorithm::optics};
      } else {
        algs = {algorithm_from_string(c.algorithm)};
      }
      ordered_json summary;
      for (Algorithm alg : algs) {
        const StudyResult r = run_study(study, alg);
        std::string lines;
        for (const auto& t : r.search.trials) lines += dump_line(trial_json(t));
        const std::string name(to_string(alg));
        files.add("search_" + name + ".jsonl", lines);
        ordered_json s;
        s["best_trial"] = r.search.best_trial;
        s["best_params"] = params_json(r.search.best);
        s["validation_ari"] = r.search.validation_ari;
        s["test_per_set_ari"] = r.test.per_set;
        s["test_mean_ari"] = r.test.mean_ari;
        summary[name] = s;
      }
      files.add("study.json", summary.dump(2) + "\n");
      return;
    }
  }
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::dbscan: return "dbscan";
    case Command::optics: return "optics";
    case Command::linscan: return "linscan";
    case Command::generate: return "generate";
    case Command::benchmark: return "benchmark";
    case Command::search: return "search";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::dbscan, Command::optics, Command::linscan, Command::generate,
                    Command::benchmark, Command::search}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown subcommand '" + s + "'");
}

void RunConfig::validate() const {
  const LinscanParams& p = params;
  if (takes_input(command)) check(!input.empty(), "an input file is required");
  check(!out.empty(), "--out must not be empty");
  switch (command) {
    case Command::dbscan:
      check(p.min_pts >= 2, "--min-pts must be at least 2");
      check(p.eps >= 0.0, "--eps must be nonnegative");
      break;
    case Command::optics:
      check(p.min_pts >= 2, "--min-pts must be at least 2");
      check(p.eps > 0.0, "--eps must be positive");
      check(p.xi > 0.0 && p.xi < 1.0, "--xi must lie in (0, 1)");
      break;
    case Command::linscan:
    case Command::benchmark:
      try {
        p.validate();
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      break;
    default:
      break;
  }
  if (uses_generator(command)) {
    try {
      suite.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    check(dataset == "suite" || dataset == "crossing", "--dataset must be 'suite' or 'crossing'");
    check(crossing_angle_deg > 0.0 && crossing_angle_deg < 180.0, "--angle-deg must lie in (0, 180)");
  }
  if (command == Command::benchmark) {
    check(algorithm == "linscan" || algorithm == "optics", "--algorithm must be 'linscan' or 'optics'");
    check(test_sets >= 1, "--test-sets must be at least 1");
  }
  if (command == Command::search) {
    check(algorithm == "linscan" || algorithm == "optics" || algorithm == "both",
          "--algorithm must be 'linscan', 'optics' or 'both'");
    check(trials >= 1, "--trials must be at least 1");
    check(validation_sets >= 1, "--validation-sets must be at least 1");
    check(test_sets >= 1, "--test-sets must be at least 1");
  }
}

std::string config_to_json(const RunConfig& config) { return config_json(config).dump(2) + "\n"; }

RunConfig config_from_json(const std::string& json_text) {
  try {
    const ordered_json j = ordered_json::parse(json_text);
    RunConfig c;
    c.command = command_from_string(j.at("command").get<std::string>());
    if (takes_input(c.command)) c.input = j.at("input").get<std::string>();
    c.params = params_from(j.at("params"));
    c.prune = j.at("prune").get<bool>();
    c.svg = j.at("svg").get<bool>();
    if (uses_generator(c.command)) {
      c.dataset = j.at("dataset").get<std::string>();
      c.suite = generator_from(j.at("generator"));
      c.crossing_angle_deg = j.at("crossing_angle_deg").get<double>();
      c.algorithm = j.at("algorithm").get<std::string>();
      c.trials = j.at("trials").get<std::size_t>();
      c.validation_sets = j.at("validation_sets").get<std::size_t>();
      c.test_sets = j.at("test_sets").get<std::size_t>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
}

void run(const RunConfig& config) {
  config.validate();
  io::ArtifactSet files;
  ordered_json manifest = config_json(config);
  produce(config, files, manifest);

  ordered_json digests = ordered_json::object();
  for (const auto& [name, content] : files.files()) digests[name] = io::sha256_hex(content);
  manifest["outputs"] = digests;
  files.add(kManifest, manifest.dump(2) + "\n");
  files.commit(config.out);
}

ParseOutcome parse_args(const std::vector<std::string>& args) {
  ParseOutcome outcome;
  RunConfig& c = outcome.config;

  CLI::App app{"Density-based clustering of quasi-linear structures in 2-D point sets"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", c.params.seed, "Random seed, recorded in the manifest");
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", c.input, "Point file: two real columns per line")->required();
    sub->add_flag("--svg", c.svg, "Also write scatter.svg");
  };
  auto add_params = [&](CLI::App* sub, bool ecc, bool xi, bool tau) {
    sub->add_option("--min-pts", c.params.min_pts, "Density threshold");
    sub->add_option("--eps", c.params.eps, "Neighborhood radius (inf allowed)");
    if (ecc) sub->add_option("--ecc-pts", c.params.ecc_pts, "Neighbors used for each embedding");
    if (xi) sub->add_option("--xi", c.params.xi, "Steepness for xi extraction");
    if (tau) sub->add_option("--tau", c.params.tau, "Spectral ratio threshold");
  };
  auto add_generator = [&](CLI::App* sub) {
    SyntheticSpec& s = c.suite;
    sub->add_option("--n-linear", s.n_linear, "Linear clusters");
    sub->add_option("--n-isotropic", s.n_isotropic, "Isotropic blobs");
    sub->add_option("--n-crossing", s.n_crossing_pairs, "Crossing line pairs");
    sub->add_option("--points-per-cluster", s.points_per_cluster, "Points per cluster or line");
    sub->add_option("--line-length", s.line_length, "Line segment length");
    sub->add_option("--noise-sd", s.orthogonal_noise_sd, "Orthogonal jitter of line points");
    sub->add_option("--isotropic-sd", s.isotropic_sd, "Blob standard deviation");
    sub->add_option("--margin", s.placement_margin, "Grid spacing between cluster centers");
    sub->add_option("--noise-fraction", s.noise_fraction, "Uniform background points per clustered point");
  };

  auto* dbscan_cmd = app.add_subcommand("dbscan", "Euclidean DBSCAN");
  add_common(dbscan_cmd);
  add_input(dbscan_cmd);
  add_params(dbscan_cmd, false, false, false);

  auto* optics_cmd = app.add_subcommand("optics", "Euclidean OPTICS with xi extraction");
  add_common(optics_cmd);
  add_input(optics_cmd);
  add_params(optics_cmd, false, true, false);

  auto* linscan_cmd = app.add_subcommand("linscan", "Embed, cluster and filter");
  add_common(linscan_cmd);
  add_input(linscan_cmd);
  add_params(linscan_cmd, true, true, true);
  bool no_prune = false;
  linscan_cmd->add_flag("--no-prune", no_prune, "Evaluate every pair exactly");

  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic dataset with ground truth");
  add_common(generate_cmd);
  add_generator(generate_cmd);
  generate_cmd->add_option("--dataset", c.dataset, "suite or crossing");
  generate_cmd->add_option("--angle-deg", c.crossing_angle_deg, "Crossing angle for --dataset crossing");
  generate_cmd->add_flag("--svg", c.svg, "Also write scatter.svg");

  auto* benchmark_cmd = app.add_subcommand("benchmark", "Score fixed parameters on generated test sets");
  add_common(benchmark_cmd);
  add_generator(benchmark_cmd);
  add_params(benchmark_cmd, true, true, true);
  benchmark_cmd->add_option("--algorithm", c.algorithm, "linscan or optics");
  benchmark_cmd->add_option("--test-sets", c.test_sets, "Number of test sets");

  auto* search_cmd = app.add_subcommand("search", "Random search on validation sets, then test");
  add_common(search_cmd);
  add_generator(search_cmd);
  search_cmd->add_option("--algorithm", c.algorithm, "linscan, optics or both")->default_str("both");
  search_cmd->add_option("--trials", c.trials, "Search trials");
  search_cmd->add_option("--validation-sets", c.validation_sets, "Validation sets");
  search_cmd->add_option("--test-sets", c.test_sets, "Test sets");

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the config recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json from an earlier run")->required();
  replay_cmd->add_option("--out", out_dir, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    outcome.help_requested = true;
    outcome.help_text = app.help();
    return outcome;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (replay_cmd->parsed()) {
    const std::string text = io::read_file(manifest_path);
    c = config_from_json(text);
    const ordered_json recorded = ordered_json::parse(text);
    if (takes_input(c.command) && recorded.contains("input_sha256")) {
      const std::string digest = io::sha256_hex(io::read_file(c.input));
      check(digest == recorded.at("input_sha256").get<std::string>(),
            "replay: input '" + c.input.generic_string() + "' differs from the recorded digest");
    }
    c.out = out_dir;
    return outcome;
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.command = command_from_string(chosen->get_name());
  c.out = out_dir;
  c.prune = !no_prune;
  if (c.command == Command::search && search_cmd->count("--algorithm") == 0) c.algorithm = "both";
  return outcome;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const ParseOutcome parsed = parse_args(args);
    if (parsed.help_requested) {
      out << parsed.help_text;
      return 0;
    }
    run(parsed.config);
    out << "wrote " << to_string(parsed.config.command) << " outputs to "
        << parsed.config.out.generic_string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace linscan::cli
