#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linscan/pipeline.hpp"
#include "linscan/types.hpp"

namespace linscan {

// ---------------------------------------------------------------------------
// Scoring. Noise points count as singleton clusters in both labelings.

/// Fraction of point pairs on which the two labelings agree (same cluster
/// in both, or different clusters in both). Throws std::invalid_argument on
/// a length mismatch or fewer than two points.
double rand_index(const Labeling& a, const Labeling& b);

/// Hubert-Arabie adjusted Rand index from the contingency table. When both
/// partitions are trivial in the same way (all together, or all
/// singletons) the chance-corrected score is 0/0 and is defined as 1.
double adjusted_rand_index(const Labeling& a, const Labeling& b);

// ---------------------------------------------------------------------------
// Synthetic benchmark data.

enum class ClusterKind { linear, isotropic, crossing };

struct GeneratedCluster {
  int label = 0;
  ClusterKind kind = ClusterKind::linear;
  Vec2 center;
  double orientation_rad = 0.0;  // line direction; 0 for isotropic blobs
  int partner = -1;              // other line of a crossing pair
  double crossing_angle_rad = 0.0;
};

struct SyntheticSpec {
  int n_linear = 10;
  int n_isotropic = 5;
  int n_crossing_pairs = 10;
  double angle_min = 0.1 * std::numbers::pi;
  double angle_max = 0.9 * std::numbers::pi;
  int points_per_cluster = 100;
  double line_length = 1.0;
  double orthogonal_noise_sd = 0.02;
  double isotropic_sd = 0.1;
  double placement_margin = 3.0;  // grid spacing between cluster centers
  double noise_fraction = 0.0;    // uniform background points, relative to clustered points
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticDataset {
  PointCloud cloud;
  Labeling truth;
  std::vector<GeneratedCluster> clusters;
};

/// Linear clusters, isotropic blobs and crossing line pairs, one item per
/// cell of a square grid with spacing placement_margin. Crossing pairs share
/// a midpoint and carry two labels. Deterministic in spec.seed.
SyntheticDataset generate(const SyntheticSpec& spec);

struct CrossingSpec {
  double angle = 0.5 * std::numbers::pi;
  int points_per_line = 100;
  double line_length = 1.0;
  double noise_sd = 0.02;
  double orientation = 0.25 * std::numbers::pi;  // direction of the first line
  std::uint64_t seed = 0;
};

/// Two line segments crossing at their midpoints (the origin).
SyntheticDataset generate_crossing(const CrossingSpec& spec);

// `count` datasets with seeds first_seed, first_seed + 1, ...
std::vector<SyntheticDataset> make_datasets(SyntheticSpec spec, std::size_t count,
                                            std::uint64_t first_seed);

// Largest pairwise distance.
double diameter(const PointCloud& cloud);

// ---------------------------------------------------------------------------
// Hyperparameter search.

enum class Algorithm { linscan, optics };
std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view s);

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
  bool integer = false;
};

/// Per-parameter sampling bounds. LINSCAN samples minPts, eccPts, xi and
/// tau (its OPTICS cap is fixed at linscan_eps); the OPTICS baseline samples
/// minPts, eps and tau.
struct SearchSpace {
  ParamRange min_pts{5, 50, true};
  ParamRange ecc_pts{10, 100, true};
  ParamRange xi{0.01, 0.5, false};
  ParamRange tau{0.05, 0.95, false};
  ParamRange eps{0.05, 1.0, false};
  double linscan_eps = 2.0;

  // eps bounds set to [0.05, 1] x the largest diameter among `sets`.
  static SearchSpace for_datasets(std::span<const SyntheticDataset> sets);
  void validate() const;
};

/// Filtered labeling of `cloud` by the given algorithm. LINSCAN uses xi
/// extraction; the OPTICS baseline extracts at eps. Both then apply the
/// spectral filter with params.tau.
Labeling run_algorithm(Algorithm algorithm, const PointCloud& cloud, const LinscanParams& params,
                       const LinscanOptions& options = {});

using Labeler = std::function<Labeling(const SyntheticDataset&)>;

struct BenchmarkResult {
  double mean_ari = 0.0;
  std::vector<double> per_set;
};

BenchmarkResult benchmark(const Labeler& labeler, std::span<const SyntheticDataset> sets);
BenchmarkResult benchmark(const LinscanParams& params, std::span<const SyntheticDataset> sets,
                          Algorithm algorithm);

struct TrialRecord {
  std::size_t trial = 0;
  LinscanParams params;
  std::vector<double> per_set_ari;
  double mean_ari = 0.0;
};

struct SearchResult {
  Algorithm algorithm = Algorithm::linscan;
  LinscanParams best;
  double validation_ari = 0.0;
  std::size_t best_trial = 0;
  std::vector<TrialRecord> trials;
};

// Draws one parameter set for `algorithm`; fields the algorithm does not
// search keep their defaults (eps is linscan_eps for LINSCAN).
LinscanParams sample_params(const SearchSpace& space, Algorithm algorithm, std::mt19937_64& rng);

/// Uniform random search. Every trial is scored by its mean filtered ARI
/// over the validation sets; the best trial wins, ties going to the
/// earliest. Deterministic in seed.
SearchResult random_search(const SearchSpace& space, std::size_t trials,
                           std::span<const SyntheticDataset> validation, Algorithm algorithm,
                           std::uint64_t seed);

struct StudyConfig {
  SyntheticSpec data;  // data.seed is ignored; set seeds come from `seed`
  std::size_t trials = 100;
  std::size_t validation_sets = 5;
  std::size_t test_sets = 10;
  std::uint64_t seed = 0;
};

struct StudyResult {
  SearchResult search;
  BenchmarkResult test;
};

// Validation sets use seeds validation_seed(seed) + i, test sets
// test_seed(seed) + i; the two ranges never overlap for set counts < 50000.
std::uint64_t validation_seed(std::uint64_t seed);
std::uint64_t test_seed(std::uint64_t seed);

/// Random search on freshly generated validation sets, then the winning
/// parameters scored on separate test sets. The eps range comes from
/// SearchSpace::for_datasets on the validation sets.
StudyResult run_study(const StudyConfig& config, Algorithm algorithm);

}  // namespace linscan
