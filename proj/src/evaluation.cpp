#include "linscan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "linscan/density.hpp"
#include "linscan/parallel.hpp"

namespace linscan {
namespace {

// Partition ids with every noise point turned into its own singleton.
std::vector<std::int64_t> partition_ids(const Labeling& l) {
  std::vector<std::int64_t> ids(l.size());
  const std::int64_t k = l.num_clusters();
  for (std::size_t i = 0; i < l.size(); ++i) {
    ids[i] = l.is_noise(i) ? k + static_cast<std::int64_t>(i) : l[i];
  }
  return ids;
}

struct PairCounts {
  double together_both = 0.0;  // sum over cells of C(n_ij, 2)
  double together_a = 0.0;     // sum over rows of C(a_i, 2)
  double together_b = 0.0;     // sum over columns of C(b_j, 2)
  double total = 0.0;          // C(n, 2)
};

double choose2(std::uint64_t m) { return m < 2 ? 0.0 : 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

PairCounts pair_counts(const Labeling& a, const Labeling& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand index: labelings differ in length");
  if (a.size() < 2) throw std::invalid_argument("rand index: needs at least two points");
  const auto ia = partition_ids(a);
  const auto ib = partition_ids(b);

  std::unordered_map<std::int64_t, std::uint64_t> rows, cols;
  struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const {
      return std::hash<std::int64_t>()(p.first * 1000003 + p.second);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::uint64_t, PairHash> cells;
  for (std::size_t i = 0; i < ia.size(); ++i) {
    ++rows[ia[i]];
    ++cols[ib[i]];
    ++cells[{ia[i], ib[i]}];
  }
  PairCounts c;
  for (const auto& [key, m] : cells) c.together_both += choose2(m);
  for (const auto& [key, m] : rows) c.together_a += choose2(m);
  for (const auto& [key, m] : cols) c.together_b += choose2(m);
  c.total = choose2(ia.size());
  return c;
}

}  // namespace

double rand_index(const Labeling& a, const Labeling& b) {
  const PairCounts c = pair_counts(a, b);
  const double apart_both = c.total - c.together_a - c.together_b + c.together_both;
  return (c.together_both + apart_both) / c.total;
}

double adjusted_rand_index(const Labeling& a, const Labeling& b) {
  const PairCounts c = pair_counts(a, b);
  const bool a_trivial = c.together_a == 0.0 || c.together_a == c.total;
  const bool degenerate =
      a_trivial && c.together_a == c.together_b;  // both all-singletons or both all-together
  if (degenerate) return 1.0;
  const double expected = c.together_a * c.together_b / c.total;
  const double max_index = 0.5 * (c.together_a + c.together_b);
  return (c.together_both - expected) / (max_index - expected);
}

// ---------------------------------------------------------------------------

void SyntheticSpec::validate() const {
  if (n_linear < 0 || n_isotropic < 0 || n_crossing_pairs < 0) {
    throw std::invalid_argument("SyntheticSpec: negative cluster count");
  }
  if (n_linear + n_isotropic + n_crossing_pairs == 0) {
    throw std::invalid_argument("SyntheticSpec: no clusters requested");
  }
  if (points_per_cluster < 1) throw std::invalid_argument("SyntheticSpec: points_per_cluster < 1");
  if (!(angle_min <= angle_max)) throw std::invalid_argument("SyntheticSpec: angle_min > angle_max");
  if (!(line_length > 0.0) || !(placement_margin > 0.0)) {
    throw std::invalid_argument("SyntheticSpec: non-positive length or margin");
  }
  if (orthogonal_noise_sd < 0.0 || isotropic_sd < 0.0 || noise_fraction < 0.0) {
    throw std::invalid_argument("SyntheticSpec: negative noise parameter");
  }
}

namespace {

void add_line(std::vector<Vec2>& pts, std::vector<int>& labels, std::mt19937_64& rng, Vec2 center,
              double angle, int count, double length, double noise_sd, int label) {
  std::uniform_real_distribution<double> along(-0.5 * length, 0.5 * length);
  std::normal_distribution<double> across(0.0, 1.0);
  const Vec2 dir{std::cos(angle), std::sin(angle)};
  const Vec2 normal{-dir.y, dir.x};
  for (int i = 0; i < count; ++i) {
    const double t = along(rng);
    const double o = noise_sd * across(rng);
    pts.push_back(center + t * dir + o * normal);
    labels.push_back(label);
  }
}

}  // namespace

SyntheticDataset generate(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  std::vector<ClusterKind> items;
  items.insert(items.end(), static_cast<std::size_t>(spec.n_linear), ClusterKind::linear);
  items.insert(items.end(), static_cast<std::size_t>(spec.n_isotropic), ClusterKind::isotropic);
  items.insert(items.end(), static_cast<std::size_t>(spec.n_crossing_pairs), ClusterKind::crossing);
  std::shuffle(items.begin(), items.end(), rng);

  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(items.size()))));
  const std::size_t rows = (items.size() + cols - 1) / cols;

  std::uniform_real_distribution<double> direction(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> crossing(spec.angle_min, spec.angle_max);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticDataset out;
  std::vector<Vec2> pts;
  std::vector<int> labels;
  int next_label = 0;
  for (std::size_t slot = 0; slot < items.size(); ++slot) {
    const Vec2 center{static_cast<double>(slot % cols) * spec.placement_margin,
                      static_cast<double>(slot / cols) * spec.placement_margin};
    switch (items[slot]) {
      case ClusterKind::linear: {
        const double angle = direction(rng);
        const int label = next_label++;
        add_line(pts, labels, rng, center, angle, spec.points_per_cluster, spec.line_length,
                 spec.orthogonal_noise_sd, label);
        out.clusters.push_back({label, ClusterKind::linear, center, angle, -1, 0.0});
        break;
      }
      case ClusterKind::isotropic: {
        const int label = next_label++;
        for (int i = 0; i < spec.points_per_cluster; ++i) {
          const double dx = spec.isotropic_sd * gauss(rng);
          const double dy = spec.isotropic_sd * gauss(rng);
          pts.push_back(center + Vec2{dx, dy});
          labels.push_back(label);
        }
        out.clusters.push_back({label, ClusterKind::isotropic, center, 0.0, -1, 0.0});
        break;
      }
      case ClusterKind::crossing: {
        const double first = direction(rng);
        const double between = crossing(rng);
        const int la = next_label++;
        const int lb = next_label++;
        add_line(pts, labels, rng, center, first, spec.points_per_cluster, spec.line_length,
                 spec.orthogonal_noise_sd, la);
        add_line(pts, labels, rng, center, first + between, spec.points_per_cluster,
                 spec.line_length, spec.orthogonal_noise_sd, lb);
        out.clusters.push_back({la, ClusterKind::crossing, center, first, lb, between});
        out.clusters.push_back({lb, ClusterKind::crossing, center, first + between, la, between});
        break;
      }
    }
  }

  const auto noise = static_cast<std::size_t>(std::llround(spec.noise_fraction * static_cast<double>(pts.size())));
  const double half = 0.5 * spec.placement_margin;
  std::uniform_real_distribution<double> nx(-half, static_cast<double>(cols - 1) * spec.placement_margin + half);
  std::uniform_real_distribution<double> ny(-half, static_cast<double>(rows - 1) * spec.placement_margin + half);
  for (std::size_t i = 0; i < noise; ++i) {
    const double x = nx(rng);
    const double y = ny(rng);
    pts.push_back({x, y});
    labels.push_back(Labeling::kNoise);
  }

  out.cloud = PointCloud(std::move(pts));
  out.truth = Labeling(std::move(labels));
  return out;
}

SyntheticDataset generate_crossing(const CrossingSpec& spec) {
  if (spec.points_per_line < 1) throw std::invalid_argument("CrossingSpec: points_per_line < 1");
  std::mt19937_64 rng(spec.seed);
  std::vector<Vec2> pts;
  std::vector<int> labels;
  const Vec2 origin{};
  add_line(pts, labels, rng, origin, spec.orientation, spec.points_per_line, spec.line_length,
           spec.noise_sd, 0);
  add_line(pts, labels, rng, origin, spec.orientation + spec.angle, spec.points_per_line,
           spec.line_length, spec.noise_sd, 1);
  SyntheticDataset out;
  out.cloud = PointCloud(std::move(pts));
  out.truth = Labeling(std::move(labels));
  out.clusters.push_back({0, ClusterKind::crossing, origin, spec.orientation, 1, spec.angle});
  out.clusters.push_back({1, ClusterKind::crossing, origin, spec.orientation + spec.angle, 0, spec.angle});
  return out;
}

std::vector<SyntheticDataset> make_datasets(SyntheticSpec spec, std::size_t count,
                                            std::uint64_t first_seed) {
  std::vector<SyntheticDataset> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    spec.seed = first_seed + i;
    out.push_back(generate(spec));
  }
  return out;
}

double diameter(const PointCloud& cloud) {
  double best = 0.0;
  const auto pts = cloud.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, squared_norm(pts[i] - pts[j]));
  }
  return std::sqrt(best);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Algorithm a) {
  return a == Algorithm::linscan ? "linscan" : "optics";
}

Algorithm algorithm_from_string(std::string_view s) {
  if (s == "linscan") return Algorithm::linscan;
  if (s == "optics") return Algorithm::optics;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

SearchSpace SearchSpace::for_datasets(std::span<const SyntheticDataset> sets) {
  SearchSpace space;
  double diam = 0.0;
  for (const auto& s : sets) diam = std::max(diam, diameter(s.cloud));
  if (diam > 0.0) space.eps = {0.05 * diam, diam, false};
  return space;
}

void SearchSpace::validate() const {
  for (const ParamRange* r : {&min_pts, &ecc_pts, &xi, &tau, &eps}) {
    if (!(r->lo <= r->hi)) throw std::invalid_argument("SearchSpace: empty range");
  }
  if (min_pts.lo < 2 || ecc_pts.lo < 3) throw std::invalid_argument("SearchSpace: minPts >= 2, eccPts >= 3");
  if (!(xi.lo > 0.0 && xi.hi < 1.0)) throw std::invalid_argument("SearchSpace: xi must lie in (0, 1)");
  if (!(tau.lo > 0.0 && tau.hi <= 1.0)) throw std::invalid_argument("SearchSpace: tau must lie in (0, 1]");
  if (!(eps.lo > 0.0) || !(linscan_eps > 0.0)) throw std::invalid_argument("SearchSpace: eps must be positive");
}

namespace {

double draw(const ParamRange& r, std::mt19937_64& rng) {
  if (r.integer) {
    return static_cast<double>(std::uniform_int_distribution<long long>(
        static_cast<long long>(std::ceil(r.lo)), static_cast<long long>(std::floor(r.hi)))(rng));
  }
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

LinscanParams sample_params(const SearchSpace& space, Algorithm algorithm, std::mt19937_64& rng) {
  LinscanParams p;
  p.min_pts = static_cast<int>(draw(space.min_pts, rng));
  if (algorithm == Algorithm::linscan) {
    p.ecc_pts = static_cast<int>(draw(space.ecc_pts, rng));
    p.xi = draw(space.xi, rng);
    p.eps = space.linscan_eps;
  } else {
    p.eps = draw(space.eps, rng);
  }
  p.tau = draw(space.tau, rng);
  return p;
}

Labeling run_algorithm(Algorithm algorithm, const PointCloud& cloud, const LinscanParams& params,
                       const LinscanOptions& options) {
  if (algorithm == Algorithm::linscan) return linscan_filtered(cloud, params, options).labels;
  const EuclideanOracle oracle(cloud);
  const OpticsResult ordering = optics(oracle, params.eps, params.min_pts);
  const Labeling raw = extract_dbscan(ordering, params.eps, params.min_pts);
  return spectral_filter(cloud, raw, params.tau).labels;
}

BenchmarkResult benchmark(const Labeler& labeler, std::span<const SyntheticDataset> sets) {
  BenchmarkResult r;
  r.per_set.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    r.per_set[i] = adjusted_rand_index(labeler(sets[i]), sets[i].truth);
  }
  double sum = 0.0;
  for (double v : r.per_set) sum += v;
  r.mean_ari = sets.empty() ? 0.0 : sum / static_cast<double>(sets.size());
  return r;
}

BenchmarkResult benchmark(const LinscanParams& params, std::span<const SyntheticDataset> sets,
                          Algorithm algorithm) {
  return benchmark([&](const SyntheticDataset& d) { return run_algorithm(algorithm, d.cloud, params); },
                   sets);
}

SearchResult random_search(const SearchSpace& space, std::size_t trials,
                           std::span<const SyntheticDataset> validation, Algorithm algorithm,
                           std::uint64_t seed) {
  space.validate();
  if (trials == 0) throw std::invalid_argument("random_search: trials must be at least 1");
  if (validation.empty()) throw std::invalid_argument("random_search: no validation sets");

  SearchResult result;
  result.algorithm = algorithm;
  result.trials.resize(trials);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    result.trials[t].trial = t;
    result.trials[t].params = sample_params(space, algorithm, rng);
  }

  parallel_for(trials, [&](std::size_t t) {
    TrialRecord& rec = result.trials[t];
    const BenchmarkResult b = benchmark(rec.params, validation, algorithm);
    rec.per_set_ari = b.per_set;
    rec.mean_ari = b.mean_ari;
  });

  for (std::size_t t = 0; t < trials; ++t) {
    if (t == 0 || result.trials[t].mean_ari > result.validation_ari) {
      result.validation_ari = result.trials[t].mean_ari;
      result.best_trial = t;
    }
  }
  result.best = result.trials[result.best_trial].params;
  return result;
}

std::uint64_t validation_seed(std::uint64_t seed) { return seed * 100000 + 1; }
std::uint64_t test_seed(std::uint64_t seed) { return seed * 100000 + 50001; }

StudyResult run_study(const StudyConfig& config, Algorithm algorithm) {
  if (config.validation_sets == 0 || config.test_sets == 0) {
    throw std::invalid_argument("run_study: need at least one validation and one test set");
  }
  const auto validation = make_datasets(config.data, config.validation_sets, validation_seed(config.seed));
  const auto test = make_datasets(config.data, config.test_sets, test_seed(config.seed));
  StudyResult out;
  out.search = random_search(SearchSpace::for_datasets(validation), config.trials, validation, algorithm,
                             config.seed);
  out.test = benchmark(out.search.best, test, algorithm);
  return out;
}

}  // namespace linscan
