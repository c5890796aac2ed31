#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sld/diffusion.hpp"
#include "sld/edge_list_io.hpp"
#include "sld/evaluation.hpp"
#include "sld/report.hpp"

namespace sld {

// Parameter grid for one algorithm. Empty lists take the defaults of
// with_defaults().
struct AlgorithmGrid {
  Algorithm algorithm = Algorithm::kMassDiffusion;
  std::vector<double> lambdas;
  std::vector<int> macro_steps;
  std::vector<double> thetas;

  // Fills empty parameter lists: lambda 0..1 step 0.1 (hybrid), n 1..10
  // (SLD), n = 3 (U-SLD, O-SLD), theta -2..2 step 0.1 (U-SLD, O-SLD, RENBI).
  AlgorithmGrid with_defaults() const;

  // Grid points in ascending parameter order. Call on a defaulted grid.
  std::vector<DiffusionParams> expand() const;
};

std::vector<double> default_theta_grid();
std::vector<double> default_lambda_grid();

struct ExperimentConfig {
  // Either `dataset` (split internally) or both `training` and `probe`.
  std::filesystem::path dataset;
  std::filesystem::path training;
  std::filesystem::path probe;
  double split_ratio = 0.8;
  std::uint64_t seed = 42;
  std::optional<double> min_rating;

  std::vector<AlgorithmGrid> algorithms;
  std::vector<std::size_t> lengths{20};
  std::vector<std::string> metrics{"rs", "recall", "hits"};
  std::vector<Index> hits_max_user_degree{5};
  std::vector<Index> hits_min_user_degree{20};
  BinningOptions binning;

  std::filesystem::path output_dir;
  unsigned workers = 0;  // 0: $SLD_WORKERS or hardware concurrency

  // Throws ConfigError for empty grids, unknown metrics or bad values.
  // `check_files` also requires the input files to exist.
  void validate(bool check_files = true) const;

  // Round-trips through from_json. Excludes workers and output_dir, which do
  // not affect results.
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  // FNV-1a of to_json().dump(), hex.
  std::string hash() const;
};

// Training graph and probe links in one index space.
struct ExperimentData {
  IdMap users;
  IdMap items;
  BipartiteGraph training;
  std::vector<Edge> probe;
  std::size_t links = 0;
  ReadStats stats;
};

// Reads the configured files and applies the split. Throws DataError.
ExperimentData prepare_data(const ExperimentConfig& config);
ExperimentData make_data(Index num_users, Index num_items, const SplitDataset& split);

struct SummaryRow {
  std::string algorithm;
  DiffusionParams params;
  std::string metric;
  std::optional<std::size_t> length;
  std::optional<double> value;
  std::size_t population = 0;
};

struct ExperimentResult {
  std::vector<MetricReport> reports;
  std::vector<SummaryRow> summary;
  ProbeIndex probe;
};

// Scores every user owning an evaluable probe link at every grid point and
// computes the configured metrics. Mass-diffusion variants for one user share
// a single series of macro-steps.
ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentData& data);

// Writes one JSON per report, a CSV per binned report, summary.csv and
// manifest.json under config.output_dir.
void write_results(const ExperimentConfig& config, const ExperimentData& data,
                   const ExperimentResult& result);

struct OptimalParameter {
  Algorithm algorithm = Algorithm::kMassDiffusion;
  DiffusionParams params;
  std::string metric;
  std::optional<std::size_t> length;
  double value = 0.0;
};

// Best grid point per algorithm: lowest <RS> for "rs", highest recall for
// "recall" at `length`. Ties go to the earlier (smaller) grid point. Throws
// ConfigError for a grid with fewer than two points.
std::vector<OptimalParameter> sweep_optimal(const ExperimentConfig& config,
                                            const ExperimentData& data,
                                            const std::string& metric,
                                            std::size_t length = 20);

void write_sweep(const std::filesystem::path& path,
                 const std::vector<OptimalParameter>& optima);

struct CoverageResult {
  std::vector<double> per_user;  // NaN for users without links
  MetricReport report;
};

CoverageResult coverage_report(const BipartiteGraph& graph, unsigned workers,
                               int steps = 3,
                               CoverageDenominator denominator = CoverageDenominator::kAllItems,
                               const BinningOptions& binning = {});

struct TopListRow {
  Index user = 0;
  Index item = 0;
  double score = 0.0;
  std::size_t rank = 0;
};

// Top-`length` uncollected items per user (item-index tie policy). Users
// without training links are skipped.
std::vector<TopListRow> export_top_lists(const BipartiteGraph& graph,
                                         const DiffusionParams& params,
                                         std::span<const Index> users, std::size_t length,
                                         unsigned workers);

}  // namespace sld
