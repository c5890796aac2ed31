#include "sld/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sld/parallel.hpp"

namespace sld {
namespace {

using nlohmann::json;

const std::set<std::string> kMetrics = {"rs", "recall", "hits"};

// Integer-stepped so the values do not drift (0.1 * 3 != 0.3).
std::vector<double> tenths(int from, int to) {
  std::vector<double> out;
  for (int i = from; i <= to; ++i) out.push_back(i / 10.0);
  return out;
}

bool uses_theta(Algorithm a) {
  return a == Algorithm::kUsld || a == Algorithm::kOsld || a == Algorithm::kRenbi;
}
bool uses_macro_steps(Algorithm a) {
  return a == Algorithm::kSld || a == Algorithm::kUsld || a == Algorithm::kOsld;
}
bool on_mass_diffusion(Algorithm a) {
  return a != Algorithm::kHybrid && a != Algorithm::kHeatConduction;
}

int series_length(const DiffusionParams& p) {
  switch (p.algorithm) {
    case Algorithm::kMassDiffusion: return 1;
    case Algorithm::kRenbi: return 2;
    case Algorithm::kSld:
    case Algorithm::kUsld:
    case Algorithm::kOsld: return p.macro_steps;
    default: return 0;
  }
}

template <typename T>
std::vector<T> parse_grid(const json& j, const char* key) {
  std::vector<T> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<T>()};
  if (v.is_array()) return v.get<std::vector<T>>();
  if (v.is_object()) {
    const double from = v.at("from").get<double>();
    const double to = v.at("to").get<double>();
    const double step = v.at("step").get<double>();
    if (!(step > 0.0) || to < from) throw ConfigError(std::string("bad range for ") + key);
    const auto count = static_cast<long>(std::llround((to - from) / step));
    for (long i = 0; i <= count; ++i) {
      // Rounded to 12 digits so that e.g. -2 + 23 * 0.1 prints as 0.3.
      const double x = std::round((from + static_cast<double>(i) * step) * 1e12) / 1e12;
      out.push_back(static_cast<T>(x));
    }
    return out;
  }
  throw ConfigError(std::string("grid '") + key + "' must be a number, list or range");
}

MetricReport base_report(const DiffusionParams& p, const ProbeIndex& probe) {
  MetricReport r;
  r.algorithm = std::string(to_string(p.algorithm));
  if (p.algorithm == Algorithm::kHybrid) r.lambda = p.lambda;
  if (uses_macro_steps(p.algorithm)) r.macro_steps = p.macro_steps;
  if (uses_theta(p.algorithm)) r.theta = p.theta;
  r.skipped_cold_user = probe.skipped_cold_user;
  r.skipped_cold_item = probe.skipped_cold_item;
  r.skipped_in_training = probe.skipped_in_training;
  return r;
}

void append_point_reports(const ExperimentConfig& config, const ExperimentData& data,
                          const ProbeIndex& probe, const DiffusionParams& p,
                          std::span<const UserOutcome> outcomes,
                          std::vector<MetricReport>& reports) {
  const BipartiteGraph& g = data.training;
  const auto user_degrees = g.user_degrees();
  const auto item_degrees = g.item_degrees();
  const auto has = [&](const char* m) {
    return std::find(config.metrics.begin(), config.metrics.end(), m) != config.metrics.end();
  };

  if (has("rs")) {
    const RankingScoreResult rs = ranking_score(outcomes);
    std::vector<double> per_user(g.num_users(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> item_sum(g.num_items(), 0.0);
    std::vector<std::size_t> item_count(g.num_items(), 0);
    std::size_t link = 0;
    for (const UserOutcome& o : outcomes) {
      double sum = 0.0;
      for (std::size_t i = 0; i < o.probe_items.size(); ++i, ++link) {
        sum += rs.per_link[link].value;
        item_sum[o.probe_items[i]] += rs.per_link[link].value;
        ++item_count[o.probe_items[i]];
      }
      per_user[o.user] = sum / static_cast<double>(o.probe_items.size());
    }
    std::vector<double> per_item(g.num_items(), std::numeric_limits<double>::quiet_NaN());
    for (Index a = 0; a < g.num_items(); ++a) {
      if (item_count[a] > 0) per_item[a] = item_sum[a] / static_cast<double>(item_count[a]);
    }

    MetricReport by_user = base_report(p, probe);
    by_user.metric = "rs";
    by_user.overall = rs.mean;
    by_user.population = rs.per_link.size();
    by_user.bin_axis = "user_degree";
    by_user.bins = degree_binned(per_user, user_degrees, config.binning);
    by_user.notes.push_back("bins average per-user mean RS; ties use midrank");
    reports.push_back(std::move(by_user));

    MetricReport by_item = base_report(p, probe);
    by_item.metric = "rs_by_item_degree";
    by_item.overall = rs.mean;
    by_item.population = rs.per_link.size();
    by_item.bin_axis = "item_degree";
    by_item.bins = degree_binned(per_item, item_degrees, config.binning);
    by_item.notes.push_back("bins average per-item mean RS; ties use midrank");
    reports.push_back(std::move(by_item));
  }

  for (std::size_t length : config.lengths) {
    if (has("recall")) {
      const RecallResult re = recall(outcomes, length);
      std::vector<double> per_user(g.num_users(), std::numeric_limits<double>::quiet_NaN());
      for (const UserValue& v : re.per_user) per_user[v.user] = v.value;
      MetricReport r = base_report(p, probe);
      r.metric = "recall";
      r.length = length;
      r.overall = re.overall;
      r.population = re.per_user.size();
      r.bin_axis = "user_degree";
      r.bins = degree_binned(per_user, user_degrees, config.binning);
      r.notes.push_back("averaged over users with at least one evaluable probe link");
      reports.push_back(std::move(r));
    }
    if (has("hits")) {
      const auto add = [&](std::string metric, const HitsResult& h) {
        MetricReport r = base_report(p, probe);
        r.metric = std::move(metric);
        r.length = length;
        r.overall = h.value;
        r.population = h.links;
        reports.push_back(std::move(r));
      };
      add("hits", hits(outcomes, length, Axis::kUser, [](Index) { return true; }));
      for (Index d : config.hits_max_user_degree) {
        add("hits_user_le" + std::to_string(d),
            hits(outcomes, length, Axis::kUser,
                 [&](Index u) { return user_degrees[u] <= d; }));
      }
      for (Index d : config.hits_min_user_degree) {
        add("hits_user_ge" + std::to_string(d),
            hits(outcomes, length, Axis::kUser,
                 [&](Index u) { return user_degrees[u] >= d; }));
      }
      MetricReport r = base_report(p, probe);
      const HitsResult all = hits(outcomes, length, Axis::kUser, [](Index) { return true; });
      r.metric = "hits_by_item_degree";
      r.length = length;
      r.overall = all.value;
      r.population = all.links;
      r.bin_axis = "item_degree";
      r.bins = hits_by_item_degree(outcomes, length, item_degrees, config.binning);
      reports.push_back(std::move(r));
    }
  }
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace

std::vector<double> default_theta_grid() { return tenths(-20, 20); }
std::vector<double> default_lambda_grid() { return tenths(0, 10); }

AlgorithmGrid AlgorithmGrid::with_defaults() const {
  AlgorithmGrid g = *this;
  switch (algorithm) {
    case Algorithm::kHybrid:
      if (g.lambdas.empty()) g.lambdas = default_lambda_grid();
      break;
    case Algorithm::kSld:
      if (g.macro_steps.empty()) {
        for (int n = 1; n <= 10; ++n) g.macro_steps.push_back(n);
      }
      break;
    case Algorithm::kUsld:
    case Algorithm::kOsld:
      if (g.macro_steps.empty()) g.macro_steps = {3};
      if (g.thetas.empty()) g.thetas = default_theta_grid();
      break;
    case Algorithm::kRenbi:
      if (g.thetas.empty()) g.thetas = default_theta_grid();
      break;
    default:
      break;
  }
  return g;
}

std::vector<DiffusionParams> AlgorithmGrid::expand() const {
  auto lambdas_ = algorithm == Algorithm::kHybrid ? lambdas : std::vector<double>{1.0};
  auto steps_ = uses_macro_steps(algorithm) ? macro_steps : std::vector<int>{1};
  std::vector<std::optional<double>> thetas_;
  if (uses_theta(algorithm)) {
    thetas_.assign(thetas.begin(), thetas.end());
  } else {
    thetas_ = {std::nullopt};
  }
  std::sort(lambdas_.begin(), lambdas_.end());
  std::sort(steps_.begin(), steps_.end());
  std::sort(thetas_.begin(), thetas_.end());
  lambdas_.erase(std::unique(lambdas_.begin(), lambdas_.end()), lambdas_.end());
  steps_.erase(std::unique(steps_.begin(), steps_.end()), steps_.end());
  thetas_.erase(std::unique(thetas_.begin(), thetas_.end()), thetas_.end());

  std::vector<DiffusionParams> out;
  for (double l : lambdas_) {
    for (const auto& t : thetas_) {
      for (int n : steps_) {
        DiffusionParams p{algorithm, l, n, t};
        if (algorithm == Algorithm::kHeatConduction) p.lambda = 0.0;
        p.validate();
        out.push_back(p);
      }
    }
  }
  return out;
}

void ExperimentConfig::validate(bool check_files) const {
  const bool split_mode = !dataset.empty();
  const bool files_mode = !training.empty() || !probe.empty();
  if (split_mode == files_mode) {
    throw ConfigError("set either 'dataset' or both 'training' and 'probe'");
  }
  if (files_mode && (training.empty() || probe.empty())) {
    throw ConfigError("'training' and 'probe' must be given together");
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw ConfigError("split ratio must lie in (0, 1)");
  }
  if (algorithms.empty()) throw ConfigError("no algorithms configured");
  for (const AlgorithmGrid& g : algorithms) {
    if (g.with_defaults().expand().empty()) {
      throw ConfigError("empty grid for " + std::string(to_string(g.algorithm)));
    }
  }
  if (lengths.empty()) throw ConfigError("L list is empty");
  for (std::size_t l : lengths) {
    if (l < 1) throw ConfigError("L must be at least 1");
  }
  if (metrics.empty()) throw ConfigError("metrics list is empty");
  for (const std::string& m : metrics) {
    if (kMetrics.count(m) == 0) throw ConfigError("unknown metric '" + m + "'");
  }
  if (!(binning.log_base > 0.0) || binning.log_base == 1.0) {
    throw ConfigError("bin log base must be positive and not 1");
  }
  if (!output_dir.empty() && std::filesystem::exists(output_dir) &&
      !std::filesystem::is_directory(output_dir)) {
    throw ConfigError(output_dir.string() + " is not a directory");
  }
  if (check_files) {
    for (const auto& p : {dataset, training, probe}) {
      if (!p.empty() && !std::filesystem::is_regular_file(p)) {
        throw ConfigError("input file " + p.string() + " does not exist");
      }
    }
  }
}

json ExperimentConfig::to_json() const {
  json algos = json::array();
  for (const AlgorithmGrid& g : algorithms) {
    json a = {{"name", std::string(to_string(g.algorithm))}};
    if (!g.lambdas.empty()) a["lambda"] = g.lambdas;
    if (!g.macro_steps.empty()) a["macro_steps"] = g.macro_steps;
    if (!g.thetas.empty()) a["theta"] = g.thetas;
    algos.push_back(a);
  }
  json j = {
      {"split", {{"ratio", split_ratio}, {"seed", seed}}},
      {"min_rating", min_rating ? json(*min_rating) : json(nullptr)},
      {"algorithms", algos},
      {"L", lengths},
      {"metrics", metrics},
      {"hits_user_max_degree", hits_max_user_degree},
      {"hits_user_min_degree", hits_min_user_degree},
      {"bin_log_base", binning.log_base},
  };
  if (!dataset.empty()) j["dataset"] = dataset.generic_string();
  if (!training.empty()) j["training"] = training.generic_string();
  if (!probe.empty()) j["probe"] = probe.generic_string();
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) c.dataset = j.at("dataset").get<std::string>();
    if (j.contains("training")) c.training = j.at("training").get<std::string>();
    if (j.contains("probe")) c.probe = j.at("probe").get<std::string>();
    if (j.contains("split")) {
      const json& s = j.at("split");
      c.split_ratio = s.value("ratio", c.split_ratio);
      c.seed = s.value("seed", c.seed);
    }
    if (j.contains("min_rating") && !j.at("min_rating").is_null()) {
      c.min_rating = j.at("min_rating").get<double>();
    }
    if (j.contains("algorithms")) {
      for (const json& a : j.at("algorithms")) {
        AlgorithmGrid g;
        g.algorithm = parse_algorithm(a.is_string() ? a.get<std::string>()
                                                    : a.at("name").get<std::string>());
        if (a.is_object()) {
          g.lambdas = parse_grid<double>(a, "lambda");
          g.macro_steps = parse_grid<int>(a, "macro_steps");
          g.thetas = parse_grid<double>(a, "theta");
        }
        c.algorithms.push_back(std::move(g));
      }
    }
    if (j.contains("L")) c.lengths = parse_grid<std::size_t>(j, "L");
    if (j.contains("metrics")) c.metrics = j.at("metrics").get<std::vector<std::string>>();
    if (j.contains("hits_user_max_degree")) {
      c.hits_max_user_degree = j.at("hits_user_max_degree").get<std::vector<Index>>();
    }
    if (j.contains("hits_user_min_degree")) {
      c.hits_min_user_degree = j.at("hits_user_min_degree").get<std::vector<Index>>();
    }
    if (j.contains("bin_log_base")) {
      const json& b = j.at("bin_log_base");
      c.binning.log_base = b.is_string() && b.get<std::string>() == "e"
                               ? std::exp(1.0)
                               : b.get<double>();
    }
    if (j.contains("output")) c.output_dir = j.at("output").get<std::string>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  ExperimentConfig c = from_json(j);
  const auto base = path.parent_path();
  for (auto* p : {&c.dataset, &c.training, &c.probe, &c.output_dir}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return c;
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json().dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

ExperimentData make_data(Index num_users, Index num_items, const SplitDataset& split) {
  ExperimentData d;
  for (Index u = 0; u < num_users; ++u) d.users.intern(std::to_string(u));
  for (Index i = 0; i < num_items; ++i) d.items.intern(std::to_string(i));
  d.training = BipartiteGraph::FromEdges(num_users, num_items, split.training);
  d.probe = split.probe;
  d.links = split.training.size() + split.probe.size();
  return d;
}

ExperimentData prepare_data(const ExperimentConfig& config) {
  ReadOptions options;
  options.min_rating = config.min_rating;
  ExperimentData d;
  std::vector<Edge> training;
  if (!config.dataset.empty()) {
    Dataset ds = load_dataset(config.dataset, options);
    SplitDataset split = split_train_probe(ds.edges, config.split_ratio, config.seed);
    training = std::move(split.training);
    d.probe = std::move(split.probe);
    d.users = std::move(ds.users);
    d.items = std::move(ds.items);
    d.stats = ds.stats;
  } else {
    LoadedSplit ls = load_split(config.training, config.probe, options);
    training = std::move(ls.training);
    d.probe = std::move(ls.probe);
    d.users = std::move(ls.dataset.users);
    d.items = std::move(ls.dataset.items);
    d.stats = ls.dataset.stats;
  }
  d.links = training.size() + d.probe.size();
  d.training = BipartiteGraph::FromEdges(d.users.size(), d.items.size(), training);
  return d;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const ExperimentData& data) {
  config.validate(false);
  const BipartiteGraph& g = data.training;

  std::vector<DiffusionParams> points;
  for (const AlgorithmGrid& grid : config.algorithms) {
    for (const DiffusionParams& p : grid.with_defaults().expand()) points.push_back(p);
  }

  ExperimentResult result;
  result.probe = index_probe(g, data.probe);
  const ProbeIndex& probe = result.probe;

  const bool wants_top = std::any_of(config.metrics.begin(), config.metrics.end(),
                                     [](const std::string& m) { return m != "rs"; });
  const std::size_t top_length =
      wants_top ? *std::max_element(config.lengths.begin(), config.lengths.end()) : 0;

  int series_max = 0;
  std::vector<std::optional<HybridOperator<double>>> own_ops(points.size());
  std::vector<ResourceVector> item_weights(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    if (on_mass_diffusion(points[p].algorithm)) {
      series_max = std::max(series_max, series_length(points[p]));
    } else {
      own_ops[p].emplace(g, points[p].algorithm == Algorithm::kHeatConduction
                                ? 0.0
                                : points[p].lambda);
    }
    if (points[p].algorithm == Algorithm::kOsld) {
      item_weights[p] = item_degree_weights(g, *points[p].theta);
    }
  }
  const HybridOperator<double> mass(g, 1.0);
  const auto item_degrees = g.item_degrees();

  std::vector<std::vector<UserOutcome>> outcomes(
      points.size(), std::vector<UserOutcome>(probe.users.size()));
  parallel_for(probe.users.size(), resolve_workers(config.workers), [&](std::size_t slot) {
    const Index user = probe.users[slot];
    const ResourceVector f = initial_resource(g, user);
    std::vector<ResourceVector> series;
    if (series_max > 0) series = macro_step_series(mass, f, series_max);
    for (std::size_t p = 0; p < points.size(); ++p) {
      const DiffusionParams& params = points[p];
      ResourceVector scores;
      switch (params.algorithm) {
        case Algorithm::kHybrid:
        case Algorithm::kHeatConduction:
          scores = (*own_ops[p])(f);
          break;
        case Algorithm::kMassDiffusion:
          scores = series[0];
          break;
        case Algorithm::kSld:
          scores = series[static_cast<std::size_t>(params.macro_steps - 1)];
          break;
        case Algorithm::kUsld:
          scores = combine_usld(series, params.macro_steps, g.user_degree(user), *params.theta);
          break;
        case Algorithm::kOsld:
          scores = combine_osld(series, params.macro_steps, item_weights[p]);
          break;
        case Algorithm::kRenbi:
          scores = combine_renbi(series, *params.theta);
          break;
      }
      outcomes[p][slot] =
          summarize_user(scores, g, user, probe.items[slot], top_length, item_degrees);
    }
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::size_t first = result.reports.size();
    append_point_reports(config, data, probe, points[p], outcomes[p], result.reports);
    for (std::size_t r = first; r < result.reports.size(); ++r) {
      const MetricReport& rep = result.reports[r];
      result.summary.push_back(
          {rep.algorithm, points[p], rep.metric, rep.length, rep.overall, rep.population});
    }
  }
  return result;
}

void write_results(const ExperimentConfig& config, const ExperimentData& data,
                   const ExperimentResult& result) {
  if (config.output_dir.empty()) throw ConfigError("no output directory configured");
  const auto& dir = config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());

  for (const MetricReport& r : result.reports) {
    const std::string stem = r.file_stem();
    write_file(dir / (stem + ".json"), to_json(r).dump(2) + "\n");
    if (!r.bins.empty()) {
      std::ostringstream csv;
      write_csv(csv, r);
      write_file(dir / (stem + ".csv"), csv.str());
    }
  }

  std::ostringstream summary;
  summary << "algorithm,lambda,macro_steps,theta,metric,L,value,population\n";
  for (const SummaryRow& s : result.summary) {
    const Algorithm a = s.params.algorithm;
    summary << s.algorithm << ','
            << (a == Algorithm::kHybrid ? format_number(s.params.lambda) : "") << ','
            << (uses_macro_steps(a) ? std::to_string(s.params.macro_steps) : "") << ','
            << (uses_theta(a) ? optional_number(s.params.theta) : "") << ',' << s.metric
            << ',' << (s.length ? std::to_string(*s.length) : "") << ','
            << optional_number(s.value) << ',' << s.population << '\n';
  }
  write_file(dir / "summary.csv", summary.str());

  const ProbeIndex& p = result.probe;
  json manifest = {
      {"seed", config.seed},
      {"split_ratio", config.split_ratio},
      {"config_hash", config.hash()},
      {"config", config.to_json()},
      {"counts",
       {{"users", data.training.num_users()},
        {"items", data.training.num_items()},
        {"links", data.links},
        {"training_links", data.training.num_edges()},
        {"probe_links", p.total_links},
        {"evaluable_probe_links", p.evaluable_links},
        {"evaluated_users", p.users.size()},
        {"duplicates_removed", data.stats.duplicates}}},
      {"skipped",
       {{"cold_user", p.skipped_cold_user},
        {"cold_item", p.skipped_cold_item},
        {"in_training", p.skipped_in_training}}},
      {"notes",
       {"recall averages over users with at least one evaluable probe link, not all N "
        "users",
        "probe links whose user or item has no training edges are skipped"}},
  };
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<OptimalParameter> sweep_optimal(const ExperimentConfig& config,
                                            const ExperimentData& data,
                                            const std::string& metric, std::size_t length) {
  if (metric != "rs" && metric != "recall") {
    throw ConfigError("sweep metric must be 'rs' or 'recall'");
  }
  ExperimentConfig c = config;
  c.metrics = {metric};
  c.lengths = {length};
  std::vector<std::vector<DiffusionParams>> grids;
  for (const AlgorithmGrid& g : c.algorithms) {
    grids.push_back(g.with_defaults().expand());
    if (grids.back().size() < 2) {
      throw ConfigError("sweep over " + std::string(to_string(g.algorithm)) +
                        " needs at least two grid points");
    }
  }
  const ExperimentResult result = run_experiment(c, data);

  std::vector<const SummaryRow*> rows;
  for (const SummaryRow& s : result.summary) {
    if (s.metric == metric) rows.push_back(&s);
  }
  std::vector<OptimalParameter> out;
  std::size_t next = 0;
  for (const auto& grid : grids) {
    std::optional<OptimalParameter> best;
    for (std::size_t i = 0; i < grid.size(); ++i, ++next) {
      const SummaryRow& s = *rows.at(next);
      if (!s.value) continue;
      const bool better = !best || (metric == "rs" ? *s.value < best->value
                                                   : *s.value > best->value);
      if (better) best = OptimalParameter{grid[i].algorithm, grid[i], metric, s.length, *s.value};
    }
    if (!best) throw DataError("no evaluable probe links for the sweep");
    out.push_back(*best);
  }
  return out;
}

void write_sweep(const std::filesystem::path& path,
                 const std::vector<OptimalParameter>& optima) {
  std::ostringstream out;
  out << "algorithm,lambda,macro_steps,theta,metric,L,value\n";
  for (const OptimalParameter& o : optima) {
    const Algorithm a = o.algorithm;
    out << to_string(a) << ','
        << (a == Algorithm::kHybrid ? format_number(o.params.lambda) : "") << ','
        << (uses_macro_steps(a) ? std::to_string(o.params.macro_steps) : "") << ','
        << (uses_theta(a) ? optional_number(o.params.theta) : "") << ',' << o.metric << ','
        << (o.length && o.metric == "recall" ? std::to_string(*o.length) : "") << ','
        << format_number(o.value) << '\n';
  }
  write_file(path, out.str());
}

CoverageResult coverage_report(const BipartiteGraph& graph, unsigned workers, int steps,
                               CoverageDenominator denominator,
                               const BinningOptions& binning) {
  CoverageResult out;
  out.per_user.assign(graph.num_users(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(graph.num_users(), resolve_workers(workers), [&](std::size_t u) {
    const auto user = static_cast<Index>(u);
    if (graph.user_degree(user) == 0) return;
    out.per_user[u] = coverage(graph, user, steps, denominator);
  });
  double sum = 0.0;
  std::size_t count = 0;
  for (double v : out.per_user) {
    if (std::isnan(v)) continue;
    sum += v;
    ++count;
  }
  MetricReport& r = out.report;
  r.metric = "coverage";
  r.algorithm = "md";
  r.macro_steps = (steps - 1) / 2;
  if (count > 0) r.overall = sum / static_cast<double>(count);
  r.population = count;
  r.bin_axis = "user_degree";
  r.bins = degree_binned(out.per_user, graph.user_degrees(), binning);
  r.notes.push_back(denominator == CoverageDenominator::kAllItems
                        ? "denominator: all items"
                        : "denominator: uncollected items");
  return out;
}

std::vector<TopListRow> export_top_lists(const BipartiteGraph& graph,
                                         const DiffusionParams& params,
                                         std::span<const Index> users, std::size_t length,
                                         unsigned workers) {
  const Scorer scorer(graph, params);
  const auto degrees = graph.item_degrees();
  std::vector<std::vector<TopListRow>> slots(users.size());
  parallel_for(users.size(), resolve_workers(workers), [&](std::size_t s) {
    const Index user = users[s];
    if (user >= graph.num_users() || graph.user_degree(user) == 0) return;
    const ResourceVector scores = scorer.score(user);
    const auto top = top_items(scores, graph.items_of(user), length, degrees);
    for (std::size_t r = 0; r < top.size(); ++r) {
      slots[s].push_back({user, top[r], scores[top[r]], r + 1});
    }
  });
  std::vector<TopListRow> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

}  // namespace sld
