// Command-line front end: ingest, split, run, sweep, coverage, export-topl.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "sld/experiment.hpp"
#include "sld/parallel.hpp"

namespace {

using namespace sld;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw DataError("cannot write " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
}

template <typename Fn>
std::string to_text(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

struct DataOptions {
  std::string path;
  std::optional<double> min_rating;
  std::optional<double> ratio;
  std::uint64_t seed = 42;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool with_split) {
  cmd->add_option("dataset", o.path, "edge list: user<TAB>item[<TAB>rating]")->required();
  cmd->add_option("--min-rating", o.min_rating,
                  "keep only lines whose rating is at least this value");
  if (with_split) {
    cmd->add_option("--ratio", o.ratio, "use the training part of a seeded split");
    cmd->add_option("--seed", o.seed, "split seed");
  }
}

// Training graph (or the full graph without --ratio) plus probe links.
ExperimentData load_for(const DataOptions& o) {
  ReadOptions ro;
  ro.min_rating = o.min_rating;
  Dataset ds = load_dataset(o.path, ro);
  ExperimentData d;
  d.links = ds.edges.size();
  d.stats = ds.stats;
  std::vector<Edge> training = ds.edges;
  if (o.ratio) {
    SplitDataset split = split_train_probe(ds.edges, *o.ratio, o.seed);
    training = std::move(split.training);
    d.probe = std::move(split.probe);
  }
  d.users = std::move(ds.users);
  d.items = std::move(ds.items);
  d.training = BipartiteGraph::FromEdges(d.users.size(), d.items.size(), training);
  return d;
}

int cmd_ingest(const DataOptions& o, const std::string& id_dir, bool as_json) {
  ReadOptions ro;
  ro.min_rating = o.min_rating;
  const Dataset ds = load_dataset(o.path, ro);
  const BipartiteGraph g = ds.graph();
  const std::string name = fs::path(o.path).stem().string();
  if (as_json) {
    const nlohmann::json j = {{"dataset", name},
                              {"users", g.num_users()},
                              {"objects", g.num_items()},
                              {"links", g.num_edges()},
                              {"sparsity", g.density()},
                              {"duplicates_removed", ds.stats.duplicates},
                              {"comment_lines", ds.stats.comments},
                              {"below_rating_threshold", ds.stats.below_threshold}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "dataset\t#user\t#objects\t#links\tsparsity\n"
              << name << '\t' << g.num_users() << '\t' << g.num_items() << '\t'
              << g.num_edges() << '\t' << fmt::format("{:.2e}", g.density()) << '\n';
    std::cerr << "duplicates removed: " << ds.stats.duplicates
              << ", comment lines: " << ds.stats.comments
              << ", below rating threshold: " << ds.stats.below_threshold << '\n';
  }
  if (!id_dir.empty()) {
    ensure_dir(id_dir);
    write_text(fs::path(id_dir) / "users.tsv",
               to_text([&](std::ostream& s) { write_id_map(s, ds.users); }));
    write_text(fs::path(id_dir) / "items.tsv",
               to_text([&](std::ostream& s) { write_id_map(s, ds.items); }));
  }
  return 0;
}

int cmd_split(const DataOptions& o, double ratio, const std::string& out_dir) {
  ReadOptions ro;
  ro.min_rating = o.min_rating;
  const Dataset ds = load_dataset(o.path, ro);
  const SplitDataset split = split_train_probe(ds.edges, ratio, o.seed);
  ensure_dir(out_dir);
  const fs::path dir(out_dir);
  write_text(dir / "training.tsv", to_text([&](std::ostream& s) {
               write_edges(s, split.training, ds.users, ds.items);
             }));
  write_text(dir / "probe.tsv", to_text([&](std::ostream& s) {
               write_edges(s, split.probe, ds.users, ds.items);
             }));
  write_text(dir / "users.tsv", to_text([&](std::ostream& s) { write_id_map(s, ds.users); }));
  write_text(dir / "items.tsv", to_text([&](std::ostream& s) { write_id_map(s, ds.items); }));
  const nlohmann::json manifest = {
      {"seed", split.seed},
      {"ratio", split.ratio},
      {"counts",
       {{"links", ds.edges.size()},
        {"training", split.training.size()},
        {"probe", split.probe.size()},
        {"duplicates_removed", ds.stats.duplicates}}}};
  write_text(dir / "split.json", manifest.dump(2) + "\n");
  std::cout << "training " << split.training.size() << ", probe " << split.probe.size()
            << '\n';
  return 0;
}

struct RunOverrides {
  std::string config;
  std::string dataset;
  std::string output;
  std::optional<unsigned> workers;
  std::optional<std::uint64_t> seed;
};

ExperimentConfig resolve_config(const RunOverrides& o) {
  ExperimentConfig c = ExperimentConfig::load(o.config);
  if (!o.dataset.empty()) {
    c.dataset = o.dataset;
    c.training.clear();
    c.probe.clear();
  }
  if (!o.output.empty()) c.output_dir = o.output;
  if (o.workers) c.workers = *o.workers;
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

int cmd_run(const RunOverrides& o) {
  const ExperimentConfig c = resolve_config(o);
  if (c.output_dir.empty()) throw ConfigError("no output directory (config 'output' or -o)");
  const ExperimentData data = prepare_data(c);
  const ExperimentResult result = run_experiment(c, data);
  write_results(c, data, result);
  std::cerr << "scored " << result.probe.users.size() << " users, "
            << result.reports.size() << " reports; skipped " << result.probe.skipped()
            << " probe links\n";
  for (const SummaryRow& s : result.summary) {
    if (s.metric != "rs" && s.metric != "recall") continue;
    std::cout << s.algorithm << " lambda=" << s.params.lambda << " n=" << s.params.macro_steps
              << (s.params.theta ? " theta=" + format_number(*s.params.theta) : "") << ' '
              << s.metric << (s.length ? "@" + std::to_string(*s.length) : "") << " = "
              << (s.value ? format_number(*s.value) : "n/a") << '\n';
  }
  return 0;
}

int cmd_sweep(const RunOverrides& o, const std::string& metric, std::size_t length) {
  const ExperimentConfig c = resolve_config(o);
  const ExperimentData data = prepare_data(c);
  const auto optima = sweep_optimal(c, data, metric, length);
  if (!c.output_dir.empty()) {
    ensure_dir(c.output_dir);
    write_sweep(c.output_dir / ("sweep_" + metric + ".csv"), optima);
  }
  for (const OptimalParameter& p : optima) {
    std::cout << to_string(p.algorithm) << ": lambda=" << p.params.lambda
              << " n=" << p.params.macro_steps
              << (p.params.theta ? " theta=" + format_number(*p.params.theta) : "") << ' '
              << metric << " = " << format_number(p.value) << '\n';
  }
  return 0;
}

int cmd_coverage(const DataOptions& o, int steps, const std::string& denominator,
                 const std::string& out_dir, unsigned workers) {
  CoverageDenominator den;
  if (denominator == "all") {
    den = CoverageDenominator::kAllItems;
  } else if (denominator == "uncollected") {
    den = CoverageDenominator::kUncollectedItems;
  } else {
    throw ConfigError("denominator must be 'all' or 'uncollected'");
  }
  const ExperimentData d = load_for(o);
  const CoverageResult cov = coverage_report(d.training, workers, steps, den);
  std::cout << "mean coverage " << (cov.report.overall ? format_number(*cov.report.overall) : "n/a")
            << " over " << cov.report.population << " users\n";
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    const fs::path dir(out_dir);
    write_text(dir / "coverage_per_user.csv", to_text([&](std::ostream& s) {
                 s << "user,degree,coverage\n";
                 for (Index u = 0; u < d.training.num_users(); ++u) {
                   if (std::isnan(cov.per_user[u])) continue;
                   s << d.users.external(u) << ',' << d.training.user_degree(u) << ','
                     << format_number(cov.per_user[u]) << '\n';
                 }
               }));
    write_text(dir / (cov.report.file_stem() + ".csv"),
               to_text([&](std::ostream& s) { write_csv(s, cov.report); }));
    write_text(dir / (cov.report.file_stem() + ".json"), to_json(cov.report).dump(2) + "\n");
  }
  return 0;
}

int cmd_export(const DataOptions& o, const DiffusionParams& params, std::size_t length,
               bool all_users, const std::string& out, unsigned workers) {
  params.validate();
  const ExperimentData d = load_for(o);
  std::vector<Index> users;
  if (all_users || !o.ratio) {
    for (Index u = 0; u < d.training.num_users(); ++u) users.push_back(u);
  } else {
    for (Index u : index_probe(d.training, d.probe).users) users.push_back(u);
  }
  const auto rows = export_top_lists(d.training, params, users, length, workers);
  const std::string text = to_text([&](std::ostream& s) {
    for (const TopListRow& r : rows) {
      s << d.users.external(r.user) << '\t' << d.items.external(r.item) << '\t'
        << format_number(r.score) << '\t' << r.rank << '\n';
    }
  });
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion-based recommendation on user-item bipartite networks"};
  app.require_subcommand(1);

  DataOptions data;
  std::string id_dir;
  bool as_json = false;
  auto* ingest = app.add_subcommand("ingest", "validate an edge list and print statistics");
  add_data_options(ingest, data, false);
  ingest->add_option("--write-ids", id_dir, "directory for users.tsv / items.tsv");
  ingest->add_flag("--json", as_json, "print statistics as JSON");

  double split_ratio = 0.8;
  std::string split_out;
  auto* split = app.add_subcommand("split", "seeded training/probe split");
  add_data_options(split, data, false);
  split->add_option("--ratio", split_ratio, "training fraction")->capture_default_str();
  split->add_option("--seed", data.seed, "shuffle seed")->capture_default_str();
  split->add_option("-o,--out", split_out, "output directory")->required();

  RunOverrides run_opts;
  const auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", run_opts.config, "JSON experiment config")->required();
    cmd->add_option("--dataset", run_opts.dataset, "override the dataset path");
    cmd->add_option("-o,--output", run_opts.output, "override the output directory");
    cmd->add_option("-j,--workers", run_opts.workers, "worker threads");
    cmd->add_option("--seed", run_opts.seed, "override the split seed");
  };
  auto* run = app.add_subcommand("run", "evaluate algorithm grids and write reports");
  add_run_options(run);

  std::string sweep_metric = "rs";
  std::size_t sweep_length = 20;
  auto* sweep = app.add_subcommand("sweep", "report the best grid point per algorithm");
  add_run_options(sweep);
  sweep->add_option("--metric", sweep_metric, "rs or recall")
      ->check(CLI::IsMember({"rs", "recall"}))
      ->capture_default_str();
  sweep->add_option("-L,--length", sweep_length, "list length for recall")
      ->capture_default_str();

  int cov_steps = 3;
  std::string cov_den = "all";
  std::string cov_out;
  unsigned workers = 0;
  auto* cov = app.add_subcommand("coverage", "per-user 3-step coverage and binned means");
  add_data_options(cov, data, true);
  cov->add_option("--steps", cov_steps, "bipartite steps (odd)")->capture_default_str();
  cov->add_option("--denominator", cov_den, "all or uncollected")->capture_default_str();
  cov->add_option("-o,--out", cov_out, "output directory");
  cov->add_option("-j,--workers", workers, "worker threads");

  std::string algo_name = "md";
  DiffusionParams params;
  std::optional<double> theta;
  std::size_t top_length = 20;
  bool all_users = false;
  std::string export_out;
  auto* exp = app.add_subcommand("export-topl", "write per-user top-L lists as TSV");
  add_data_options(exp, data, true);
  exp->add_option("-a,--algorithm", algo_name, "hybrid, md, hc, sld, usld, osld, renbi")
      ->capture_default_str();
  exp->add_option("--lambda", params.lambda, "hybrid weight")->capture_default_str();
  exp->add_option("-n,--macro-steps", params.macro_steps, "macro-steps")->capture_default_str();
  exp->add_option("--theta", theta, "theta for usld, osld, renbi");
  exp->add_option("-L,--length", top_length, "list length")->capture_default_str();
  exp->add_flag("--all-users", all_users, "score every user, not only probe owners");
  exp->add_option("-o,--out", export_out, "output TSV (default stdout)");
  exp->add_option("-j,--workers", workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*ingest) return cmd_ingest(data, id_dir, as_json);
    if (*split) return cmd_split(data, split_ratio, split_out);
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(run_opts, sweep_metric, sweep_length);
    if (*cov) return cmd_coverage(data, cov_steps, cov_den, cov_out, workers);
    if (*exp) {
      params.algorithm = parse_algorithm(algo_name);
      params.theta = theta;
      if (params.algorithm == Algorithm::kHeatConduction) params.lambda = 0.0;
      return cmd_export(data, params, top_length, all_users, export_out, workers);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ColdStartError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
