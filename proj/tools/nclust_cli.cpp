// nclust: experiment driver for noisy-query cluster recovery and edge
// sign prediction on signed networks.
//
// Subcommands:
//   recover   seeded synthetic recovery trials (pythia | paths), JSON report
//   features  27-column per-edge feature dump for a dataset, CSV
//   cv        10-fold cross-validated sign prediction accuracy, JSON report
//   bias      empirical vs exact majority-bias curve, CSV
//
// Exit codes: 0 success, 1 I/O failure, 2 configuration/usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nclust/cross_validation.hpp"
#include "nclust/features.hpp"
#include "nclust/oracle.hpp"
#include "nclust/parallel.hpp"
#include "nclust/path_recovery.hpp"
#include "nclust/pythia.hpp"
#include "nclust/random.hpp"
#include "nclust/signed_graph.hpp"

using json = nlohmann::ordered_json;
using namespace nclust;

namespace {

constexpr int kSchemaVersion = 1;
constexpr std::uint64_t kTruthTag = 0x7472757468ULL;
constexpr std::uint64_t kOracleTag = 0x6f7261636cULL;

// "1,2,10..14" -> {1,2,10,11,12,13,14}; ranges are inclusive.
std::vector<std::uint64_t> parse_int_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const std::size_t dots = token.find("..");
    auto parse_one = [&](std::string_view sv) {
      std::uint64_t value = 0;
      auto [p, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
      if (ec != std::errc{} || p != sv.data() + sv.size())
        throw std::invalid_argument("not an integer: '" + std::string(sv) + "'");
      return value;
    };
    if (dots == std::string::npos) {
      out.push_back(parse_one(token));
    } else {
      const std::uint64_t lo = parse_one(std::string_view(token).substr(0, dots));
      const std::uint64_t hi = parse_one(std::string_view(token).substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range '" + token + "'");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("expected a non-empty list");
  return out;
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("NOISY_CLUSTERS_JOBS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  return 1;
}

// Output sink: --out file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct RecoverArgs {
  std::string algo;
  std::size_t n = 0;
  double q = 0.0;
  std::string seeds_text;
  std::string out;
  std::string transcript;  // CSV replay log; single-seed runs only
  std::size_t jobs = default_jobs();
  // pythia overrides
  std::optional<std::size_t> size_a, size_b;
  // paths overrides
  std::optional<std::size_t> branching, tree_depth, deep_depth;
  std::optional<double> p;
};

int cmd_recover(const RecoverArgs& args) {
  if (!(args.q >= 0.0 && args.q < 0.5))
    throw std::invalid_argument("q must be in [0, 0.5): bias delta = 1-2q must be positive");
  if (args.n < 3) throw std::invalid_argument("n must be at least 3");
  const std::vector<std::uint64_t> seeds = parse_int_list(args.seeds_text);
  if (!args.transcript.empty() && seeds.size() != 1)
    throw std::invalid_argument("--transcript requires exactly one seed");
  const double delta = 1.0 - 2.0 * args.q;

  struct Trial {
    json report;
    bool exact = false;
    std::uint64_t queries = 0;
  };
  std::vector<Trial> trials(seeds.size());

  if (args.algo == "pythia") {
    PythiaConfig config = PythiaConfig::from_formula(args.n, delta);
    if (args.size_a || args.size_b) {
      if (args.size_a) config.size_a = *args.size_a;
      if (args.size_b) config.size_b = *args.size_b;
      config.flagged = true;  // manual sizes leave the theorem regime
    }
    config.validate(args.n);
    parallel_for(seeds.size(), args.jobs, [&](std::size_t i) {
      const std::uint64_t seed = seeds[i];
      NoisyOracle oracle(GroundTruth::random_balanced(args.n, derive_seed(seed, kTruthTag)),
                         {args.q, derive_seed(seed, kOracleTag)});
      if (!args.transcript.empty()) oracle.record_transcript(true);
      const PythiaReport r = recover_pythia(oracle, args.n, config);
      if (!args.transcript.empty()) {
        std::ofstream f(args.transcript, std::ios::binary);
        oracle.export_transcript_csv(f);
      }
      const double agreement = clustering_agreement(r.clustering, oracle.truth());
      trials[i].report = {{"seed", seed},
                          {"agreement", agreement},
                          {"queries", r.queries},
                          {"size_c", r.size_c},
                          {"flagged", r.flagged}};
      trials[i].exact = agreement == 1.0;
      trials[i].queries = r.queries;
    });
  } else {  // paths
    PathConfig config = PathConfig::from_formula(args.n, delta == 0.0 ? 1e-9 : delta);
    if (args.branching || args.tree_depth || args.deep_depth || args.p) {
      if (args.branching) config.branching = *args.branching;
      if (args.tree_depth) config.tree_depth = *args.tree_depth;
      if (args.deep_depth) config.deep_depth = *args.deep_depth;
      if (args.p) config.p = *args.p;
      config.flagged = true;
    }
    config.validate();
    parallel_for(seeds.size(), args.jobs, [&](std::size_t i) {
      const std::uint64_t seed = seeds[i];
      NoisyOracle oracle(GroundTruth::random_balanced(args.n, derive_seed(seed, kTruthTag)),
                         {args.q, derive_seed(seed, kOracleTag)});
      if (!args.transcript.empty()) oracle.record_transcript(true);
      const PathReport r = recover_paths(oracle, args.n, config);
      if (!args.transcript.empty()) {
        std::ofstream f(args.transcript, std::ios::binary);
        oracle.export_transcript_csv(f);
      }
      const double agreement = clustering_agreement(r.clustering, oracle.truth());
      trials[i].report = {{"seed", seed},
                          {"agreement", agreement},
                          {"queries", r.queries},
                          {"gadget_failures", r.gadget_failures},
                          {"flagged", r.flagged}};
      trials[i].exact = agreement == 1.0;
      trials[i].queries = r.queries;
    });
  }

  double exact = 0.0, total_queries = 0.0;
  json trial_array = json::array();
  for (const Trial& t : trials) {
    trial_array.push_back(t.report);
    exact += t.exact ? 1.0 : 0.0;
    total_queries += static_cast<double>(t.queries);
  }
  json report = {{"schema_version", kSchemaVersion},
                 {"command", "recover"},
                 {"algo", args.algo},
                 {"n", args.n},
                 {"q", args.q},
                 {"trials", trial_array},
                 {"aggregate",
                  {{"success_rate", exact / static_cast<double>(trials.size())},
                   {"mean_queries", total_queries / static_cast<double>(trials.size())}}}};
  Sink sink(args.out);
  sink.stream() << report.dump(2) << '\n';
  return 0;
}

struct FeaturesArgs {
  std::string dataset;
  std::string out;
  std::size_t jobs = default_jobs();
};

json ingest_json(const IngestReport& r) {
  return {{"nodes", r.nodes},
          {"edges", r.edges},
          {"self_loops_dropped", r.self_loops_dropped},
          {"duplicates_dropped", r.duplicates_dropped},
          {"sign_conflicts", r.sign_conflicts}};
}

int cmd_features(const FeaturesArgs& args) {
  const LoadResult loaded = load_snap_edgelist(args.dataset);
  const SignedGraph& g = loaded.graph;
  std::cerr << ingest_json(loaded.report).dump() << '\n';

  Sink sink(args.out);
  std::ostream& out = sink.stream();
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "u,v,label";
  for (int i = 1; i <= 27; ++i) out << ",f" << i;
  out << "\n";

  constexpr std::size_t kChunk = 20000;
  std::vector<std::uint32_t> indices;
  for (std::size_t base = 0; base < g.edges().size(); base += kChunk) {
    const std::size_t end = std::min(base + kChunk, g.edges().size());
    indices.clear();
    for (std::size_t i = base; i < end; ++i) indices.push_back(static_cast<std::uint32_t>(i));
    const std::vector<LabeledRow> rows = compute_feature_rows(g, indices, args.jobs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SignedEdge& e = g.edges()[indices[i]];
      out << g.original_id(e.src) << ',' << g.original_id(e.dst) << ','
          << static_cast<int>(e.sign);
      for (double v : rows[i].x) out << ',' << static_cast<long long>(v);
      out << '\n';
    }
    std::cerr << "features: " << end << "/" << g.edges().size() << " edges\r";
  }
  std::cerr << '\n';
  return 0;
}

struct CvArgs {
  std::string dataset;
  std::string mask = "All";
  std::size_t emb_threshold = 0;
  std::optional<std::size_t> emb_exact;
  std::uint64_t seed = 0;
  double lambda = -1.0;
  std::size_t max_iters = 300;
  double tolerance = 1e-7;
  std::string out;
  std::string coef_csv;
  std::size_t jobs = default_jobs();
};

int cmd_cv(const CvArgs& args) {
  CvConfig config;
  config.mask = FeatureMask::parse(args.mask);
  config.seed = args.seed;
  config.jobs = args.jobs;
  config.hyper.l2_lambda = args.lambda;
  config.hyper.max_iters = args.max_iters;
  config.hyper.tolerance = args.tolerance;
  if (args.emb_exact) {
    config.emb_mode = EmbFilter::exact;
    config.emb_value = *args.emb_exact;
  } else {
    config.emb_mode = EmbFilter::min_threshold;
    config.emb_value = args.emb_threshold;
  }

  const LoadResult loaded = load_snap_edgelist(args.dataset);
  const CvReport report = cross_validate(loaded.graph, config);

  const auto& names = feature_names();
  json folds = json::array();
  for (std::size_t f = 0; f < report.fold_models.size(); ++f) {
    const TrainedModel& m = report.fold_models[f];
    json weights = json::object();
    json raw_weights = json::object();
    const auto raw = m.raw_weights();
    for (std::size_t j = 0; j < m.columns().size(); ++j) {
      weights[names[m.columns()[j]]] = m.weights()[j];
      raw_weights[names[m.columns()[j]]] = raw[j];
    }
    folds.push_back({{"accuracy", report.fold_accuracies[f]},
                     {"test_edges", report.folds[f].size()},
                     {"bias", m.bias()},
                     {"weights", weights},
                     {"raw_bias", m.raw_bias()},
                     {"raw_weights", raw_weights}});
  }
  json out = {{"schema_version", kSchemaVersion},
              {"command", "cv"},
              {"dataset", args.dataset},
              {"mask", config.mask.name()},
              {"emb_mode", config.emb_mode == EmbFilter::exact ? "exact" : "min"},
              {"emb_value", config.emb_value},
              {"seed", args.seed},
              {"ingest", ingest_json(loaded.report)},
              {"qualifying_edges", report.qualifying_edges},
              {"sample_size", report.sample_size},
              {"fold_accuracies", report.fold_accuracies},
              {"mean_accuracy", report.mean_accuracy},
              {"folds", folds}};
  Sink sink(args.out);
  sink.stream() << out.dump(2) << '\n';

  if (!args.coef_csv.empty()) {
    std::ofstream csv(args.coef_csv, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open coefficient file: " + args.coef_csv);
    csv << "# schema_version=" << kSchemaVersion << "\n";
    csv << "fold,bias";
    const auto cols = config.mask.columns();
    for (std::size_t c : cols) csv << ',' << names[c];
    csv << '\n';
    for (std::size_t f = 0; f < report.fold_models.size(); ++f) {
      const TrainedModel& m = report.fold_models[f];
      csv << f << ',' << m.bias();
      for (std::size_t j = 0; j < cols.size(); ++j) csv << ',' << m.weights()[j];
      csv << '\n';
    }
  }
  return 0;
}

struct BiasArgs {
  double delta = 0.0;
  std::string counts_text;
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_bias(const BiasArgs& args) {
  if (!(args.delta > 0.0 && args.delta <= 1.0))
    throw std::invalid_argument("delta must be in (0, 1]");
  const std::vector<std::uint64_t> raw = parse_int_list(args.counts_text);
  std::vector<std::size_t> counts(raw.begin(), raw.end());
  for (std::size_t m : counts)
    if (m % 2 == 0) throw std::invalid_argument("counts must be odd (ties are excluded)");

  const auto curve = majority_bias_curve(args.delta, counts, args.trials, args.seed);
  Sink sink(args.out);
  std::ostream& out = sink.stream();
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "m,empirical_bias,exact_bias\n";
  out.precision(10);
  for (const BiasCurvePoint& pt : curve)
    out << pt.m << ',' << pt.empirical << ',' << exact_majority_bias(pt.m, args.delta)
        << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noisy-clusters: cluster recovery from noisy pair queries and "
               "edge sign prediction on signed networks"};
  app.require_subcommand(1);

  RecoverArgs rec;
  CLI::App* recover = app.add_subcommand("recover", "seeded synthetic recovery trials");
  recover->add_option("--algo", rec.algo, "algorithm: pythia or paths")
      ->required()
      ->check(CLI::IsMember({"pythia", "paths"}));
  recover->add_option("--n", rec.n, "number of nodes")->required();
  recover->add_option("--q", rec.q, "corruption probability in [0, 0.5)")->required();
  recover->add_option("--seeds", rec.seeds_text, "seed list, e.g. 1,2,5..9")->required();
  recover->add_option("--size-a", rec.size_a, "pythia: override |A|");
  recover->add_option("--size-b", rec.size_b, "pythia: override |B|");
  recover->add_option("--branching", rec.branching, "paths: override tree branching");
  recover->add_option("--tree-depth", rec.tree_depth, "paths: override shallow depth k");
  recover->add_option("--deep-depth", rec.deep_depth, "paths: override deep depth");
  recover->add_option("--p", rec.p, "paths: override query-graph edge probability");
  recover->add_option("--jobs", rec.jobs, "worker threads (default NOISY_CLUSTERS_JOBS or 1)");
  recover->add_option("--out", rec.out, "write JSON report here (default stdout)");
  recover->add_option("--transcript", rec.transcript,
                      "write the oracle transcript CSV (single seed only)");

  FeaturesArgs feat;
  CLI::App* features = app.add_subcommand("features", "per-edge feature dump");
  features->add_option("--dataset", feat.dataset, "signed edge-list file")->required();
  features->add_option("--out", feat.out, "output CSV (default stdout)");
  features->add_option("--jobs", feat.jobs, "worker threads");

  CvArgs cv;
  CLI::App* cvcmd = app.add_subcommand("cv", "10-fold cross-validated accuracy");
  cvcmd->add_option("--dataset", cv.dataset, "signed edge-list file")->required();
  cvcmd->add_option("--mask", cv.mask, "feature mask (All, Leskovec, Deg, Tr, Triads, P3, P4, '+' combos)");
  auto* thr = cvcmd->add_option("--emb-threshold", cv.emb_threshold,
                                "keep edges with embeddedness >= K (default 0)");
  cvcmd->add_option("--emb-exact", cv.emb_exact, "keep edges with embeddedness == K")
      ->excludes(thr);
  cvcmd->add_option("--seed", cv.seed, "shuffle seed");
  cvcmd->add_option("--lambda", cv.lambda, "L2 strength (default 1/N)");
  cvcmd->add_option("--max-iters", cv.max_iters, "gradient descent iteration cap");
  cvcmd->add_option("--tol", cv.tolerance, "gradient max-norm stop");
  cvcmd->add_option("--jobs", cv.jobs, "worker threads");
  cvcmd->add_option("--out", cv.out, "write JSON report here (default stdout)");
  cvcmd->add_option("--coef-csv", cv.coef_csv, "also write per-fold coefficients CSV");

  BiasArgs bias;
  CLI::App* biascmd = app.add_subcommand("bias", "majority bias curve");
  biascmd->add_option("--delta", bias.delta, "coin bias in (0, 1]")->required();
  biascmd->add_option("--counts", bias.counts_text, "odd counts, e.g. 1,11,101")->required();
  biascmd->add_option("--trials", bias.trials, "Monte Carlo trials per count");
  biascmd->add_option("--seed", bias.seed, "rng seed");
  biascmd->add_option("--out", bias.out, "output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  try {
    if (recover->parsed()) return cmd_recover(rec);
    if (features->parsed()) return cmd_features(feat);
    if (cvcmd->parsed()) return cmd_cv(cv);
    if (biascmd->parsed()) return cmd_bias(bias);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
