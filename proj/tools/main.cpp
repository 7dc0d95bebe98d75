// Command-line front end: ingestion, ranking, exact ratio reports, packing,
// noise robustness and convergence-scaling studies.
//
// Exit codes: 0 success, 1 input/usage error, 2 metric did not converge.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nestrank/analysis.hpp"
#include "nestrank/analytic.hpp"
#include "nestrank/ingest.hpp"
#include "nestrank/matrix_io.hpp"
#include "nestrank/metrics.hpp"
#include "nestrank/serialize.hpp"

namespace {

using nestrank::Index;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNonConvergence = 2;

std::string Fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Engine options shared by every command that iterates a metric.
struct EngineArgs {
  std::string algo = "fcm";
  double gamma = 1.0;  // gamma == 1 reproduces fcm exactly
  double epsilon = 1e-5;
  std::int64_t max_iter = 100000;
  bool serial = false;

  void Attach(CLI::App* cmd) {
    cmd->add_option("--algo", algo, "metric: fcm, mem or gamma")
        ->check(CLI::IsMember({"fcm", "mem", "gamma"}));
    cmd->add_option("--gamma", gamma, "exponent for --algo gamma (>= 1)");
    cmd->add_option("--epsilon", epsilon, "halting threshold on the rank-ratio drift");
    cmd->add_option("--max-iter", max_iter, "iteration cap");
    cmd->add_flag("--serial", serial, "run the serial reference kernels");
  }

  nestrank::RunOptions Options() const {
    nestrank::RunOptions opt;
    opt.gamma = gamma;
    opt.epsilon = epsilon;
    opt.max_iter = max_iter;
    opt.mode = serial ? nestrank::ExecMode::kSerial : nestrank::ExecMode::kParallel;
    return opt;
  }

  nestrank::Algo Algo() const { return nestrank::algo_from_name(algo); }

  void Echo(json* j) const {
    (*j)["algo"] = algo;
    if (algo == "gamma") (*j)["gamma"] = gamma;
    (*j)["epsilon"] = epsilon;
    (*j)["max_iter"] = max_iter;
    (*j)["mode"] = serial ? "serial" : "parallel";
  }
};

// Every file-producing run leaves its effective configuration next to the
// output so results stay reproducible.
void EchoConfig(const std::string& output_path, const json& config) {
  nestrank::write_text_file(output_path + ".config.json", config.dump(2) + "\n");
}

void Emit(const std::string& output_path, const std::string& text, const json& config) {
  if (output_path.empty()) {
    std::cout << text;
  } else {
    nestrank::write_text_file(output_path, text);
    EchoConfig(output_path, config);
  }
}

std::vector<Index> ParseSizes(const std::string& spec) {
  std::vector<Index> sizes;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
    Index v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size() || v < 2)
      throw nestrank::InvalidArgument("bad size '" + tok + "' in --sizes (need integers >= 2)");
    sizes.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (sizes.empty()) throw nestrank::InvalidArgument("--sizes is empty");
  return sizes;
}

// --- rank -------------------------------------------------------------------

struct RankArgs {
  std::string input, output;
  EngineArgs engine;
  bool history = false;
};

int RunRank(const RankArgs& a) {
  nestrank::BinaryBipartiteMatrix m = nestrank::read_matrix(a.input);
  nestrank::RunOptions opt = a.engine.Options();
  opt.record_history = a.history;
  nestrank::RunResult r = nestrank::run_metric(m, a.engine.Algo(), opt);

  json config{{"command", "rank"}, {"input", a.input}, {"output", a.output},
              {"history", a.history}};
  a.engine.Echo(&config);
  Emit(a.output,
       nestrank::score_report_json(a.engine.Algo(), opt.epsilon, r.state, r.report),
       config);
  if (a.history && !a.output.empty()) {
    std::string csv = "iteration,delta\n";
    for (std::size_t i = 0; i < r.report.delta_history.size(); ++i)
      csv += std::to_string(i + 1) + "," + Fmt17(r.report.delta_history[i]) + "\n";
    nestrank::write_text_file(a.output + ".history.csv", csv);
  }
  if (!r.report.converged) {
    std::cerr << "rank: did not converge within " << opt.max_iter << " iterations\n";
    return kNonConvergence;
  }
  return kOk;
}

// --- analytic ----------------------------------------------------------------

struct AnalyticArgs {
  std::string input, output;
  std::string algo = "mem";
  bool verify = false;
  double verify_epsilon = 1e-10;
  std::int64_t verify_max_iter = 1000000;
};

int RunAnalytic(const AnalyticArgs& a) {
  nestrank::BinaryBipartiteMatrix m = nestrank::read_matrix(a.input);
  nestrank::NestedProfile profile = nestrank::extract_profile(m);
  nestrank::RatioReport rep = a.algo == "mem" ? nestrank::mem_ratios(profile)
                                              : nestrank::fcm_blocked_ratios(profile);

  json config{{"command", "analytic"}, {"input", a.input}, {"output", a.output},
              {"algo", a.algo},         {"verify", a.verify}};
  if (a.verify) {
    config["verify_epsilon"] = a.verify_epsilon;
    config["verify_max_iter"] = a.verify_max_iter;
  }
  Emit(a.output, nestrank::ratio_report_json(rep), config);

  if (!a.verify) return kOk;

  // Cross-check against the iterated metric on the canonical layout, where
  // row k is the k-th least fit and column p the p-th least complex.
  nestrank::RunOptions opt;
  opt.epsilon = a.verify_epsilon;
  opt.max_iter = a.verify_max_iter;
  nestrank::RunResult r = nestrank::run_metric(
      nestrank::from_profile(profile),
      a.algo == "mem" ? nestrank::Algo::kMinimalExtremal
                      : nestrank::Algo::kFitnessComplexity,
      opt);
  double discrepancy = 0.0, zero_pair_ratio = 0.0;
  bool has_zero = false;
  auto compare = [&](const std::vector<double>& analytic, const std::vector<double>& score) {
    for (std::size_t k = 0; k < analytic.size(); ++k) {
      double iterated = score[k] / score[k + 1];
      if (analytic[k] == 0.0) {
        has_zero = true;
        zero_pair_ratio = std::max(zero_pair_ratio, iterated);
      } else {
        discrepancy = std::max(discrepancy, std::abs(analytic[k] - iterated));
      }
    }
  };
  compare(rep.row_ratios, r.state.fitness);
  compare(rep.col_ratios, r.state.complexity);
  std::cout << "verify max discrepancy: " << Fmt17(discrepancy) << "\n";
  if (has_zero)
    std::cout << "verify zero-pair max ratio at halt: " << Fmt17(zero_pair_ratio)
              << " (tends to 0 only as n -> infinity)\n";
  if (!r.report.converged) {
    std::cerr << "analytic: verification run did not converge\n";
    return kNonConvergence;
  }
  return kOk;
}

// --- pack ---------------------------------------------------------------------

struct PackArgs {
  std::string input, output, pgm, csv;
  EngineArgs engine;
};

int RunPack(const PackArgs& a) {
  nestrank::BinaryBipartiteMatrix m = nestrank::read_matrix(a.input);
  nestrank::PackResult res = nestrank::pack(m, a.engine.Algo(), a.engine.Options());
  std::int64_t violations = nestrank::border_violations(m, res.packing);

  json config{{"command", "pack"}, {"input", a.input}, {"output", a.output},
              {"pgm", a.pgm},       {"csv", a.csv}};
  a.engine.Echo(&config);
  Emit(a.output, nestrank::packing_json(res.packing, violations), config);
  if (!a.pgm.empty()) nestrank::write_packed_pgm(a.pgm, m, res.packing);
  if (!a.csv.empty()) nestrank::write_packed_csv(a.csv, m, res.packing);
  if (!res.report.converged) {
    std::cerr << "pack: metric did not converge; packing reflects the last state\n";
    return kNonConvergence;
  }
  return kOk;
}

// --- perturb -------------------------------------------------------------------

struct PerturbArgs {
  std::string input, output;
  EngineArgs engine;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::string region = "full";
  std::int64_t trials = 1;
};

int RunPerturb(const PerturbArgs& a) {
  if (a.trials < 1) throw nestrank::InvalidArgument("--trials must be >= 1");
  nestrank::BinaryBipartiteMatrix m = nestrank::read_matrix(a.input);
  nestrank::Region region = nestrank::region_from_name(a.region);
  std::string lines;
  for (std::int64_t t = 0; t < a.trials; ++t) {
    nestrank::PerturbationResult r = nestrank::perturb_and_rank(
        m, a.engine.Algo(), a.eta, region, a.seed + static_cast<std::uint64_t>(t),
        a.engine.Options());
    lines += nestrank::perturbation_json(a.engine.Algo(), r);
  }
  json config{{"command", "perturb"}, {"input", a.input},   {"output", a.output},
              {"eta", a.eta},          {"seed", a.seed},     {"region", a.region},
              {"trials", a.trials}};
  a.engine.Echo(&config);
  Emit(a.output, lines, config);
  return kOk;
}

// --- ingest ---------------------------------------------------------------------

struct IngestArgs {
  std::string input, output;
  int year = 0;
  double threshold = 1.0;
  nestrank::CsvSchema schema;
  std::string whitelist_countries, whitelist_products;
};

int RunIngest(const IngestArgs& a) {
  nestrank::ExportTable t = nestrank::load_export_csv(a.input, a.schema);
  std::optional<std::unordered_set<std::string>> countries, products;
  if (!a.whitelist_countries.empty())
    countries = nestrank::load_whitelist(a.whitelist_countries);
  if (!a.whitelist_products.empty())
    products = nestrank::load_whitelist(a.whitelist_products);
  t = nestrank::filter_table(t, countries, products);
  nestrank::RcaMatrix rca = nestrank::rca(t, a.year);
  nestrank::BinarizeResult b = nestrank::binarize(rca, a.threshold);

  nestrank::write_matrix(a.output, b.matrix);
  json labels{{"countries", b.countries}, {"products", b.products}};
  nestrank::write_text_file(a.output + ".labels.json", labels.dump(2) + "\n");
  json config{{"command", "ingest"},
              {"input", a.input},
              {"output", a.output},
              {"year", a.year},
              {"threshold", a.threshold},
              {"columns", {a.schema.country, a.schema.product, a.schema.year, a.schema.value}},
              {"whitelist_countries", a.whitelist_countries},
              {"whitelist_products", a.whitelist_products}};
  EchoConfig(a.output, config);
  std::cout << "wrote " << b.matrix.rows() << "x" << b.matrix.cols() << " matrix ("
            << b.matrix.nnz() << " ones) to " << a.output << "\n";
  return kOk;
}

// --- generate ---------------------------------------------------------------------

struct GenerateArgs {
  std::string output;
  std::string model = "a";
  Index n = 0;
  double alpha = 0.5;
  double m_ratio = 5.48;
  Index x = 4, k1 = 1, k2 = 3;
};

int RunGenerate(const GenerateArgs& a) {
  nestrank::BinaryBipartiteMatrix m =
      a.model == "a" ? nestrank::generate_model_a(a.n, a.alpha, a.m_ratio)
                     : nestrank::generate_model_b(a.n, a.x, a.alpha, a.k1, a.k2);
  nestrank::write_matrix(a.output, m);
  json config{{"command", "generate"}, {"output", a.output}, {"model", a.model},
              {"n", a.n},               {"alpha", a.alpha}};
  if (a.model == "a") {
    config["m_ratio"] = a.m_ratio;
  } else {
    config["x"] = a.x;
    config["k1"] = a.k1;
    config["k2"] = a.k2;
  }
  EchoConfig(a.output, config);
  std::cout << "wrote " << m.rows() << "x" << m.cols() << " matrix to " << a.output
            << "\n";
  return kOk;
}

// --- scaling ----------------------------------------------------------------------

struct ScalingArgs {
  std::string output;
  EngineArgs engine;
  std::string model = "a";
  std::string sizes;
  double alpha = 0.5;
  double m_ratio = 5.48;
  Index x = 4, k1 = 1, k2 = 3;
};

int RunScaling(const ScalingArgs& a) {
  nestrank::ScalingModelParams params;
  params.model = a.model;
  params.alpha = a.alpha;
  params.m_ratio = a.m_ratio;
  params.x = a.x;
  params.k1 = a.k1;
  params.k2 = a.k2;
  std::vector<Index> sizes = ParseSizes(a.sizes);
  std::vector<nestrank::ScalingPoint> pts =
      nestrank::scaling_study(params, a.engine.Algo(), sizes, a.engine.Options());
  nestrank::write_scaling_csv(a.output, pts);
  json config{{"command", "scaling"}, {"output", a.output}, {"model", a.model},
              {"sizes", a.sizes},      {"alpha", a.alpha},   {"m_ratio", a.m_ratio},
              {"x", a.x},              {"k1", a.k1},         {"k2", a.k2}};
  a.engine.Echo(&config);
  EchoConfig(a.output, config);
  bool all = true;
  for (const auto& p : pts) all = all && p.converged;
  if (!all) {
    std::cerr << "scaling: at least one size did not converge\n";
    return kNonConvergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear importance rankings on bipartite networks"};
  app.require_subcommand(1);

  RankArgs rank;
  CLI::App* rank_cmd = app.add_subcommand("rank", "iterate a metric and report scores");
  rank_cmd->add_option("input", rank.input, "matrix file (edge list or dense CSV)")
      ->required();
  rank_cmd->add_option("-o,--output", rank.output, "score report path (stdout if absent)");
  rank_cmd->add_flag("--history", rank.history,
                     "with -o, also write <output>.history.csv of per-iteration drift");
  rank.engine.Attach(rank_cmd);

  AnalyticArgs analytic;
  CLI::App* analytic_cmd =
      app.add_subcommand("analytic", "closed-form score ratios of a nested matrix");
  analytic_cmd->add_option("input", analytic.input, "matrix file")->required();
  analytic_cmd->add_option("-o,--output", analytic.output,
                           "ratio report path (stdout if absent)");
  analytic_cmd->add_option("--algo", analytic.algo, "mem or fcm")
      ->check(CLI::IsMember({"mem", "fcm"}));
  analytic_cmd->add_flag("--verify", analytic.verify,
                         "cross-check the report against the iterated metric");
  analytic_cmd->add_option("--verify-epsilon", analytic.verify_epsilon,
                           "halting threshold of the verification run");
  analytic_cmd->add_option("--verify-max-iter", analytic.verify_max_iter,
                           "iteration cap of the verification run");

  PackArgs pack;
  CLI::App* pack_cmd = app.add_subcommand("pack", "reorder a matrix by metric scores");
  pack_cmd->add_option("input", pack.input, "matrix file")->required();
  pack_cmd->add_option("-o,--output", pack.output, "packing report path (stdout if absent)");
  pack_cmd->add_option("--pgm", pack.pgm, "write the packed matrix as a P2 image");
  pack_cmd->add_option("--csv", pack.csv, "write the packed matrix as dense CSV");
  pack.engine.Attach(pack_cmd);

  PerturbArgs perturb;
  CLI::App* perturb_cmd =
      app.add_subcommand("perturb", "noise robustness of the rankings");
  perturb_cmd->add_option("input", perturb.input, "matrix file")->required();
  perturb_cmd->add_option("-o,--output", perturb.output,
                          "JSON-lines output path (stdout if absent)");
  perturb_cmd->add_option("--eta", perturb.eta, "fraction of region cells to flip")
      ->required();
  perturb_cmd->add_option("--seed", perturb.seed, "base random seed (trial t uses seed+t)")
      ->required();
  perturb_cmd->add_option("--region", perturb.region, "full, top-left or bottom-right");
  perturb_cmd->add_option("--trials", perturb.trials, "number of seeds to run");
  perturb.engine.Attach(perturb_cmd);

  IngestArgs ingest;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "build a binary matrix from an export CSV");
  ingest_cmd->add_option("input", ingest.input, "export CSV")->required();
  ingest_cmd->add_option("-o,--output", ingest.output, "matrix output path")->required();
  ingest_cmd->add_option("--year", ingest.year, "snapshot year")->required();
  ingest_cmd->add_option("--threshold", ingest.threshold,
                         "keep cells with advantage ratio strictly above this");
  ingest_cmd->add_option("--country-col", ingest.schema.country, "country column name");
  ingest_cmd->add_option("--product-col", ingest.schema.product, "product column name");
  ingest_cmd->add_option("--year-col", ingest.schema.year, "year column name");
  ingest_cmd->add_option("--value-col", ingest.schema.value, "value column name");
  ingest_cmd->add_option("--whitelist-countries", ingest.whitelist_countries,
                         "file with one country per line");
  ingest_cmd->add_option("--whitelist-products", ingest.whitelist_products,
                         "file with one product per line");

  GenerateArgs generate;
  CLI::App* generate_cmd =
      app.add_subcommand("generate", "write a synthetic perfectly nested matrix");
  generate_cmd->add_option("-o,--output", generate.output, "matrix output path")
      ->required();
  generate_cmd->add_option("--model", generate.model, "a (power law) or b (two slopes)")
      ->check(CLI::IsMember({"a", "b"}));
  generate_cmd->add_option("--n", generate.n, "number of rows")->required();
  generate_cmd->add_option("--alpha", generate.alpha, "shape parameter");
  generate_cmd->add_option("--m-ratio", generate.m_ratio, "columns per row (model a)");
  generate_cmd->add_option("--x", generate.x, "base diversification (model b)");
  generate_cmd->add_option("--k1", generate.k1, "early increment (model b)");
  generate_cmd->add_option("--k2", generate.k2, "late increment (model b)");

  ScalingArgs scaling;
  CLI::App* scaling_cmd =
      app.add_subcommand("scaling", "halting iterations as a function of size");
  scaling_cmd->add_option("-o,--output", scaling.output, "CSV output path")->required();
  scaling_cmd->add_option("--sizes", scaling.sizes, "comma-separated row counts")
      ->required();
  scaling_cmd->add_option("--model", scaling.model, "a or b")
      ->check(CLI::IsMember({"a", "b"}));
  scaling_cmd->add_option("--alpha", scaling.alpha, "shape parameter");
  scaling_cmd->add_option("--m-ratio", scaling.m_ratio, "columns per row (model a)");
  scaling_cmd->add_option("--x", scaling.x, "base diversification (model b)");
  scaling_cmd->add_option("--k1", scaling.k1, "early increment (model b)");
  scaling_cmd->add_option("--k2", scaling.k2, "late increment (model b)");
  scaling.engine.Attach(scaling_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (rank_cmd->parsed()) return RunRank(rank);
    if (analytic_cmd->parsed()) return RunAnalytic(analytic);
    if (pack_cmd->parsed()) return RunPack(pack);
    if (perturb_cmd->parsed()) return RunPerturb(perturb);
    if (ingest_cmd->parsed()) return RunIngest(ingest);
    if (generate_cmd->parsed()) return RunGenerate(generate);
    if (scaling_cmd->parsed()) return RunScaling(scaling);
  } catch (const nestrank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;  // unreachable with require_subcommand(1)
}
