#include "nestrank/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nestrank {

using nlohmann::json;

std::string score_report_json(Algo algo, double epsilon, const ScoreState& s,
                              const ConvergenceReport& r) {
  json j;
  j["algo"] = algo_name(algo);
  j["epsilon"] = epsilon;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["fitness"] = s.fitness;
  j["complexity"] = s.complexity;
  json pairs = json::array();
  for (const auto& [lo, hi] : r.zero_ratio_pairs) pairs.push_back({lo, hi});
  j["zero_ratio_pairs"] = pairs;
  return j.dump(2) + "\n";
}

std::string ratio_report_json(const RatioReport& r) {
  json j;
  j["method"] = ratio_method_name(r.method);
  j["row_ratios"] = r.row_ratios;
  j["col_ratios"] = r.col_ratios;
  json blocks = json::array();
  for (const auto& b : r.blocks)
    blocks.push_back({{"rows", {b.row_lo, b.row_hi}}, {"cols", {b.col_lo, b.col_hi}}});
  j["blocks"] = blocks;
  return j.dump(2) + "\n";
}

std::string perturbation_json(Algo algo, const PerturbationResult& r) {
  json j;
  j["algo"] = algo_name(algo);
  j["eta"] = r.eta;
  j["seed"] = r.seed;
  j["region"] = region_name(r.region);
  j["flips"] = r.flips;
  j["rho_fitness"] = r.rho_fitness;
  j["rho_complexity"] = r.rho_complexity;
  return j.dump() + "\n";  // one line per trial
}

std::string packing_json(const Packing& p, std::int64_t violations) {
  json j;
  j["row_order"] = p.row_order;
  j["col_order"] = p.col_order;
  j["row_ties"] = p.row_ties;
  j["col_ties"] = p.col_ties;
  j["violations"] = violations;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace nestrank
