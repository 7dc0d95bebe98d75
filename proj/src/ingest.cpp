#include "nestrank/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nestrank {

namespace {

std::string Trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

int ParseInt(const std::string& tok, const std::string& where) {
  int v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw InvalidArgument(where + ": expected an integer, got '" + tok + "'");
  return v;
}

double ParseDouble(const std::string& tok, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(where + ": expected a number, got '" + tok + "'");
  }
}

}  // namespace

ExportTable load_export_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path + ": empty file");
  std::vector<std::string> header = SplitCsvLine(line);
  auto col_of = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw InvalidArgument(path + ": missing column '" + name + "' in header");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t c_col = col_of(schema.country), p_col = col_of(schema.product);
  std::size_t y_col = col_of(schema.year), v_col = col_of(schema.value);

  // (country, product, year) -> summed value; map keeps output deterministic
  std::map<std::tuple<std::string, std::string, int>, double> merged;
  ExportTable t;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    std::vector<std::string> cells = SplitCsvLine(line);
    std::string where = path + ":" + std::to_string(lineno);
    if (cells.size() != header.size())
      throw InvalidArgument(where + ": expected " + std::to_string(header.size()) +
                            " cells, got " + std::to_string(cells.size()));
    std::string country = cells[c_col], product = cells[p_col];
    if (country.empty() || product.empty())
      throw InvalidArgument(where + ": empty country or product label");
    int year = ParseInt(cells[y_col], where);
    double value = ParseDouble(cells[v_col], where);
    if (value < 0.0) throw InvalidArgument(where + ": negative export value");
    ++t.rows_parsed;
    auto [it, inserted] = merged.try_emplace({country, product, year}, value);
    if (!inserted) {
      it->second += value;
      ++t.duplicates_merged;
    }
  }
  t.records.reserve(merged.size());
  for (const auto& [key, value] : merged)
    t.records.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), value});
  return t;
}

ExportTable filter_table(const ExportTable& t,
                         const std::optional<std::unordered_set<std::string>>& countries,
                         const std::optional<std::unordered_set<std::string>>& products) {
  ExportTable out;
  out.rows_parsed = t.rows_parsed;
  out.duplicates_merged = t.duplicates_merged;
  for (const auto& r : t.records) {
    if (countries && !countries->count(r.country)) continue;
    if (products && !products->count(r.product)) continue;
    out.records.push_back(r);
  }
  return out;
}

std::unordered_set<std::string> load_whitelist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::unordered_set<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string name = Trim(line);
    if (!name.empty()) names.insert(name);
  }
  return names;
}

RcaMatrix rca(const ExportTable& t, int year) {
  // collect labels with nonzero totals for the year
  std::map<std::string, double> country_total, product_total;
  double grand = 0.0;
  for (const auto& r : t.records) {
    if (r.year != year || r.value <= 0.0) continue;
    country_total[r.country] += r.value;
    product_total[r.product] += r.value;
    grand += r.value;
  }
  if (grand <= 0.0)
    throw InvalidArgument("no positive export values for year " + std::to_string(year));

  RcaMatrix m;
  std::map<std::string, Index> c_of, p_of;
  for (const auto& [name, total] : country_total) {
    c_of[name] = static_cast<Index>(m.countries.size());
    m.countries.push_back(name);
  }
  for (const auto& [name, total] : product_total) {
    p_of[name] = static_cast<Index>(m.products.size());
    m.products.push_back(name);
  }
  m.values.assign(m.countries.size() * m.products.size(), 0.0);
  for (const auto& r : t.records) {
    if (r.year != year || r.value <= 0.0) continue;
    std::size_t idx = static_cast<std::size_t>(c_of[r.country]) * m.products.size() +
                      p_of[r.product];
    double country_share = r.value / country_total[r.country];
    double product_share = product_total[r.product] / grand;
    m.values[idx] = country_share / product_share;
  }
  return m;
}

BinarizeResult binarize(const RcaMatrix& r, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be non-negative");
  const Index nc = static_cast<Index>(r.countries.size());
  const Index np = static_cast<Index>(r.products.size());
  std::vector<std::pair<Index, Index>> pairs;
  for (Index c = 0; c < nc; ++c)
    for (Index p = 0; p < np; ++p)
      if (r.at(c, p) > threshold) pairs.emplace_back(c, p);  // strictly above

  std::vector<Index> row_map, col_map;
  BinarizeResult out;
  out.matrix = BinaryBipartiteMatrix::FromEdgeList(std::move(pairs), nc, np,
                                                   /*strip_empty=*/true, &row_map, &col_map);
  for (Index c = 0; c < nc; ++c)
    if (row_map[c] >= 0) out.countries.push_back(r.countries[c]);
  for (Index p = 0; p < np; ++p)
    if (col_map[p] >= 0) out.products.push_back(r.products[p]);
  return out;
}

}  // namespace nestrank
