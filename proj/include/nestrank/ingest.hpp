#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "nestrank/bimatrix.hpp"

namespace nestrank {

struct ExportRecord {
  std::string country;
  std::string product;
  int year = 0;
  double value = 0.0;
};

struct ExportTable {
  std::vector<ExportRecord> records;
  std::int64_t rows_parsed = 0;      // data rows seen in the file
  std::int64_t duplicates_merged = 0;  // (country, product, year) collisions summed
};

// Column names of the ingest CSV; defaults match the documented schema.
struct CsvSchema {
  std::string country = "country";
  std::string product = "product";
  std::string year = "year";
  std::string value = "value";
};

// Parses a header-first CSV of export values. Unknown extra columns are
// ignored; missing schema columns, unparsable numbers, or negative values
// throw InvalidArgument with the offending line number. Duplicate
// (country, product, year) triples are summed and counted.
ExportTable load_export_csv(const std::string& path, const CsvSchema& schema = {});

// Keeps only records whose country/product appears in the respective
// whitelist (std::nullopt = no filtering on that axis).
ExportTable filter_table(const ExportTable& t,
                         const std::optional<std::unordered_set<std::string>>& countries,
                         const std::optional<std::unordered_set<std::string>>& products);

// One-per-line whitelist file; blank lines ignored.
std::unordered_set<std::string> load_whitelist(const std::string& path);

// Dense comparative-advantage matrix for one year:
//   RCA_cp = (v_cp / sum_p' v_cp') / (sum_c' v_c'p / sum_c'p' v_c'p')
// Countries/products with zero total for the year are dropped before the
// shares are formed. Throws InvalidArgument if the year has no data.
struct RcaMatrix {
  std::vector<std::string> countries;  // row labels
  std::vector<std::string> products;   // column labels
  std::vector<double> values;          // row-major, countries x products
  double at(Index c, Index p) const {
    return values[static_cast<std::size_t>(c) * products.size() + p];
  }
};

RcaMatrix rca(const ExportTable& t, int year);

// Binary matrix of entries strictly above threshold. Rows/columns left
// empty by the cut are stripped; surviving label lists are reported so
// matrix indices stay interpretable.
struct BinarizeResult {
  BinaryBipartiteMatrix matrix;
  std::vector<std::string> countries;  // per surviving row
  std::vector<std::string> products;   // per surviving column
};

BinarizeResult binarize(const RcaMatrix& r, double threshold = 1.0);

}  // namespace nestrank
