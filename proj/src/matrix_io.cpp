#include "nestrank/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace nestrank {

namespace {

std::string Trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Index ParseIndex(const std::string& raw, const std::string& where) {
  std::string tok = Trim(raw);
  Index v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw InvalidArgument("expected an integer at " + where + ", got '" + raw + "'");
  return v;
}

BinaryBipartiteMatrix ReadEdgeList(std::istream& in, const std::string& first_line,
                                   const std::string& path) {
  std::istringstream header(first_line);
  std::string a, b, extra;
  if (!(header >> a >> b) || (header >> extra))
    throw InvalidArgument(path + ": header must be 'n_rows n_cols'");
  Index n_rows = ParseIndex(a, path + " header");
  Index n_cols = ParseIndex(b, path + " header");
  std::vector<std::pair<Index, Index>> pairs;
  std::string line;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (!(ls >> a >> b) || (ls >> extra))
      throw InvalidArgument(path + ":" + std::to_string(lineno) +
                            ": expected 'row col' pair");
    std::string where = path + ":" + std::to_string(lineno);
    pairs.emplace_back(ParseIndex(a, where), ParseIndex(b, where));
  }
  return BinaryBipartiteMatrix::FromEdgeList(std::move(pairs), n_rows, n_cols);
}

BinaryBipartiteMatrix ReadDenseCsv(std::istream& in, std::string line,
                                   const std::string& path) {
  std::vector<std::pair<Index, Index>> pairs;
  Index n_cols = -1, row = 0;
  std::int64_t lineno = 0;
  do {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    Index col = 0;
    while (std::getline(ls, cell, ',')) {
      std::string where = path + ":" + std::to_string(lineno);
      Index v = ParseIndex(cell, where);
      if (v != 0 && v != 1)
        throw InvalidArgument(where + ": dense cells must be 0 or 1, got " + cell);
      if (v == 1) pairs.emplace_back(row, col);
      ++col;
    }
    if (n_cols == -1) n_cols = col;
    if (col != n_cols)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": ragged row (" +
                            std::to_string(col) + " cells, expected " +
                            std::to_string(n_cols) + ")");
    ++row;
  } while (std::getline(in, line));
  if (row == 0 || n_cols <= 0) throw InvalidArgument(path + ": no data");
  return BinaryBipartiteMatrix::FromEdgeList(std::move(pairs), row, n_cols);
}

}  // namespace

BinaryBipartiteMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string first;
  if (!std::getline(in, first)) throw InvalidArgument(path + ": empty file");
  if (!first.empty() && first.back() == '\r') first.pop_back();
  // a comma in the first line marks the dense layout
  if (first.find(',') != std::string::npos) return ReadDenseCsv(in, first, path);
  return ReadEdgeList(in, first, path);
}

void write_matrix(const std::string& path, const BinaryBipartiteMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i)
    for (Index a : m.row(i)) out << i << ' ' << a << '\n';
  if (!out) throw IoError("failed writing " + path);
}

void write_dense_csv(const std::string& path, const BinaryBipartiteMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (Index i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    std::size_t k = 0;
    for (Index a = 0; a < m.cols(); ++a) {
      bool one = k < r.size() && r[k] == a;
      if (one) ++k;
      out << (one ? '1' : '0');
      if (a + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace nestrank
