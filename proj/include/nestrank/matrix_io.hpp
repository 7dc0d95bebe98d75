#pragma once

#include <string>

#include "nestrank/bimatrix.hpp"

namespace nestrank {

// Reads a matrix from either of the two supported text layouts, detected
// from the first line:
//   - edge list: header "N M", then one "row col" pair per line (0-based);
//   - dense CSV: rows of comma-separated 0/1 values.
// Zero-degree rows/columns are rejected (InvalidArgument names the line).
BinaryBipartiteMatrix read_matrix(const std::string& path);

// Writes the edge-list layout: "N M" header, then "row col" pairs in
// row-major order.
void write_matrix(const std::string& path, const BinaryBipartiteMatrix& m);

// Writes rows of comma-separated 0/1 values.
void write_dense_csv(const std::string& path, const BinaryBipartiteMatrix& m);

}  // namespace nestrank
