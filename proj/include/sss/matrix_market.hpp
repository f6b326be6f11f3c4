#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "sss/sparse_skew.hpp"

namespace sss {

struct MmParseError : std::runtime_error {
  MmParseError(const std::string& msg, int line_no)
      : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
  int line;
};

struct MmData {
  SparseSkewMatrix s;
  std::optional<double> alpha;  // from a "%% alpha = <value>" comment line
};

// Coordinate format, kinds "real general" and "real skew-symmetric".
// A "general" matrix is verified skew with tol = 1e-13 * max|entry|;
// "skew-symmetric" files carry the strict lower triangle, the upper one is
// mirrored. Throws MmParseError on malformed input, std::invalid_argument on
// a non-square matrix or a skew violation.
MmData read_matrix_market(const std::string& path);

// Writes kind "real skew-symmetric" (strict lower triangle) with full
// double round-trip precision; alpha, when given, goes into a
// "%% alpha = <value>" comment line.
void write_matrix_market(const SparseSkewMatrix& s, const std::string& path,
                         std::optional<double> alpha = {});

// Dense vectors in Matrix Market array format (n x 1, real general).
Vector read_vector(const std::string& path);
void write_vector(const Vector& v, const std::string& path);

}  // namespace sss
