#include "sss/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sss {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Returns the next non-empty, non-comment line; scans comments for
// "alpha = <value>". line_no tracks the physical line for diagnostics.
bool next_data_line(std::istream& in, std::string& out, int& line_no,
                    std::optional<double>* alpha) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '%') {
      if (alpha) {
        const std::string low = lower(line);
        const auto pos = low.find("alpha");
        if (pos != std::string::npos) {
          const auto eq = low.find('=', pos);
          if (eq != std::string::npos) {
            try {
              *alpha = std::stod(line.substr(eq + 1));
            } catch (const std::exception&) {
              throw MmParseError("unparseable alpha comment", line_no);
            }
          }
        }
      }
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out = line;
    return true;
  }
  return false;
}

}  // namespace

MmData read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);

  std::string header;
  if (!std::getline(in, header))
    throw MmParseError("empty file", 0);
  int line_no = 1;
  std::istringstream hs(lower(header));
  std::string banner, object, fmt, field, symmetry;
  hs >> banner >> object >> fmt >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    throw MmParseError("not a Matrix Market matrix file", 1);
  if (fmt != "coordinate" || field != "real")
    throw MmParseError("only 'coordinate real' is supported", 1);
  const bool skew = symmetry == "skew-symmetric";
  if (!skew && symmetry != "general")
    throw MmParseError("only 'general' or 'skew-symmetric' symmetry", 1);

  std::optional<double> alpha;
  std::string line;
  if (!next_data_line(in, line, line_no, &alpha))
    throw MmParseError("missing size line", line_no);
  long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> nnz))
      throw MmParseError("malformed size line", line_no);
  }
  if (rows != cols) throw std::invalid_argument("matrix in " + path + " is not square");
  if (rows < 1 || nnz < 0) throw MmParseError("invalid dimensions", line_no);
  const int n = static_cast<int>(rows);

  std::vector<SparseSkewMatrix::Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nnz));
  double max_abs = 0.0;
  for (long k = 0; k < nnz; ++k) {
    if (!next_data_line(in, line, line_no, &alpha))
      throw MmParseError("unexpected end of file: fewer entries than declared",
                         line_no);
    std::istringstream ls(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v))
      throw MmParseError("malformed coordinate entry", line_no);
    if (i < 1 || i > n || j < 1 || j > n)
      throw MmParseError("index out of range", line_no);
    if (skew && i <= j)
      throw MmParseError("skew-symmetric file must store the strict lower triangle",
                         line_no);
    if (i == j && v != 0.0)
      throw std::invalid_argument(path + ": nonzero diagonal entry is not skew");
    if (i == j) continue;
    max_abs = std::max(max_abs, std::abs(v));
    trips.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
  }

  const double tol = skew ? 0.0 : 1e-13 * max_abs;
  return MmData{SparseSkewMatrix::from_triplets(n, trips, tol), alpha};
}

void write_matrix_market(const SparseSkewMatrix& s, const std::string& path,
                         std::optional<double> alpha) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix coordinate real skew-symmetric\n";
  char buf[64];
  if (alpha) {
    std::snprintf(buf, sizeof buf, "%% alpha = %.17g", *alpha);
    out << buf << '\n';
  }
  const int n = s.size();
  out << n << ' ' << n << ' ' << s.nnz() / 2 << '\n';
  const auto& rp = s.row_ptr();
  const auto& ci = s.col_idx();
  const auto& va = s.values();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      if (ci[k] < i) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g", i + 1, ci[k] + 1, va[k]);
        out << buf << '\n';
      }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Vector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) throw MmParseError("empty file", 0);
  int line_no = 1;
  std::istringstream hs(lower(header));
  std::string banner, object, fmt, field, symmetry;
  hs >> banner >> object >> fmt >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix" || fmt != "array" ||
      field != "real" || symmetry != "general")
    throw MmParseError("expected 'matrix array real general'", 1);

  std::string line;
  if (!next_data_line(in, line, line_no, nullptr))
    throw MmParseError("missing size line", line_no);
  long rows = 0, cols = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> rows >> cols))
      throw MmParseError("malformed size line", line_no);
  }
  if (cols != 1 || rows < 1)
    throw MmParseError("expected an n x 1 array", line_no);

  Vector v;
  v.reserve(static_cast<std::size_t>(rows));
  for (long k = 0; k < rows; ++k) {
    if (!next_data_line(in, line, line_no, nullptr))
      throw MmParseError("unexpected end of file: fewer entries than declared",
                         line_no);
    std::istringstream ls(line);
    double x = 0.0;
    if (!(ls >> x)) throw MmParseError("malformed array entry", line_no);
    v.push_back(x);
  }
  return v;
}

void write_vector(const Vector& v, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << v.size() << " 1\n";
  char buf[64];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sss
