#include "mqs/sparse/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mqs/errors.hpp"

namespace mqs {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ModelError("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix")
    throw ModelError("matrix market: missing %%MatrixMarket matrix banner");
  if (lower(format) != "coordinate") throw ModelError("matrix market: only coordinate format is supported");
  if (lower(field) != "real" && lower(field) != "double" && lower(field) != "integer")
    throw ModelError("matrix market: only real fields are supported");
  const std::string sym = lower(symmetry);
  const bool symmetric = sym == "symmetric";
  if (!symmetric && sym != "general") throw ModelError("matrix market: unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::size_t nrows = 0, ncols = 0, entries = 0;
  {
    std::istringstream sizes(line);
    if (!(sizes >> nrows >> ncols >> entries)) throw ModelError("matrix market: bad size line");
  }
  if (symmetric && nrows != ncols) throw ModelError("matrix market: symmetric matrix must be square");

  std::vector<Triplet> t;
  t.reserve(symmetric ? 2 * entries : entries);
  for (std::size_t e = 0; e < entries; ++e) {
    if (!std::getline(in, line)) throw ModelError("matrix market: truncated entry list");
    if (line.empty() || line[0] == '%') {
      --e;
      continue;
    }
    std::size_t i = 0, j = 0;
    char* end = nullptr;
    const char* p = line.c_str();
    i = std::strtoull(p, &end, 10);
    p = end;
    j = std::strtoull(p, &end, 10);
    p = end;
    const double v = std::strtod(p, &end);
    if (end == p || i == 0 || j == 0 || i > nrows || j > ncols)
      throw ModelError("matrix market: bad entry '" + line + "'");
    t.push_back({i - 1, j - 1, v});
    if (symmetric && i != j) t.push_back({j - 1, i - 1, v});
  }
  return CsrMatrix::from_triplets(nrows, ncols, std::move(t));
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CsrMatrix& a, MatrixMarketSymmetry symmetry) {
  const bool sym = symmetry == MatrixMarketSymmetry::Symmetric;
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      if (!sym || a.col_idx()[k] <= i) ++count;
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
  out << a.nrows() << ' ' << a.ncols() << ' ' << count << '\n';
  char buf[64];
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      if (sym && a.col_idx()[k] > i) continue;
      std::snprintf(buf, sizeof buf, "%.17g", a.values()[k]);
      out << i + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << buf << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a, MatrixMarketSymmetry symmetry) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write " + path.string());
  write_matrix_market(out, a, symmetry);
  if (!out) throw ModelError("write failed for " + path.string());
}

}  // namespace mqs
