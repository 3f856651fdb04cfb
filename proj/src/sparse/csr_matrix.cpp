#include "mqs/sparse/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mqs {

CsrMatrix::CsrMatrix(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != nrows_ + 1 || row_ptr_.front() != 0)
    throw std::invalid_argument("CsrMatrix: row_ptr must have nrows+1 entries starting at 0");
  if (row_ptr_.back() != col_idx_.size() || col_idx_.size() != values_.size())
    throw std::invalid_argument("CsrMatrix: row_ptr[nrows] must equal nnz");
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw std::invalid_argument("CsrMatrix: row_ptr decreasing");
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= ncols_)
        throw std::invalid_argument("CsrMatrix: column index out of range in row " + std::to_string(i));
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("CsrMatrix: columns not strictly increasing in row " + std::to_string(i));
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row >= nrows || t.col >= ncols) throw std::invalid_argument("from_triplets: index out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> row_ptr(nrows + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& t = triplets[k];
    if (k > 0 && t.row == triplets[k - 1].row && t.col == triplets[k - 1].col) {
      values.back() += t.value;
      continue;
    }
    col_idx.push_back(t.col);
    values.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (std::size_t i = 0; i < nrows; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(nrows, ncols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<double> ones(n, 1.0);
  return from_diagonal(ones);
}

CsrMatrix CsrMatrix::from_diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<std::size_t> row_ptr(n + 1), col_idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    row_ptr[i + 1] = i + 1;
    col_idx[i] = i;
  }
  return CsrMatrix(n, n, std::move(row_ptr), std::move(col_idx), std::vector<double>(diag.begin(), diag.end()));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= nrows_ || j >= ncols_) throw std::out_of_range("CsrMatrix::at");
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Vector CsrMatrix::diagonal() const {
  Vector d(std::min(nrows_, ncols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

bool CsrMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_idx_[k] != i && values_[k] != 0.0) return false;
  return true;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<std::size_t> row_ptr(ncols_ + 1, 0);
  for (std::size_t c : col_idx_) ++row_ptr[c + 1];
  for (std::size_t j = 0; j < ncols_; ++j) row_ptr[j + 1] += row_ptr[j];
  std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<std::size_t> col_idx(nnz());
  std::vector<double> values(nnz());
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      col_idx[dst] = i;
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(ncols_, nrows_, std::move(row_ptr), std::move(col_idx), std::move(values));
}

std::vector<Triplet> CsrMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_idx_[k], values_[k]});
  return out;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != ncols_ || y.size() != nrows_) throw std::invalid_argument("spmv: dimension mismatch");
  for (std::size_t i = 0; i < nrows_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) sum += values_[k] * x[col_idx_[k]];
    y[i] = sum;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != nrows_ || y.size() != ncols_) throw std::invalid_argument("spmv_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < nrows_; ++i) {
    const double xi = x[i];
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * xi;
  }
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.nrows());
  a.multiply(x, y);
  return y;
}

Vector spmv_transpose(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.ncols());
  a.multiply_transpose(x, y);
  return y;
}

bool symmetric_check(const CsrMatrix& a, double tol) {
  if (!a.square()) throw std::invalid_argument("symmetric_check: matrix is not square");
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  // Every stored (i, j) is compared against (j, i); this covers the union of
  // both patterns because a missing mirror reads as zero.
  for (std::size_t i = 0; i < a.nrows(); ++i)
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k)
      if (std::abs(v[k] - a.at(ci[k], i)) > tol) return false;
  return true;
}

CsrMatrix extract_block(const CsrMatrix& a, std::span<const std::size_t> row_map, std::size_t nrows,
                        std::span<const std::size_t> col_map, std::size_t ncols) {
  if (row_map.size() != a.nrows() || col_map.size() != a.ncols())
    throw std::invalid_argument("extract_block: map size mismatch");
  std::vector<Triplet> t;
  const auto& rp = a.row_ptr();
  const auto& ci = a.col_idx();
  const auto& v = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    if (row_map[i] == kDropped) continue;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) {
      if (col_map[ci[k]] == kDropped) continue;
      t.push_back({row_map[i], col_map[ci[k]], v[k]});
    }
  }
  return CsrMatrix::from_triplets(nrows, ncols, std::move(t));
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.ncols() != b.nrows()) throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<std::size_t> row_ptr(a.nrows() + 1, 0);
  std::vector<std::size_t> col_idx;
  std::vector<double> values;
  std::vector<double> acc(b.ncols(), 0.0);
  std::vector<char> used(b.ncols(), 0);
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    cols.clear();
    for (std::size_t ka = a.row_ptr()[i]; ka < a.row_ptr()[i + 1]; ++ka) {
      const std::size_t j = a.col_idx()[ka];
      const double av = a.values()[ka];
      for (std::size_t kb = b.row_ptr()[j]; kb < b.row_ptr()[j + 1]; ++kb) {
        const std::size_t c = b.col_idx()[kb];
        if (!used[c]) {
          used[c] = 1;
          cols.push_back(c);
        }
        acc[c] += av * b.values()[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (std::size_t c : cols) {
      col_idx.push_back(c);
      values.push_back(acc[c]);
      acc[c] = 0.0;
      used[c] = 0;
    }
    row_ptr[i + 1] = col_idx.size();
  }
  return CsrMatrix(a.nrows(), b.ncols(), std::move(row_ptr), std::move(col_idx), std::move(values));
}

}  // namespace mqs
