#pragma once

#include <cstddef>
#include <span>

#include "mqs/sparse/csr_matrix.hpp"

namespace mqs {

/// Square linear map applied matrix-free.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  Vector operator()(std::span<const double> x) const {
    Vector y(size());
    apply(x, y);
    return y;
  }
};

class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(const CsrMatrix& a) : a_(&a) {}
  std::size_t size() const override { return a_->nrows(); }
  void apply(std::span<const double> x, std::span<double> y) const override { a_->multiply(x, y); }
  const CsrMatrix& matrix() const { return *a_; }

 private:
  const CsrMatrix* a_;
};

/// Forwards to another operator and counts applications.
class CountingOperator final : public LinearOperator {
 public:
  explicit CountingOperator(const LinearOperator& inner) : inner_(&inner) {}
  std::size_t size() const override { return inner_->size(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    ++count_;
    inner_->apply(x, y);
  }
  std::size_t count() const { return count_; }
  void reset() { count_ = 0; }

 private:
  const LinearOperator* inner_;
  mutable std::size_t count_ = 0;
};

}  // namespace mqs
