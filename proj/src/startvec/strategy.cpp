#include "mqs/startvec/strategy.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mqs/startvec/snapshot_pod.hpp"
#include "mqs/startvec/subspace_cache.hpp"

namespace mqs {

std::string_view to_string(RhsFamily family) {
  switch (family) {
    case RhsFamily::SourceCurrent: return "source";
    case RhsFamily::CouplingFromCurrentState: return "coupling_current";
    case RhsFamily::CouplingFromPreviousState: return "coupling_previous";
  }
  return "unknown";
}

std::string_view to_string(StartStrategyKind kind) {
  switch (kind) {
    case StartStrategyKind::Previous: return "previous";
    case StartStrategyKind::Cspe: return "cspe";
    case StartStrategyKind::Pod: return "pod";
  }
  return "unknown";
}

StartStrategyKind parse_strategy(std::string_view name) {
  if (name == "previous") return StartStrategyKind::Previous;
  if (name == "cspe") return StartStrategyKind::Cspe;
  if (name == "pod") return StartStrategyKind::Pod;
  throw std::invalid_argument("unknown start-vector strategy '" + std::string(name) + "'");
}

namespace {

bool is_zero(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

std::size_t index(RhsFamily f) { return static_cast<std::size_t>(f); }

class PreviousSolution final : public StartVectorStrategy {
 public:
  StartStrategyKind kind() const override { return StartStrategyKind::Previous; }

  Vector start_vector(RhsFamily family, std::span<const double> rhs) override {
    const Vector& last = last_[index(family)];
    if (last.size() == rhs.size()) return last;
    return Vector(rhs.size(), 0.0);
  }

  void record(RhsFamily family, std::span<const double> solution) override {
    last_[index(family)].assign(solution.begin(), solution.end());
  }

 private:
  std::array<Vector, kRhsFamilyCount> last_;
};

class CascadedSpe final : public StartVectorStrategy {
 public:
  CascadedSpe(const StartVectorOptions& o, const LinearOperator& k_n) : k_n_(k_n) {
    for (auto& c : caches_) c = SubspaceCache(o.max_basis, o.drop_tol);
  }

  StartStrategyKind kind() const override { return StartStrategyKind::Cspe; }

  Vector start_vector(RhsFamily family, std::span<const double> rhs) override {
    SubspaceCache& cache = caches_[index(family)];
    Vector x0 = spe_start_vector(cache, rhs);
    diag(family).basis_cols = cache.columns();
    return x0;
  }

  void record(RhsFamily family, std::span<const double> solution) override {
    if (is_zero(solution)) return;
    SubspaceCache& cache = caches_[index(family)];
    cache.insert(solution, k_n_);
    auto& d = diag(family);
    d.basis_cols = cache.columns();
    d.max_basis_cols = std::max(d.max_basis_cols, cache.columns());
    d.columns_accepted = cache.columns_accepted();
    d.operator_applications = cache.products_computed();
  }

  const SubspaceCache& cache(RhsFamily family) const { return caches_[index(family)]; }

 private:
  const LinearOperator& k_n_;
  std::array<SubspaceCache, kRhsFamilyCount> caches_;
};

class ProperOrthogonalDecomposition final : public StartVectorStrategy {
 public:
  ProperOrthogonalDecomposition(const StartVectorOptions& o, const LinearOperator& k_n) : k_n_(k_n) {
    for (auto& b : buffers_) b = SnapshotBuffer(o.n_pod, o.eps_pod);
  }

  StartStrategyKind kind() const override { return StartStrategyKind::Pod; }

  Vector start_vector(RhsFamily family, std::span<const double> rhs) override {
    SnapshotBuffer& buffer = buffers_[index(family)];
    if (buffer.size() == 0) return Vector(rhs.size(), 0.0);
    const CountingOperator counted(k_n_);
    PodStartVector pod = pod_start_vector(buffer, rhs, counted);
    auto& d = diag(family);
    d.pod_k = pod.k;
    d.pod_info = pod.info_kept;
    d.min_pod_info = d.pod_evaluations == 0 ? pod.info_kept : std::min(d.min_pod_info, pod.info_kept);
    ++d.pod_evaluations;
    d.operator_applications += counted.count();
    return std::move(pod.x0);
  }

  void record(RhsFamily family, std::span<const double> solution) override {
    if (is_zero(solution)) return;
    buffers_[index(family)].push(solution);
  }

 private:
  const LinearOperator& k_n_;
  std::array<SnapshotBuffer, kRhsFamilyCount> buffers_;
};

}  // namespace

std::unique_ptr<StartVectorStrategy> make_strategy(const StartVectorOptions& options, const LinearOperator& k_n) {
  switch (options.kind) {
    case StartStrategyKind::Previous: return std::make_unique<PreviousSolution>();
    case StartStrategyKind::Cspe: return std::make_unique<CascadedSpe>(options, k_n);
    case StartStrategyKind::Pod: return std::make_unique<ProperOrthogonalDecomposition>(options, k_n);
  }
  throw std::invalid_argument("make_strategy: unknown kind");
}

}  // namespace mqs
