#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>

#include "mqs/sparse/linear_operator.hpp"

namespace mqs {

/// The three right-hand-side sequences solved against K_n in every time
/// step. Each family keeps its own history.
enum class RhsFamily : std::size_t {
  SourceCurrent = 0,              // j_sn(t_m)
  CouplingFromCurrentState = 1,   // K_cn^T a_c^m
  CouplingFromPreviousState = 2,  // K_cn^T a_c^{m-1}
};
inline constexpr std::size_t kRhsFamilyCount = 3;
inline constexpr std::array<RhsFamily, kRhsFamilyCount> kAllRhsFamilies{
    RhsFamily::SourceCurrent, RhsFamily::CouplingFromCurrentState, RhsFamily::CouplingFromPreviousState};

std::string_view to_string(RhsFamily family);

enum class StartStrategyKind { Previous, Cspe, Pod };

std::string_view to_string(StartStrategyKind kind);
/// Accepts "previous", "cspe", "pod".
StartStrategyKind parse_strategy(std::string_view name);

struct StartVectorOptions {
  StartStrategyKind kind = StartStrategyKind::Cspe;
  std::size_t max_basis = 20;
  double drop_tol = 1e-12;
  std::size_t n_pod = 10;
  double eps_pod = 1e-4;
};

struct FamilyDiagnostics {
  std::size_t basis_cols = 0;        // current CSPE basis size
  std::size_t max_basis_cols = 0;    // largest CSPE basis size seen
  std::size_t pod_k = 0;             // last POD truncation index
  double pod_info = 1.0;             // last relative information kept
  double min_pod_info = 1.0;         // smallest value over the run
  std::size_t pod_evaluations = 0;
  std::size_t columns_accepted = 0;  // CSPE columns appended
  std::size_t operator_applications = 0;  // K_n applications spent by the strategy
};

/// Produces PCG start vectors for the multiple right-hand-side problem and
/// learns from converged solutions.
class StartVectorStrategy {
 public:
  virtual ~StartVectorStrategy() = default;
  virtual StartStrategyKind kind() const = 0;
  virtual Vector start_vector(RhsFamily family, std::span<const double> rhs) = 0;
  virtual void record(RhsFamily family, std::span<const double> solution) = 0;

  const FamilyDiagnostics& diagnostics(RhsFamily family) const {
    return diagnostics_[static_cast<std::size_t>(family)];
  }

 protected:
  FamilyDiagnostics& diag(RhsFamily family) { return diagnostics_[static_cast<std::size_t>(family)]; }

 private:
  std::array<FamilyDiagnostics, kRhsFamilyCount> diagnostics_{};
};

/// `k_n` must outlive the strategy.
std::unique_ptr<StartVectorStrategy> make_strategy(const StartVectorOptions& options, const LinearOperator& k_n);

}  // namespace mqs
