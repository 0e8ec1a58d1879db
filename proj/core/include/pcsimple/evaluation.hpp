#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pcsimple/dataset.hpp"
#include "pcsimple/model.hpp"
#include "pcsimple/pc_simple.hpp"

namespace pcsimple {

// True/false positive rates. A rate whose denominator vanishes (empty truth
// for tpr, full truth for fpr) is left unset rather than reported as 0 or NaN.
struct Rates {
  std::optional<double> tpr;
  std::optional<double> fpr;
};

Rates confusion(const ActiveSet& selected, const ActiveSet& truth, int p);

struct MseMeasures {
  double mse_coeff = 0.0;  // ||beta_hat - beta||^2
  double mse_pred = 0.0;   // (beta_hat - beta)' Sigma_X (beta_hat - beta)
};

MseMeasures mse_measures(const Eigen::VectorXd& beta_hat, const ModelSpec& model);

// OLS with intercept on the selected columns; zeros elsewhere.
// Throws RefitError if |selected| >= n or the design is rank deficient.
Eigen::VectorXd ols_refit(const Dataset& data, const ActiveSet& selected);

struct Metrics {
  Rates rates;
  std::optional<MseMeasures> mse;
};

// Gaussian design used by the ROC harness.
struct SimulationConfig {
  int p = 19;
  int peff = 3;
  std::size_t n = 100;
  SigmaKind kind = SigmaKind::toeplitz;
  double rho = 0.0;
  double sigma2 = 1.0;
  double delta = 0.0;

  // Throws DomainError on any parameter outside its operation's domain.
  void validate() const;
};

struct AlphaOutcome {
  double alpha = 0.0;
  ActiveSet selected;
  ActiveSet screening;  // step-1 set
  int m_reach = 0;
  bool nested = false;
  int true_positives = 0;
  int false_positives = 0;
};

struct ReplicateOutcome {
  int replicate = 0;
  Eigen::VectorXd beta;
  ActiveSet truth;
  std::vector<AlphaOutcome> per_alpha;
};

// Replicate r draws coefficients and data from the stream split_seed(seed, r)
// and runs the sample algorithm once per alpha.
ReplicateOutcome run_replicate(const SimulationConfig& config, std::span<const double> alphas,
                               std::uint64_t seed, int replicate);

struct RocRow {
  double alpha = 0.0;
  double mean_tpr = 0.0;
  double mean_fpr = 0.0;
  double sd_tpr = 0.0;
  double sd_fpr = 0.0;
  int replicates = 0;

  friend bool operator==(const RocRow&, const RocRow&) = default;
};

struct RocTable {
  std::vector<RocRow> rows;
  friend bool operator==(const RocTable&, const RocTable&) = default;
};

// Aggregates replicate outcomes (any order) into per-alpha means and sample
// standard deviations. Sums run over integer counts, so the table does not
// depend on the order of `outcomes`.
RocTable aggregate_roc(std::span<const ReplicateOutcome> outcomes, int p, int peff);

// alphas must be strictly increasing and inside (0, 1).
RocTable roc_sweep(const SimulationConfig& config, std::span<const double> alphas, int replicates,
                   std::uint64_t seed, int threads = 1);

}  // namespace pcsimple
