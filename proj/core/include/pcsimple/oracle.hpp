#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcsimple/model.hpp"
#include "pcsimple/pc_simple.hpp"

namespace pcsimple {

// Brute-force checks of the population theory on small models. Nothing in
// here reuses the stats_core inversion path: partial covariances are formed
// as Schur complements of the joint covariance directly.

inline constexpr double kOracleZeroTolerance = 1e-9;
inline constexpr int kOracleMaxCovariates = 12;

// rho(Y, X^(j) | X^(S)) from the population joint covariance. j and S are
// 1-based covariate indices. Throws ModelError if Sigma_SS is singular.
double population_partial_correlation(const ModelSpec& model, int j, std::span<const int> conditioning);

struct FaithfulnessViolation {
  int j = 0;
  std::vector<int> conditioning;
  double rho = 0.0;  // the (near-)zero rho(Y, j | S)
};

struct FaithfulnessReport {
  bool holds = true;
  std::vector<FaithfulnessViolation> violations;
};

// Enumerates every j and every S subset of {j}^C. A violation is a zero
// rho(Y, j | S) while rho(Y, j | {j}^C) is nonzero. Throws CapabilityError
// for p > kOracleMaxCovariates.
FaithfulnessReport check_partial_faithfulness(const ModelSpec& model,
                                              double zero_tol = kOracleZeroTolerance);

// True iff for every j: beta_j != 0 <=> rho(Y, j | S) != 0 for all S subset of {j}^C.
bool verify_corollary1(const ModelSpec& model, double zero_tol = kOracleZeroTolerance);

// Random-model suite: model i uses its own stream split_seed(seed, i) to draw
// the number of covariates in [2, max_p], the design (toeplitz or equicorr),
// rho, peff in {1, .., min(3, p)} and N(0,1) coefficients at evenly spaced
// positions.
struct RandomSuiteConfig {
  int models = 100;
  int max_p = 6;
  std::uint64_t seed = 0;
  int threads = 1;
  double zero_tol = kOracleZeroTolerance;
  double population_zero_tol = kPopulationZeroTolerance;
};

struct SuiteModel {
  ModelSpec model;
  SigmaKind kind = SigmaKind::toeplitz;
  double rho = 0.0;
  int peff = 0;
};

SuiteModel random_suite_model(int max_p, std::uint64_t seed, int index);

struct ModelCheck {
  int index = 0;
  int p = 0;
  int peff = 0;
  SigmaKind kind = SigmaKind::toeplitz;
  double rho = 0.0;
  ActiveSet support;
  ActiveSet population_selected;
  ActiveSet screening_set;  // population step-1 set
  bool corollary1 = false;
  bool faithful = false;
  [[nodiscard]] bool passed() const {
    return corollary1 && faithful && population_selected == support &&
           support.is_subset_of(screening_set);
  }
};

struct SuiteReport {
  std::vector<ModelCheck> checks;
  [[nodiscard]] int failures() const;
};

SuiteReport run_random_suite(const RandomSuiteConfig& config);

}  // namespace pcsimple
