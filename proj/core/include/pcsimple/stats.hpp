#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcsimple/dataset.hpp"

namespace pcsimple {

// Everything the sample algorithm needs from the data: the joint correlation
// matrix of (Y, X^(1..p)) with index 0 reserved for the response, the sample
// size, and the covariate labels. Immutable once constructed.
class SufficientStats {
 public:
  // Validates symmetry, unit diagonal, entry range and sizes; throws DomainError.
  SufficientStats(Eigen::MatrixXd correlation, std::size_t n,
                  std::vector<std::string> names = {});

  [[nodiscard]] const Eigen::MatrixXd& correlation() const { return correlation_; }
  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] int p() const { return static_cast<int>(correlation_.rows()) - 1; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

 private:
  Eigen::MatrixXd correlation_;
  std::size_t n_;
  std::vector<std::string> names_;
};

// Outcome of the Fisher-Z test of a zero partial correlation.
struct TestDecision {
  double rho_hat = 0.0;
  double z = 0.0;
  double statistic = 0.0;  // sqrt(n - |S| - 3) * |z|, 0 when not testable
  double threshold = 0.0;  // Phi^{-1}(1 - alpha/2)
  bool reject = false;
  bool testable = false;
};

// Largest |rho| passed to the Fisher transform.
inline constexpr double kCorrelationClamp = 1.0 - 1e-12;
// Submatrices whose reciprocal condition estimate falls below this are
// treated as non-informative.
inline constexpr double kMinReciprocalCondition = 1e-12;

double standard_normal_cdf(double x);

// Inverse of the standard normal CDF. Throws DomainError outside (0, 1).
double standard_normal_quantile(double p);

// 0.5 * log((1 + rho) / (1 - rho)) after clamping |rho| to kCorrelationClamp.
double fisher_z(double rho);

// Pearson correlations of (y, x1..xp) with n-1 denominators.
// Throws DataError for n < 2, non-finite entries or constant columns.
SufficientStats correlation_matrix(const Dataset& data);

// Partial correlation rho(a, b | S) on a correlation (or covariance) matrix,
// computed from the inverse of the submatrix on {a, b} u S. Returns nullopt
// when that submatrix is singular or too ill-conditioned to trust.
std::optional<double> partial_correlation(const Eigen::MatrixXd& corr, int a, int b,
                                          std::span<const int> conditioning);
std::optional<double> partial_correlation(const SufficientStats& stats, int a, int b,
                                          std::span<const int> conditioning);

// Same quantity via the classical order-reduction recursion, always peeling
// off the largest index of S. Exponential in |S|; used as a cross-check.
std::optional<double> partial_correlation_recursive(const Eigen::MatrixXd& corr, int a, int b,
                                                    std::span<const int> conditioning);
std::optional<double> partial_correlation_recursive(const SufficientStats& stats, int a, int b,
                                                    std::span<const int> conditioning);

// Two-sided test of H0: rho(Y, j | S) = 0 at level alpha.
// The test is only defined when n - s_size - 3 >= 1.
TestDecision test_zero_partial_correlation(double rho_hat, std::size_t n, std::size_t s_size,
                                           double alpha);

// alpha_n = 2 * (1 - Phi(sqrt(n) * c_n / 2)), clipped into the open unit interval.
double alpha_for_consistency(std::size_t n, double c_n);

}  // namespace pcsimple
