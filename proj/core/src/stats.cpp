#include "pcsimple/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "pcsimple/errors.hpp"

namespace pcsimple {

namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

// Canonical ordering of {a, b} u S: smaller of (a, b) first, then S ascending.
// Fixing the layout makes rho(a,b|S) and rho(b,a|S) bitwise identical.
std::vector<int> ordered_indices(int a, int b, std::span<const int> conditioning) {
  std::vector<int> idx;
  idx.reserve(conditioning.size() + 2);
  idx.push_back(std::min(a, b));
  idx.push_back(std::max(a, b));
  std::vector<int> rest(conditioning.begin(), conditioning.end());
  std::sort(rest.begin(), rest.end());
  idx.insert(idx.end(), rest.begin(), rest.end());
  return idx;
}

void check_query(Eigen::Index dim, int a, int b, std::span<const int> conditioning) {
  auto in_range = [dim](int i) { return i >= 0 && i < dim; };
  if (!in_range(a) || !in_range(b) || a == b) {
    std::ostringstream msg;
    msg << "partial correlation: invalid pair (" << a << ", " << b << ") for dimension " << dim;
    throw DomainError(msg.str());
  }
  for (int k : conditioning) {
    if (!in_range(k) || k == a || k == b) {
      std::ostringstream msg;
      msg << "partial correlation: conditioning index " << k << " invalid for pair (" << a << ", "
          << b << ")";
      throw DomainError(msg.str());
    }
  }
}

std::optional<double> recurse(const Eigen::MatrixXd& corr, int a, int b,
                              std::vector<int>& conditioning) {
  if (conditioning.empty()) return clamp_unit(corr(a, b) / std::sqrt(corr(a, a) * corr(b, b)));
  // conditioning is kept sorted, so the pivot (largest index) is the back.
  const int k = conditioning.back();
  conditioning.pop_back();
  const auto r_ab = recurse(corr, a, b, conditioning);
  const auto r_ak = recurse(corr, a, k, conditioning);
  const auto r_bk = recurse(corr, b, k, conditioning);
  conditioning.push_back(k);
  if (!r_ab || !r_ak || !r_bk) return std::nullopt;
  const double da = 1.0 - (*r_ak) * (*r_ak);
  const double db = 1.0 - (*r_bk) * (*r_bk);
  if (da < 1e-12 || db < 1e-12) return std::nullopt;
  return clamp_unit((*r_ab - (*r_ak) * (*r_bk)) / std::sqrt(da * db));
}

}  // namespace

SufficientStats::SufficientStats(Eigen::MatrixXd correlation, std::size_t n,
                                 std::vector<std::string> names)
    : correlation_(std::move(correlation)), n_(n), names_(std::move(names)) {
  const Eigen::Index dim = correlation_.rows();
  if (dim < 2 || correlation_.cols() != dim) {
    throw DomainError("sufficient stats: correlation matrix must be square with p >= 1");
  }
  if (n_ < 1) throw DomainError("sufficient stats: sample size must be >= 1");
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (correlation_(i, i) != 1.0) {
      throw DomainError("sufficient stats: correlation matrix must have unit diagonal");
    }
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = correlation_(i, j);
      if (!std::isfinite(v) || v != correlation_(j, i) || v < -1.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "sufficient stats: entry (" << i << ", " << j
            << ") breaks symmetry or lies outside [-1, 1]";
        throw DomainError(msg.str());
      }
    }
  }
  if (names_.empty()) {
    names_.reserve(static_cast<std::size_t>(dim - 1));
    for (Eigen::Index j = 1; j < dim; ++j) names_.push_back("x" + std::to_string(j));
  } else if (names_.size() != static_cast<std::size_t>(dim - 1)) {
    throw DomainError("sufficient stats: expected one name per covariate");
  }
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "standard normal quantile: probability " << p << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  // Phi^{-1}(p) = -sqrt(2) * erfc^{-1}(2p); exact zero at the median.
  if (p == 0.5) return 0.0;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double fisher_z(double rho) {
  if (std::isnan(rho)) throw DomainError("fisher_z: NaN correlation");
  // atanh(r) == 0.5 * log((1 + r) / (1 - r)).
  return std::atanh(std::clamp(rho, -kCorrelationClamp, kCorrelationClamp));
}

SufficientStats correlation_matrix(const Dataset& data) {
  const Eigen::Index n = data.X.rows();
  const Eigen::Index p = data.X.cols();
  if (data.y.size() != n) throw DataError("dataset: response length does not match rows");
  if (p < 1) throw DataError("dataset: no covariate columns");
  if (n < 2) throw DataError("dataset: need at least two rows to estimate correlations");

  Eigen::MatrixXd joint(n, p + 1);
  joint.col(0) = data.y;
  joint.rightCols(p) = data.X;

  auto column_name = [&](Eigen::Index c) -> std::string {
    if (c == 0) return data.response_name;
    const auto k = static_cast<std::size_t>(c - 1);
    return k < data.names.size() ? data.names[k] : "x" + std::to_string(c);
  };

  for (Eigen::Index c = 0; c <= p; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      if (!std::isfinite(joint(r, c))) {
        std::ostringstream msg;
        msg << "dataset: missing or non-finite value at row " << (r + 1) << ", column '"
            << column_name(c) << "'";
        throw DataError(msg.str());
      }
    }
    if (joint.col(c).maxCoeff() == joint.col(c).minCoeff()) {
      throw DataError("dataset: column '" + column_name(c) + "' is constant");
    }
  }

  const Eigen::RowVectorXd mean = joint.colwise().mean();
  joint.rowwise() -= mean;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p + 1, p + 1);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(joint.transpose());
  cov /= static_cast<double>(n - 1);

  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  Eigen::MatrixXd corr(p + 1, p + 1);
  for (Eigen::Index i = 0; i <= p; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = clamp_unit(cov(i, j) / (sd(i) * sd(j)));
      corr(i, j) = r;
      corr(j, i) = r;
    }
  }

  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index c = 1; c <= p; ++c) names.push_back(column_name(c));
  return SufficientStats(std::move(corr), static_cast<std::size_t>(n), std::move(names));
}

std::optional<double> partial_correlation(const Eigen::MatrixXd& corr, int a, int b,
                                          std::span<const int> conditioning) {
  check_query(corr.rows(), a, b, conditioning);
  if (conditioning.empty()) {
    const double scale = std::sqrt(corr(a, a) * corr(b, b));
    return clamp_unit(corr(a, b) / scale);
  }

  const std::vector<int> idx = ordered_indices(a, b, conditioning);
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = corr(idx[i], idx[j]);
  }

  const Eigen::LLT<Eigen::MatrixXd> llt(sub);
  if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition)) {
    return std::nullopt;
  }
  // Only the leading 2x2 block of the precision matrix is needed.
  const Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(k, 2));
  const double paa = precision(0, 0);
  const double pbb = precision(1, 1);
  const double pab = precision(0, 1);
  if (!(paa > 0.0 && pbb > 0.0)) return std::nullopt;
  return clamp_unit(-pab / std::sqrt(paa * pbb));
}

std::optional<double> partial_correlation(const SufficientStats& stats, int a, int b,
                                          std::span<const int> conditioning) {
  return partial_correlation(stats.correlation(), a, b, conditioning);
}

std::optional<double> partial_correlation_recursive(const Eigen::MatrixXd& corr, int a, int b,
                                                    std::span<const int> conditioning) {
  check_query(corr.rows(), a, b, conditioning);
  std::vector<int> s(conditioning.begin(), conditioning.end());
  std::sort(s.begin(), s.end());
  return recurse(corr, a, b, s);
}

std::optional<double> partial_correlation_recursive(const SufficientStats& stats, int a, int b,
                                                    std::span<const int> conditioning) {
  return partial_correlation_recursive(stats.correlation(), a, b, conditioning);
}

TestDecision test_zero_partial_correlation(double rho_hat, std::size_t n, std::size_t s_size,
                                           double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "significance level " << alpha << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  TestDecision d;
  d.rho_hat = clamp_unit(rho_hat);
  d.z = fisher_z(d.rho_hat);
  // Phi^{-1}(1 - alpha/2) == -Phi^{-1}(alpha/2); the latter keeps precision for tiny alpha.
  d.threshold = -standard_normal_quantile(alpha / 2.0);
  const auto df = static_cast<long long>(n) - static_cast<long long>(s_size) - 3;
  d.testable = df >= 1;
  if (d.testable) {
    d.statistic = std::sqrt(static_cast<double>(df)) * std::abs(d.z);
    d.reject = d.statistic > d.threshold;
  }
  return d;
}

double alpha_for_consistency(std::size_t n, double c_n) {
  if (n < 1 || !(c_n > 0.0)) {
    throw DomainError("alpha_for_consistency: need n >= 1 and c_n > 0");
  }
  // 2 * (1 - Phi(t)) == erfc(t / sqrt(2)), without cancellation for large t.
  const double t = std::sqrt(static_cast<double>(n)) * c_n / 2.0;
  const double a = std::erfc(t / std::numbers::sqrt2);
  return std::clamp(a, std::numeric_limits<double>::denorm_min(), std::nextafter(1.0, 0.0));
}

}  // namespace pcsimple
