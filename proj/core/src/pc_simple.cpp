#include "pcsimple/pc_simple.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcsimple/detail/parallel.hpp"
#include "pcsimple/errors.hpp"

namespace pcsimple {

namespace {

struct Verdict {
  TestOutcome outcome;
  double rho;
  double statistic;
};

struct VariableResult {
  bool keep = true;
  std::vector<TraceEntry> trace;
};

// Advances `pos` (indices into a pool of size n) to the next k-combination in
// lexicographic order; returns false after the last one.
bool next_combination(std::vector<std::size_t>& pos, std::size_t n) {
  const std::size_t k = pos.size();
  for (std::size_t i = k; i-- > 0;) {
    if (pos[i] < n - k + i) {
      ++pos[i];
      for (std::size_t t = i + 1; t < k; ++t) pos[t] = pos[t - 1] + 1;
      return true;
    }
  }
  return false;
}

template <typename Tester>
VariableResult test_variable(const Tester& tester, int stage, int j,
                             const std::vector<int>& previous, bool record_trace) {
  VariableResult out;
  std::vector<int> pool;
  pool.reserve(previous.size());
  for (int k : previous) {
    if (k != j) pool.push_back(k);
  }
  const auto order = static_cast<std::size_t>(stage - 1);
  if (order > pool.size()) return out;

  std::vector<std::size_t> pos(order);
  for (std::size_t i = 0; i < order; ++i) pos[i] = i;
  std::vector<int> conditioning(order);
  do {
    for (std::size_t i = 0; i < order; ++i) conditioning[i] = pool[pos[i]];
    const Verdict v = tester(j, conditioning);
    if (record_trace) {
      out.trace.push_back({stage, j, conditioning, v.rho, v.statistic, v.outcome});
    }
    if (v.outcome == TestOutcome::removed) {
      out.keep = false;
      break;
    }
  } while (order > 0 && next_combination(pos, pool.size()));
  return out;
}

template <typename Tester>
SelectionResult run_pc_simple(int p, const Tester& tester, std::optional<int> max_order,
                              int threads, bool record_trace) {
  if (max_order && *max_order < 1) throw DomainError("max_order must be >= 1");
  SelectionResult result;
  result.p = p;
  result.max_order = max_order;

  std::vector<int> previous(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) previous[static_cast<std::size_t>(j - 1)] = j;

  for (int stage = 1;; ++stage) {
    // previous is frozen for the whole stage; results are gathered by position.
    std::vector<VariableResult> per_var(previous.size());
    detail::parallel_for(previous.size(), threads, [&](std::size_t i) {
      per_var[i] = test_variable(tester, stage, previous[i], previous, record_trace);
    });

    std::vector<int> current;
    for (std::size_t i = 0; i < previous.size(); ++i) {
      if (per_var[i].keep) current.push_back(previous[i]);
      if (record_trace) {
        auto& t = per_var[i].trace;
        result.trace.insert(result.trace.end(), std::make_move_iterator(t.begin()),
                            std::make_move_iterator(t.end()));
      }
    }
    result.stages.emplace_back(current);
    result.m_reach = stage;
    previous = std::move(current);
    if (previous.size() <= static_cast<std::size_t>(stage)) break;
    if (max_order && stage >= *max_order) break;
  }
  result.selected = result.stages.back();
  return result;
}

}  // namespace

ActiveSet::ActiveSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw DomainError("active set: duplicate covariate index");
  }
  if (!members_.empty() && members_.front() < 1) {
    throw DomainError("active set: covariate indices are 1-based");
  }
}

bool ActiveSet::contains(int j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

bool ActiveSet::is_subset_of(const ActiveSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

std::string_view to_string(TestOutcome outcome) {
  switch (outcome) {
    case TestOutcome::removed: return "removed";
    case TestOutcome::retained: return "retained";
    case TestOutcome::non_testable_retained: return "non-testable-retained";
    case TestOutcome::non_informative_retained: return "non-informative-retained";
  }
  return "unknown";
}

ActiveSet correlation_screening(const SufficientStats& stats, double alpha) {
  SelectOptions options;
  options.max_order = 1;
  options.record_trace = false;
  return pc_simple_select(stats, alpha, options).stages.front();
}

SelectionResult pc_simple_select(const SufficientStats& stats, double alpha,
                                 const SelectOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "significance level " << alpha << " outside (0, 1)";
    throw DomainError(msg.str());
  }
  const std::size_t n = stats.n();
  auto tester = [&](int j, const std::vector<int>& conditioning) -> Verdict {
    const auto rho = partial_correlation(stats, 0, j, conditioning);
    if (!rho) {
      return {TestOutcome::non_informative_retained, std::numeric_limits<double>::quiet_NaN(), 0.0};
    }
    const TestDecision d = test_zero_partial_correlation(*rho, n, conditioning.size(), alpha);
    if (!d.testable) return {TestOutcome::non_testable_retained, *rho, 0.0};
    return {d.reject ? TestOutcome::retained : TestOutcome::removed, *rho, d.statistic};
  };
  SelectionResult r =
      run_pc_simple(stats.p(), tester, options.max_order, options.threads, options.record_trace);
  r.alpha = alpha;
  r.n = n;
  return r;
}

Eigen::MatrixXd joint_covariance(const ModelSpec& model) {
  const Eigen::Index p = model.beta.size();
  if (model.sigma_x.rows() != p || model.sigma_x.cols() != p) {
    std::ostringstream msg;
    msg << "joint covariance: beta has " << p << " entries but sigma_x is "
        << model.sigma_x.rows() << "x" << model.sigma_x.cols();
    throw ModelError(msg.str());
  }
  if (!(model.sigma2 > 0.0)) throw ModelError("joint covariance: residual variance must be > 0");
  const Eigen::VectorXd cov_yx = model.sigma_x * model.beta;
  Eigen::MatrixXd joint(p + 1, p + 1);
  joint(0, 0) = model.beta.dot(cov_yx) + model.sigma2;
  joint.block(1, 0, p, 1) = cov_yx;
  joint.block(0, 1, 1, p) = cov_yx.transpose();
  joint.bottomRightCorner(p, p) = model.sigma_x;
  return joint;
}

Eigen::MatrixXd covariance_to_correlation(const Eigen::MatrixXd& cov) {
  const Eigen::Index d = cov.rows();
  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  Eigen::MatrixXd corr(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double r = std::clamp(cov(i, j) / (sd(i) * sd(j)), -1.0, 1.0);
      corr(i, j) = r;
      corr(j, i) = r;
    }
  }
  return corr;
}

SelectionResult pc_simple_population(const ModelSpec& model, double zero_tol,
                                     std::optional<int> max_order) {
  model.validate();
  if (!(zero_tol >= 0.0)) throw DomainError("zero tolerance must be non-negative");
  const Eigen::MatrixXd corr = covariance_to_correlation(joint_covariance(model));
  auto tester = [&](int j, const std::vector<int>& conditioning) -> Verdict {
    const auto rho = partial_correlation(corr, 0, j, conditioning);
    if (!rho) {
      return {TestOutcome::non_informative_retained, std::numeric_limits<double>::quiet_NaN(), 0.0};
    }
    const double mag = std::abs(*rho);
    return {mag > zero_tol ? TestOutcome::retained : TestOutcome::removed, *rho, mag};
  };
  return run_pc_simple(model.p(), tester, max_order, 1, true);
}

}  // namespace pcsimple
