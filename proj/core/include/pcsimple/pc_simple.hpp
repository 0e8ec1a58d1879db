#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcsimple/model.hpp"
#include "pcsimple/stats.hpp"

namespace pcsimple {

// Sorted set of unique 1-based covariate indices.
class ActiveSet {
 public:
  ActiveSet() = default;
  explicit ActiveSet(std::vector<int> members);
  ActiveSet(std::initializer_list<int> members) : ActiveSet(std::vector<int>(members)) {}

  [[nodiscard]] const std::vector<int>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(int j) const;
  [[nodiscard]] bool is_subset_of(const ActiveSet& other) const;

  [[nodiscard]] auto begin() const { return members_.begin(); }
  [[nodiscard]] auto end() const { return members_.end(); }

  friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

 private:
  std::vector<int> members_;
};

enum class TestOutcome {
  removed,                   // null not rejected: j leaves the active set
  retained,                  // null rejected
  non_testable_retained,     // n - |S| - 3 < 1
  non_informative_retained,  // partial correlation could not be computed reliably
};

std::string_view to_string(TestOutcome outcome);

struct TraceEntry {
  int stage = 0;
  int j = 0;
  std::vector<int> conditioning;
  double rho_hat = 0.0;    // NaN when non-informative
  double statistic = 0.0;  // test statistic, or |rho| in population mode
  TestOutcome decision = TestOutcome::retained;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SelectionResult {
  ActiveSet selected;
  int m_reach = 0;
  std::vector<ActiveSet> stages;  // stages[m-1] is the step-m active set
  std::vector<TraceEntry> trace;
  double alpha = 0.0;  // 0 in population mode
  std::size_t n = 0;   // 0 in population mode
  int p = 0;
  std::optional<int> max_order;
};

struct SelectOptions {
  // Stop after this stage even if the active set is still large.
  std::optional<int> max_order;
  int threads = 1;
  bool record_trace = true;
};

inline constexpr double kDefaultAlpha = 0.05;
inline constexpr double kPopulationZeroTolerance = 1e-10;

// Step-1 set: covariates whose marginal correlation with Y is significant.
ActiveSet correlation_screening(const SufficientStats& stats, double alpha = kDefaultAlpha);

// Sample PC-simple. Within stage m every j in the frozen step-(m-1) set is
// tested against its conditioning subsets of size m-1 in lexicographic order,
// stopping at the first non-rejected null. Non-testable or non-informative
// tests keep the variable.
SelectionResult pc_simple_select(const SufficientStats& stats, double alpha = kDefaultAlpha,
                                 const SelectOptions& options = {});

// Covariance of (Y, X) with Y at index 0: [[b'Sb + s2, (Sb)'], [Sb, S]].
Eigen::MatrixXd joint_covariance(const ModelSpec& model);

// D^{-1/2} C D^{-1/2} with an exact unit diagonal.
Eigen::MatrixXd covariance_to_correlation(const Eigen::MatrixXd& cov);

// Population PC-simple on exact partial correlations; |rho| <= zero_tol counts as zero.
SelectionResult pc_simple_population(const ModelSpec& model,
                                     double zero_tol = kPopulationZeroTolerance,
                                     std::optional<int> max_order = std::nullopt);

}  // namespace pcsimple
