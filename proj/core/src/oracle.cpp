#include "pcsimple/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcsimple/detail/parallel.hpp"
#include "pcsimple/errors.hpp"

namespace pcsimple {

namespace {

void require_enumerable(const ModelSpec& model) {
  if (model.p() > kOracleMaxCovariates) {
    std::ostringstream msg;
    msg << "oracle enumeration supports p <= " << kOracleMaxCovariates << " (got p = "
        << model.p() << ")";
    throw CapabilityError(msg.str());
  }
}

// Population partial correlation on a precomputed joint covariance.
double schur_partial_correlation(const Eigen::MatrixXd& joint, int j,
                                 std::span<const int> conditioning) {
  const auto s = static_cast<Eigen::Index>(conditioning.size());
  const int target[2] = {0, j};
  Eigen::Matrix2d block;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) block(a, b) = joint(target[a], target[b]);
  }
  if (s > 0) {
    Eigen::MatrixXd sigma_ss(s, s);
    Eigen::MatrixXd sigma_ts(2, s);
    for (Eigen::Index u = 0; u < s; ++u) {
      for (Eigen::Index v = 0; v < s; ++v) sigma_ss(u, v) = joint(conditioning[u], conditioning[v]);
      for (int a = 0; a < 2; ++a) sigma_ts(a, u) = joint(target[a], conditioning[u]);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma_ss);
    if (!lu.isInvertible()) {
      throw ModelError("oracle: conditioning covariance is singular");
    }
    block -= sigma_ts * lu.solve(sigma_ts.transpose());
  }
  return block(0, 1) / std::sqrt(block(0, 0) * block(1, 1));
}

Eigen::MatrixXd checked_joint(const ModelSpec& model) {
  model.validate();
  return joint_covariance(model);
}

void check_index_set(int p, int j, std::span<const int> conditioning) {
  if (j < 1 || j > p) throw DomainError("oracle: covariate index out of range");
  for (int k : conditioning) {
    if (k < 1 || k > p || k == j) throw DomainError("oracle: invalid conditioning index");
  }
}

// Members of {1..p} \ {j} selected by the bits of mask.
std::vector<int> subset_from_mask(const std::vector<int>& others, unsigned mask) {
  std::vector<int> s;
  for (std::size_t b = 0; b < others.size(); ++b) {
    if (mask & (1u << b)) s.push_back(others[b]);
  }
  return s;
}

std::vector<int> complement_of(int p, int j) {
  std::vector<int> others;
  for (int k = 1; k <= p; ++k) {
    if (k != j) others.push_back(k);
  }
  return others;
}

}  // namespace

double population_partial_correlation(const ModelSpec& model, int j,
                                      std::span<const int> conditioning) {
  check_index_set(model.p(), j, conditioning);
  return schur_partial_correlation(checked_joint(model), j, conditioning);
}

FaithfulnessReport check_partial_faithfulness(const ModelSpec& model, double zero_tol) {
  require_enumerable(model);
  const Eigen::MatrixXd joint = checked_joint(model);
  const int p = model.p();
  FaithfulnessReport report;
  for (int j = 1; j <= p; ++j) {
    const std::vector<int> others = complement_of(p, j);
    const double full = schur_partial_correlation(joint, j, others);
    if (std::abs(full) <= zero_tol) continue;
    const unsigned subsets = 1u << others.size();
    for (unsigned mask = 0; mask < subsets; ++mask) {
      std::vector<int> s = subset_from_mask(others, mask);
      const double rho = schur_partial_correlation(joint, j, s);
      if (std::abs(rho) <= zero_tol) report.violations.push_back({j, std::move(s), rho});
    }
  }
  report.holds = report.violations.empty();
  return report;
}

bool verify_corollary1(const ModelSpec& model, double zero_tol) {
  require_enumerable(model);
  const Eigen::MatrixXd joint = checked_joint(model);
  const int p = model.p();
  for (int j = 1; j <= p; ++j) {
    const std::vector<int> others = complement_of(p, j);
    const unsigned subsets = 1u << others.size();
    bool all_nonzero = true;
    for (unsigned mask = 0; mask < subsets && all_nonzero; ++mask) {
      const double rho = schur_partial_correlation(joint, j, subset_from_mask(others, mask));
      all_nonzero = std::abs(rho) > zero_tol;
    }
    const bool active = model.beta(j - 1) != 0.0;
    if (active != all_nonzero) return false;
  }
  return true;
}

SuiteModel random_suite_model(int max_p, std::uint64_t seed, int index) {
  if (max_p < 2) throw DomainError("random suite: need max p >= 2");
  if (max_p > kOracleMaxCovariates) {
    std::ostringstream msg;
    msg << "random suite: oracle enumeration supports p <= " << kOracleMaxCovariates
        << " (got p = " << max_p << ")";
    throw CapabilityError(msg.str());
  }
  Rng rng(split_seed(seed, static_cast<std::uint64_t>(index)));
  SuiteModel out;
  const int p = rng.uniform_int(2, max_p);
  out.peff = rng.uniform_int(1, std::min(3, p));
  if (rng.uniform() < 0.5) {
    out.kind = SigmaKind::toeplitz;
    out.rho = rng.uniform(-0.8, 0.8);
  } else {
    out.kind = SigmaKind::equicorr;
    // Keep well inside the positive-definite range (-1/(p-1), 1).
    out.rho = rng.uniform(-0.9 / (p - 1), 0.8);
  }
  out.model.sigma_x = build_sigma(out.kind, p, out.rho);
  out.model.mu_x = Eigen::VectorXd::Zero(p);
  out.model.beta = draw_coefficients(p, out.peff, rng);
  out.model.delta = 0.0;
  out.model.sigma2 = 1.0;
  return out;
}

int SuiteReport::failures() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const ModelCheck& c) { return !c.passed(); }));
}

SuiteReport run_random_suite(const RandomSuiteConfig& config) {
  if (config.models < 1) throw DomainError("random suite: need at least one model");
  if (config.max_p > kOracleMaxCovariates) {
    std::ostringstream msg;
    msg << "random suite: oracle enumeration supports p <= " << kOracleMaxCovariates
        << " (got p = " << config.max_p << ")";
    throw CapabilityError(msg.str());
  }
  SuiteReport report;
  report.checks.resize(static_cast<std::size_t>(config.models));
  detail::parallel_for(report.checks.size(), config.threads, [&](std::size_t i) {
    const SuiteModel sm = random_suite_model(config.max_p, config.seed, static_cast<int>(i));
    ModelCheck& c = report.checks[i];
    c.index = static_cast<int>(i);
    c.p = sm.model.p();
    c.peff = sm.peff;
    c.kind = sm.kind;
    c.rho = sm.rho;
    c.support = ActiveSet(support_of(sm.model.beta));
    const SelectionResult pop = pc_simple_population(sm.model, config.population_zero_tol);
    c.population_selected = pop.selected;
    c.screening_set = pop.stages.front();
    c.corollary1 = verify_corollary1(sm.model, config.zero_tol);
    c.faithful = check_partial_faithfulness(sm.model, config.zero_tol).holds;
  });
  return report;
}

}  // namespace pcsimple
