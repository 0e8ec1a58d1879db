#include "pcsimple/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "pcsimple/detail/parallel.hpp"
#include "pcsimple/errors.hpp"

namespace pcsimple {

namespace {

void check_members(const ActiveSet& s, int p, const char* what) {
  if (!s.empty() && s.members().back() > p) {
    std::ostringstream msg;
    msg << what << " contains index " << s.members().back() << " beyond p = " << p;
    throw DomainError(msg.str());
  }
}

int count_in(const ActiveSet& selected, const ActiveSet& truth) {
  return static_cast<int>(std::count_if(selected.begin(), selected.end(),
                                         [&](int j) { return truth.contains(j); }));
}

bool is_nested(const std::vector<ActiveSet>& stages) {
  for (std::size_t m = 1; m < stages.size(); ++m) {
    if (!stages[m].is_subset_of(stages[m - 1])) return false;
  }
  return true;
}

// Mean and sample standard deviation of count/denominator from integer sums.
std::pair<double, double> rate_moments(long long sum, long long sum_sq, long long reps,
                                       long long denominator) {
  const double d = static_cast<double>(denominator);
  const double mean = static_cast<double>(sum) / (static_cast<double>(reps) * d);
  if (reps < 2) return {mean, 0.0};
  const long long numer = reps * sum_sq - sum * sum;
  const double var = static_cast<double>(numer) / (static_cast<double>(reps * (reps - 1)) * d * d);
  return {mean, std::sqrt(std::max(var, 0.0))};
}

void check_alpha_grid(std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("alpha grid is empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) {
      throw DomainError("alpha grid values must lie in (0, 1)");
    }
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw DomainError("alpha grid must be strictly increasing");
    }
  }
}

}  // namespace

Rates confusion(const ActiveSet& selected, const ActiveSet& truth, int p) {
  if (p < 1) throw DomainError("confusion: p must be >= 1");
  check_members(selected, p, "selected set");
  check_members(truth, p, "true support");
  Rates r;
  const int tp = count_in(selected, truth);
  const int fp = static_cast<int>(selected.size()) - tp;
  const int positives = static_cast<int>(truth.size());
  if (positives > 0) r.tpr = static_cast<double>(tp) / positives;
  if (positives < p) r.fpr = static_cast<double>(fp) / (p - positives);
  return r;
}

MseMeasures mse_measures(const Eigen::VectorXd& beta_hat, const ModelSpec& model) {
  if (beta_hat.size() != model.beta.size() || model.sigma_x.rows() != beta_hat.size() ||
      model.sigma_x.cols() != beta_hat.size()) {
    throw DomainError("mse: dimension mismatch between estimate and model");
  }
  const Eigen::VectorXd diff = beta_hat - model.beta;
  return {diff.squaredNorm(), diff.dot(model.sigma_x * diff)};
}

Eigen::VectorXd ols_refit(const Dataset& data, const ActiveSet& selected) {
  const Eigen::Index n = data.X.rows();
  const auto p = static_cast<int>(data.X.cols());
  check_members(selected, p, "selected set");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  if (selected.empty()) return beta;

  const auto k = static_cast<Eigen::Index>(selected.size());
  if (k >= n) {
    std::ostringstream msg;
    msg << "refit: " << k << " selected columns but only " << n << " rows";
    throw RefitError(msg.str());
  }
  Eigen::MatrixXd design(n, k + 1);
  design.col(0).setOnes();
  for (Eigen::Index c = 0; c < k; ++c) design.col(c + 1) = data.X.col(selected.members()[c] - 1);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k + 1) {
    // Columns the pivoting pushed past the numerical rank.
    std::ostringstream msg;
    msg << "refit: design on the selected columns is rank deficient (offending:";
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index r = qr.rank(); r < k + 1; ++r) {
      const Eigen::Index c = perm(r);
      if (c == 0) {
        msg << " intercept";
      } else {
        const auto j = selected.members()[c - 1];
        const auto idx = static_cast<std::size_t>(j - 1);
        msg << " " << (idx < data.names.size() ? data.names[idx] : "x" + std::to_string(j));
      }
    }
    msg << ")";
    throw RefitError(msg.str());
  }
  const Eigen::VectorXd coef = qr.solve(data.y);
  for (Eigen::Index c = 0; c < k; ++c) beta(selected.members()[c] - 1) = coef(c + 1);
  return beta;
}

void SimulationConfig::validate() const {
  if (p < 2) throw DomainError("simulation: p must be >= 2");
  if (peff < 1 || peff >= p) throw DomainError("simulation: need 1 <= peff < p");
  if (n < 4) throw DomainError("simulation: n must be >= 4");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw DomainError("simulation: sigma2 must be positive");
  }
  if (kind == SigmaKind::explicit_matrix) {
    throw DomainError("simulation: explicit designs are not supported by the ROC harness");
  }
  build_sigma(kind, p, rho);  // range checks for rho
}

ReplicateOutcome run_replicate(const SimulationConfig& config, std::span<const double> alphas,
                               std::uint64_t seed, int replicate) {
  check_alpha_grid(alphas);
  Rng rng(split_seed(seed, static_cast<std::uint64_t>(replicate)));
  ModelSpec model;
  model.sigma_x = build_sigma(config.kind, config.p, config.rho);
  model.mu_x = Eigen::VectorXd::Zero(config.p);
  model.beta = draw_coefficients(config.p, config.peff, rng);
  model.delta = config.delta;
  model.sigma2 = config.sigma2;
  const Dataset data = simulate_dataset(model, config.n, rng);
  const SufficientStats stats = correlation_matrix(data);

  ReplicateOutcome out;
  out.replicate = replicate;
  out.beta = model.beta;
  out.truth = ActiveSet(support_of(model.beta));
  SelectOptions options;
  options.record_trace = false;
  for (double alpha : alphas) {
    const SelectionResult r = pc_simple_select(stats, alpha, options);
    AlphaOutcome a;
    a.alpha = alpha;
    a.selected = r.selected;
    a.screening = r.stages.front();
    a.m_reach = r.m_reach;
    a.nested = is_nested(r.stages);
    a.true_positives = count_in(r.selected, out.truth);
    a.false_positives = static_cast<int>(r.selected.size()) - a.true_positives;
    out.per_alpha.push_back(std::move(a));
  }
  return out;
}

RocTable aggregate_roc(std::span<const ReplicateOutcome> outcomes, int p, int peff) {
  if (outcomes.empty()) throw DomainError("roc: no replicates to aggregate");
  const std::size_t n_alpha = outcomes.front().per_alpha.size();
  RocTable table;
  for (std::size_t a = 0; a < n_alpha; ++a) {
    long long tp = 0, tp_sq = 0, fp = 0, fp_sq = 0;
    for (const auto& o : outcomes) {
      if (o.per_alpha.size() != n_alpha) throw DomainError("roc: inconsistent alpha grids");
      const long long t = o.per_alpha[a].true_positives;
      const long long f = o.per_alpha[a].false_positives;
      tp += t;
      tp_sq += t * t;
      fp += f;
      fp_sq += f * f;
    }
    const auto reps = static_cast<long long>(outcomes.size());
    RocRow row;
    row.alpha = outcomes.front().per_alpha[a].alpha;
    std::tie(row.mean_tpr, row.sd_tpr) = rate_moments(tp, tp_sq, reps, peff);
    std::tie(row.mean_fpr, row.sd_fpr) = rate_moments(fp, fp_sq, reps, p - peff);
    row.replicates = static_cast<int>(reps);
    table.rows.push_back(row);
  }
  return table;
}

RocTable roc_sweep(const SimulationConfig& config, std::span<const double> alphas, int replicates,
                   std::uint64_t seed, int threads) {
  config.validate();
  check_alpha_grid(alphas);
  if (replicates < 1) throw DomainError("roc: replicates must be >= 1");
  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(replicates));
  detail::parallel_for(outcomes.size(), threads, [&](std::size_t r) {
    outcomes[r] = run_replicate(config, alphas, seed, static_cast<int>(r));
  });
  return aggregate_roc(outcomes, config.p, config.peff);
}

}  // namespace pcsimple
