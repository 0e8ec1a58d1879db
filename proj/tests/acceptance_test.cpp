// Acceptance suite. One PASS/FAIL line per criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pcsimple/pcsimple.hpp"
#include "test_support.hpp"

namespace {

using namespace pcsimple;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict population_fixtures() {
  Verdict v;
  const auto t0 = Clock::now();
  const SelectionResult e2 = pc_simple_population(fixture(FixtureId::example2));
  const SelectionResult e3 = pc_simple_population(fixture(FixtureId::example3));
  const SelectionResult e1 = pc_simple_population(fixture(FixtureId::example1));
  const double dt = seconds_since(t0);
  v.require(e2.selected == ActiveSet{2} && e2.m_reach == 2, "example2");
  v.require(e3.selected == (ActiveSet{2, 3}) && e3.m_reach == 2, "example3");
  v.require(e1.selected == ActiveSet{2} && e1.m_reach == 1, "example1");
  v.require(dt < 1.0, "runtime " + fmt("%.3f s", dt));
  if (v.pass) v.detail = fmt("%.4f s", dt);
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240917);
  double worst_paths = 0.0, worst_oracle = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int d = 3 + static_cast<int>(gen() % 5);  // Y plus 2..6 covariates
    const Eigen::MatrixXd c = testing::random_correlation(d, gen);
    std::vector<int> pool;
    for (int k = 2; k < d; ++k) pool.push_back(k);
    std::shuffle(pool.begin(), pool.end(), gen);
    const auto s_size = std::min<std::size_t>(pool.size(), gen() % 4);
    const std::vector<int> s(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s_size));
    const auto a = partial_correlation(c, 0, 1, s);
    const auto b = partial_correlation_recursive(c, 0, 1, s);
    if (!a || !b) {
      v.require(false, "non-informative on a well-conditioned instance");
      break;
    }
    worst_paths = std::max(worst_paths, std::abs(*a - *b));

    const SuiteModel sm = random_suite_model(6, 99, t);
    const int p = sm.model.p();
    const Eigen::MatrixXd pc = covariance_to_correlation(joint_covariance(sm.model));
    std::vector<int> others;
    const int j = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(p));
    for (int k = 1; k <= p; ++k) {
      if (k != j) others.push_back(k);
    }
    std::shuffle(others.begin(), others.end(), gen);
    others.resize(std::min<std::size_t>(others.size(), gen() % 4));
    std::sort(others.begin(), others.end());
    const double truth = population_partial_correlation(sm.model, j, others);
    const auto pa = partial_correlation(pc, 0, j, others);
    const auto pb = partial_correlation_recursive(pc, 0, j, others);
    if (!pa || !pb) {
      v.require(false, "non-informative on a population matrix");
      break;
    }
    worst_oracle = std::max({worst_oracle, std::abs(*pa - truth), std::abs(*pb - truth)});
  }
  const double dt = seconds_since(t0);
  v.require(worst_paths <= 1e-8, "paths differ by " + fmt("%.3g", worst_paths));
  v.require(worst_oracle <= 1e-10, "oracle differs by " + fmt("%.3g", worst_oracle));
  v.require(dt < 10.0, "runtime " + fmt("%.3f s", dt));
  if (v.pass) {
    v.detail = "max path gap " + fmt("%.2g", worst_paths) + ", max oracle gap " +
               fmt("%.2g", worst_oracle) + ", " + fmt("%.3f s", dt);
  }
  return v;
}

SuiteReport hundred_model_suite() {
  RandomSuiteConfig cfg;
  cfg.models = 100;
  cfg.max_p = 6;
  cfg.seed = 7;
  return run_random_suite(cfg);
}

Verdict random_suite() {
  Verdict v;
  const auto t0 = Clock::now();
  const SuiteReport report = hundred_model_suite();
  const double dt = seconds_since(t0);
  int bad = 0;
  for (const auto& c : report.checks) {
    if (!(c.corollary1 && c.population_selected == c.support)) ++bad;
  }
  v.require(report.checks.size() == 100, "suite size");
  v.require(bad == 0, std::to_string(bad) + " models failed");
  v.require(dt < 30.0, "runtime " + fmt("%.3f s", dt));
  if (v.pass) v.detail = "100/100 models, " + fmt("%.3f s", dt);
  return v;
}

SimulationConfig low_dim_large_n() {
  SimulationConfig c;
  c.p = 19;
  c.peff = 3;
  c.n = 2000;
  c.kind = SigmaKind::toeplitz;
  c.rho = 0.0;
  return c;
}

constexpr std::uint64_t kSampleSeed = 2024;

const std::vector<ReplicateOutcome>& low_dim_replicates() {
  static const std::vector<ReplicateOutcome> cache = [] {
    const double alpha[] = {0.05};
    std::vector<ReplicateOutcome> out;
    for (int r = 0; r < 100; ++r) out.push_back(run_replicate(low_dim_large_n(), alpha, kSampleSeed, r));
    return out;
  }();
  return cache;
}

Verdict screening_superset() {
  Verdict v;
  const SuiteReport report = hundred_model_suite();
  int population_ok = 0;
  for (const auto& c : report.checks) population_ok += c.support.is_subset_of(c.screening_set);
  int sample_ok = 0;
  for (const auto& r : low_dim_replicates()) {
    sample_ok += r.truth.is_subset_of(r.per_alpha.front().screening);
  }
  v.require(population_ok == 100, "population " + std::to_string(population_ok) + "/100");
  v.require(sample_ok >= 95, "sample " + std::to_string(sample_ok) + "/100, need >= 95");
  if (v.pass) v.detail = "population 100/100, sample " + std::to_string(sample_ok) + "/100";
  return v;
}

Verdict desk_consistency() {
  Verdict v;
  int exact = 0;
  for (const auto& r : low_dim_replicates()) exact += r.per_alpha.front().selected == r.truth;
  v.require(exact >= 90, "exact recovery " + std::to_string(exact) + "/100, need >= 90");
  if (v.pass) v.detail = "exact recovery " + std::to_string(exact) + "/100";
  return v;
}

Verdict scale_feasibility() {
  Verdict v;
  const std::vector<double> alphas = {0.001, 0.01, 0.05, 0.15};
  testing::TempDir dir;
  const auto t0 = Clock::now();
  int checked = 0;
  for (double rho : {0.0, 0.3, 0.6}) {
    SimulationConfig cfg;
    cfg.p = 499;
    cfg.peff = 10;
    cfg.n = 100;
    cfg.rho = rho;
    std::vector<ReplicateOutcome> outcomes;
    for (int r = 0; r < 20; ++r) outcomes.push_back(run_replicate(cfg, alphas, 11, r));
    for (const auto& o : outcomes) {
      for (const auto& a : o.per_alpha) {
        ++checked;
        const double tpr = static_cast<double>(a.true_positives) / cfg.peff;
        const double fpr = static_cast<double>(a.false_positives) / (cfg.p - cfg.peff);
        if (!a.nested) v.require(false, "nesting violated at rho " + fmt("%g", rho));
        if (!(tpr > fpr)) {
          v.require(false, "below diagonal at rho " + fmt("%g", rho) + " alpha " + fmt("%g", a.alpha) +
                               " replicate " + std::to_string(o.replicate));
        }
      }
    }
    const RocTable table = aggregate_roc(outcomes, cfg.p, cfg.peff);
    for (const auto& row : table.rows) {
      v.require(row.mean_tpr > row.mean_fpr, "mean ROC below diagonal at rho " + fmt("%g", rho));
    }
    // the roc command on the same setting must reproduce the table
    const std::string path = dir.file("roc.csv");
    std::ostringstream out, err;
    const int code = cli::run({"roc", "--p", "499", "--peff", "10", "--n", "100", "--rho",
                               fmt("%g", rho), "--replicates", "20", "--seed", "11", "--out", path},
                              out, err);
    std::ostringstream expected;
    io::write_roc_csv(expected, table);
    v.require(code == 0 && testing::slurp(path) == expected.str(),
              "roc command disagrees at rho " + fmt("%g", rho) + " " + err.str());
  }
  const double dt = seconds_since(t0);
  v.require(dt < 300.0, "runtime " + fmt("%.1f s", dt));
  if (v.pass) v.detail = std::to_string(checked) + " replicate-alpha points, " + fmt("%.2f s", dt);
  return v;
}

Verdict numeric_primitives() {
  Verdict v;
  const double q = standard_normal_quantile(0.975);
  const double z = fisher_z(0.5);
  v.require(std::abs(q - 1.9599640) <= 1e-6, "quantile " + fmt("%.10f", q));
  v.require(std::abs(z - 0.5493061) <= 1e-6, "fisher_z " + fmt("%.10f", z));
  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    // log-spaced toward both tails, linear in the middle
    const double t = k / 2000.0;
    const double tail = std::pow(10.0, -8.0 + 7.7 * t);
    for (double p : {tail, 1.0 - tail, 1e-8 + t * (1.0 - 2e-8)}) {
      worst = std::max(worst, std::abs(standard_normal_cdf(standard_normal_quantile(p)) - p));
    }
  }
  v.require(worst <= 1e-10, "round trip " + fmt("%.3g", worst));
  if (v.pass) v.detail = "round-trip max " + fmt("%.2g", worst);
  return v;
}

int cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Verdict determinism() {
  Verdict v;
  testing::TempDir dir;
  auto f = [&](const std::string& name) { return dir.file(name); };
  const std::vector<std::string> threads = {"1", "2", "8"};

  // simulate has no worker threads; repeat it once per thread count instead
  std::vector<std::string> sims;
  for (std::size_t i = 0; i < threads.size(); ++i) {
    const std::string tag = "sim" + std::to_string(i);
    v.require(cli_run({"simulate", "--p", "60", "--peff", "5", "--n", "120", "--rho", "0.3",
                       "--seed", "17", "--out", f(tag + ".csv"), "--truth", f(tag + ".json"),
                       "--model-out", f(tag + ".model.json")}) == 0,
              "simulate failed");
    sims.push_back(testing::slurp(f(tag + ".csv")) + testing::slurp(f(tag + ".json")) +
                   testing::slurp(f(tag + ".model.json")));
  }
  for (const auto& s : sims) v.require(s == sims.front(), "simulate output differs");

  std::vector<std::string> sel, roc, ver, ev;
  for (const auto& t : threads) {
    v.require(cli_run({"select", "--data", f("sim0.csv"), "--threads", t, "--out",
                       f("sel" + t + ".json"), "--trace", f("trace" + t + ".json")}) == 0,
              "select failed");
    sel.push_back(testing::slurp(f("sel" + t + ".json")) + testing::slurp(f("trace" + t + ".json")));

    v.require(cli_run({"select", "--population", "--model", f("sim0.model.json"), "--threads", t,
                       "--out", f("pop" + t + ".json")}) == 0,
              "population select failed");
    sel.back() += testing::slurp(f("pop" + t + ".json"));

    v.require(cli_run({"roc", "--p", "40", "--peff", "4", "--n", "80", "--rho", "0.5",
                       "--replicates", "12", "--seed", "3", "--threads", t, "--out",
                       f("roc" + t + ".csv")}) == 0,
              "roc failed");
    roc.push_back(testing::slurp(f("roc" + t + ".csv")));

    v.require(cli_run({"verify", "--random", "--models", "30", "--seed", "5", "--threads", t,
                       "--out", f("ver" + t + ".json")}) == 0,
              "verify failed");
    ver.push_back(testing::slurp(f("ver" + t + ".json")));

    v.require(cli_run({"eval", "--result", f("sel" + t + ".json"), "--truth", f("sim0.json"),
                       "--data", f("sim0.csv"), "--out", f("ev" + t + ".json")}) == 0,
              "eval failed");
    ev.push_back(testing::slurp(f("ev" + t + ".json")));
  }
  for (auto* group : {&sel, &roc, &ver, &ev}) {
    for (const auto& s : *group) v.require(s == group->front() && !s.empty(), "output differs");
  }
  if (v.pass) v.detail = "simulate/select/roc/verify/eval identical for threads 1,2,8";
  return v;
}

Verdict metric_correctness() {
  Verdict v;
  const Rates a = confusion(ActiveSet{2}, ActiveSet{2}, 4);
  const Rates b = confusion(ActiveSet{1, 2}, ActiveSet{2}, 3);
  const Rates c = confusion(ActiveSet{}, ActiveSet{1}, 3);
  v.require(*a.tpr == 1.0 && *a.fpr == 0.0, "confusion example 1");
  v.require(*b.tpr == 1.0 && *b.fpr == 0.5, "confusion example 2");
  v.require(*c.tpr == 0.0 && *c.fpr == 0.0, "confusion example 3");

  ModelSpec m;
  m.sigma_x = Eigen::MatrixXd::Identity(2, 2);
  m.mu_x = Eigen::VectorXd::Zero(2);
  m.beta = Eigen::Vector2d(0.7, -0.2);
  const MseMeasures same = mse_measures(m.beta, m);
  v.require(same.mse_coeff == 0.0 && same.mse_pred == 0.0, "mse at truth");
  const Eigen::VectorXd shifted = m.beta + Eigen::VectorXd::Unit(2, 0);
  const MseMeasures id = mse_measures(shifted, m);
  v.require(std::abs(id.mse_coeff - 1.0) <= 1e-15 && std::abs(id.mse_pred - 1.0) <= 1e-15,
            "mse identity");
  m.sigma_x = build_sigma(SigmaKind::toeplitz, 2, 0.5);
  const MseMeasures tp = mse_measures(shifted, m);
  v.require(std::abs(tp.mse_coeff - 1.0) <= 1e-15 && std::abs(tp.mse_pred - 1.0) <= 1e-15,
            "mse toeplitz");

  Rng rng(404);
  int bound_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const int p = rng.uniform_int(2, 10);
    ModelSpec r;
    r.sigma_x = t % 2 ? build_sigma(SigmaKind::toeplitz, p, rng.uniform(-0.9, 0.9))
                      : build_sigma(SigmaKind::equicorr, p, rng.uniform(-0.9 / (p - 1), 0.9));
    r.mu_x = Eigen::VectorXd::Zero(p);
    r.beta = draw_coefficients(p, rng.uniform_int(1, p), rng);
    Eigen::VectorXd est(p);
    for (int j = 0; j < p; ++j) est(j) = rng.normal();
    const MseMeasures q = mse_measures(est, r);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.sigma_x);
    const double lo = es.eigenvalues().minCoeff() * q.mse_coeff;
    const double hi = es.eigenvalues().maxCoeff() * q.mse_coeff;
    if (q.mse_pred < lo * (1 - 1e-12) || q.mse_pred > hi * (1 + 1e-12)) ++bound_failures;
  }
  v.require(bound_failures == 0, std::to_string(bound_failures) + " eigenvalue-bound failures");
  if (v.pass) v.detail = "examples exact, 100/100 eigenvalue bounds";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 population fixtures", population_fixtures},
      {"2 oracle equivalence", oracle_equivalence},
      {"3 random model suite", random_suite},
      {"4 screening superset", screening_superset},
      {"5 desk-scale consistency", desk_consistency},
      {"6 high-dimensional scale", scale_feasibility},
      {"7 numeric primitives", numeric_primitives},
      {"8 determinism", determinism},
      {"9 metric correctness", metric_correctness},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << " (" << v.detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
