#include "cli.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#ifdef PCSIMPLE_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "pcsimple/pcsimple.hpp"

namespace pcsimple::cli {

namespace {

struct VerificationFailure : Error {
  using Error::Error;
};

struct SimulateOptions {
  int p = 19;
  int peff = 3;
  std::size_t n = 100;
  double rho = 0.0;
  std::string design = "toeplitz";
  double sigma2 = 1.0;
  std::optional<std::uint64_t> seed;
  std::string fixture;
  std::string out = "data.csv";
  std::string truth = "truth.json";
  std::string model_out;
};

struct SelectCmdOptions {
  std::string data;
  std::string response = "y";
  double alpha = kDefaultAlpha;
  std::optional<int> max_order;
  std::string out;
  std::string trace;
  bool population = false;
  std::string model;
  std::string fixture;
  double zero_tol = kPopulationZeroTolerance;
  int threads = 1;
};

struct RocOptions {
  int p = 19;
  int peff = 3;
  std::size_t n = 100;
  double rho = 0.0;
  std::string design = "toeplitz";
  double sigma2 = 1.0;
  std::vector<double> alphas{0.001, 0.01, 0.05, 0.15};
  int replicates = 50;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = "roc.csv";
};

struct VerifyOptions {
  bool fixtures = false;
  bool random = false;
  int models = 100;
  int p = 6;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double zero_tol = kOracleZeroTolerance;
  std::string out;
};

struct EvalOptions {
  std::string result;
  std::string truth;
  std::string data;
  std::string response = "y";
  std::string model;
  std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

Dataset load_dataset(const std::string& path, const std::string& response) {
  std::istringstream in(io::read_file(path));
  return io::read_dataset_csv(in, response);
}

int run_simulate(const SimulateOptions& o, std::ostream& out) {
  if (!o.seed) throw DomainError("simulate: --seed is required");
  if (o.n < 1) throw DomainError("simulate: --n must be >= 1");
  Rng rng(*o.seed);
  ModelSpec model;
  TruthRecord truth;
  truth.seed = *o.seed;
  if (!o.fixture.empty()) {
    model = fixture(parse_fixture(o.fixture), rng);
    truth.sigma_kind = std::string(to_string(SigmaKind::explicit_matrix));
    truth.fixture = o.fixture;
    truth.rho = 0.0;
  } else {
    const SigmaKind kind = parse_sigma_kind(o.design);
    if (kind == SigmaKind::explicit_matrix) {
      throw DomainError("simulate: explicit designs are only available through --fixture");
    }
    model.sigma_x = build_sigma(kind, o.p, o.rho);
    model.mu_x = Eigen::VectorXd::Zero(o.p);
    model.beta = draw_coefficients(o.p, o.peff, rng);
    model.delta = 0.0;
    model.sigma2 = o.sigma2;
    truth.sigma_kind = std::string(to_string(kind));
    truth.rho = o.rho;
  }
  model.validate();
  const Dataset data = simulate_dataset(model, o.n, rng);

  truth.p = model.p();
  truth.beta = model.beta;
  truth.support = support_of(model.beta);
  truth.peff = static_cast<int>(truth.support.size());
  truth.sigma2 = model.sigma2;
  truth.delta = model.delta;

  std::ostringstream csv;
  io::write_dataset_csv(csv, data);
  io::write_file(o.out, csv.str());
  io::write_file(o.truth, io::truth_to_json(truth));
  if (!o.model_out.empty()) io::write_file(o.model_out, io::model_to_json(model));
  out << "wrote " << o.n << " rows x " << model.p() << " covariates to " << o.out << "\n";
  return kExitOk;
}

int run_select(const SelectCmdOptions& o, std::ostream& out) {
  if (o.max_order && *o.max_order < 1) throw DomainError("select: --max-order must be >= 1");
  SelectionResult result;
  std::vector<std::string> names;
  std::string mode;
  if (o.population) {
    ModelSpec model;
    if (!o.model.empty()) {
      model = io::model_from_json(io::read_file(o.model));
    } else if (!o.fixture.empty()) {
      model = fixture(parse_fixture(o.fixture));
    } else {
      throw DomainError("select: --population needs --model or --fixture");
    }
    result = pc_simple_population(model, o.zero_tol, o.max_order);
    for (int k = 1; k <= model.p(); ++k) names.push_back("x" + std::to_string(k));
    mode = "population";
  } else {
    if (o.data.empty()) throw DomainError("select: --data is required");
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw DomainError("select: --alpha must be in (0, 1)");
    const Dataset data = load_dataset(o.data, o.response);
    const SufficientStats stats = correlation_matrix(data);
    SelectOptions options;
    options.max_order = o.max_order;
    options.threads = o.threads;
    options.record_trace = !o.trace.empty();
    result = pc_simple_select(stats, o.alpha, options);
    names = stats.names();
    mode = "sample";
  }
  emit(o.out, io::selection_to_json(result, names, mode), out);
  if (!o.trace.empty()) io::write_file(o.trace, io::trace_to_json(result));
  return kExitOk;
}

int run_roc(const RocOptions& o, std::ostream& out) {
  if (!o.seed) throw DomainError("roc: --seed is required");
  if (o.threads < 1) throw DomainError("roc: --threads must be >= 1");
  SimulationConfig config;
  config.p = o.p;
  config.peff = o.peff;
  config.n = o.n;
  config.kind = parse_sigma_kind(o.design);
  config.rho = o.rho;
  config.sigma2 = o.sigma2;
  const RocTable table = roc_sweep(config, o.alphas, o.replicates, *o.seed, o.threads);
  std::ostringstream csv;
  io::write_roc_csv(csv, table);
  io::write_file(o.out, csv.str());
  out << "wrote " << table.rows.size() << " ROC rows to " << o.out << "\n";
  return kExitOk;
}

struct FixtureExpectation {
  FixtureId id;
  bool faithful;
  ActiveSet selected;
  int m_reach;
};

int run_verify(const VerifyOptions& o, std::ostream& out) {
  if (o.fixtures == o.random) throw DomainError("verify: choose exactly one of --fixtures, --random");
  if (o.threads < 1) throw DomainError("verify: --threads must be >= 1");
  bool ok = true;
  std::string report;
  if (o.fixtures) {
    const FixtureExpectation expected[] = {
        {FixtureId::example1, false, ActiveSet{2}, 1},
        {FixtureId::example2, true, ActiveSet{2}, 2},
        {FixtureId::example3, true, ActiveSet{2, 3}, 2},
    };
    std::ostringstream text;
    for (const auto& e : expected) {
      const ModelSpec model = fixture(e.id);
      const FaithfulnessReport f = check_partial_faithfulness(model, o.zero_tol);
      const bool c1 = verify_corollary1(model, o.zero_tol);
      const SelectionResult r = pc_simple_population(model);
      const ActiveSet support(support_of(model.beta));
      const bool pass = f.holds == e.faithful && c1 == e.faithful && r.selected == e.selected &&
                        r.m_reach == e.m_reach;
      ok = ok && pass;
      text << to_string(e.id) << ": partially_faithful=" << (f.holds ? "yes" : "no")
           << " violations=" << f.violations.size() << " corollary1=" << (c1 ? "yes" : "no")
           << " selected={";
      for (std::size_t i = 0; i < r.selected.size(); ++i) {
        text << (i ? "," : "") << r.selected.members()[i];
      }
      text << "} m_reach=" << r.m_reach << " support={";
      for (std::size_t i = 0; i < support.size(); ++i) {
        text << (i ? "," : "") << support.members()[i];
      }
      text << "} " << (pass ? "as-expected" : "UNEXPECTED") << "\n";
    }
    report = text.str();
    out << report;
  } else {
    if (!o.seed) throw DomainError("verify: --random requires --seed");
    RandomSuiteConfig config;
    config.models = o.models;
    config.max_p = o.p;
    config.seed = *o.seed;
    config.threads = o.threads;
    config.zero_tol = o.zero_tol;
    const SuiteReport suite = run_random_suite(config);
    ok = suite.failures() == 0;
    report = io::suite_report_to_json(suite);
    out << "random suite: " << suite.checks.size() << " models, " << suite.failures()
        << " failures\n";
  }
  if (!o.out.empty()) io::write_file(o.out, report);
  if (!ok) throw VerificationFailure("verify: at least one check failed");
  return kExitOk;
}

int run_eval(const EvalOptions& o, std::ostream& out) {
  const ActiveSet selected = io::selected_from_json(io::read_file(o.result));
  const TruthRecord truth = io::truth_from_json(io::read_file(o.truth));
  Metrics metrics;
  metrics.rates = confusion(selected, ActiveSet(truth.support), truth.p);

  if (!o.data.empty()) {
    const Dataset data = load_dataset(o.data, o.response);
    if (data.X.cols() != truth.p) throw DataError("eval: data and truth disagree on p");
    std::optional<ModelSpec> model;
    if (!o.model.empty()) {
      model = io::model_from_json(io::read_file(o.model));
    } else if (!truth.fixture.empty()) {
      Rng rng(truth.seed);
      model = fixture(parse_fixture(truth.fixture), rng);
    } else if (truth.sigma_kind != to_string(SigmaKind::explicit_matrix)) {
      ModelSpec m;
      m.sigma_x = build_sigma(parse_sigma_kind(truth.sigma_kind), truth.p, truth.rho);
      model = m;
    }
    if (model) {
      model->beta = truth.beta;
      if (model->mu_x.size() != truth.p) model->mu_x = Eigen::VectorXd::Zero(truth.p);
      metrics.mse = mse_measures(ols_refit(data, selected), *model);
    }
  }
  emit(o.out, io::metrics_to_json(metrics), out);
  return kExitOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const VerificationFailure*>(&e)) return kExitVerification;
  if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const RefitError*>(&e)) return kExitData;
  if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const CapabilityError*>(&e) ||
      dynamic_cast<const ModelError*>(&e)) {
    return kExitUsage;
  }
  return kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PC-simple variable selection for high-dimensional linear models", "pcsimple"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a Gaussian linear model dataset");
  simulate->add_option("--p", sim.p, "Number of covariates");
  simulate->add_option("--peff", sim.peff, "Number of nonzero coefficients");
  simulate->add_option("--n", sim.n, "Sample size");
  simulate->add_option("--rho", sim.rho, "Design correlation parameter");
  simulate->add_option("--design", sim.design, "toeplitz | equicorr | identity");
  simulate->add_option("--sigma2", sim.sigma2, "Residual variance");
  simulate->add_option("--seed", sim.seed, "Random seed");
  simulate->add_option("--fixture", sim.fixture, "example1 | example2 | example3 | example4");
  simulate->add_option("--out", sim.out, "Dataset CSV path");
  simulate->add_option("--truth", sim.truth, "Truth JSON path");
  simulate->add_option("--model-out", sim.model_out, "Optional model JSON path");

  SelectCmdOptions sel;
  auto* select = app.add_subcommand("select", "Run PC-simple on a dataset or a population model");
  select->add_option("--data", sel.data, "Input CSV");
  select->add_option("--response", sel.response, "Response column name");
  select->add_option("--alpha", sel.alpha, "Significance level");
  select->add_option("--max-order", sel.max_order, "Stop after this stage");
  select->add_option("--out", sel.out, "Result JSON path (stdout if omitted)");
  select->add_option("--trace", sel.trace, "Trace JSON path");
  select->add_flag("--population", sel.population, "Use exact population partial correlations");
  select->add_option("--model", sel.model, "Model JSON (population mode)");
  select->add_option("--fixture", sel.fixture, "Built-in model (population mode)");
  select->add_option("--zero-tol", sel.zero_tol, "Population zero tolerance");
  select->add_option("--threads", sel.threads, "Worker threads");

  RocOptions roc;
  auto* roc_cmd = app.add_subcommand("roc", "ROC sweep over an alpha grid");
  roc_cmd->add_option("--p", roc.p, "Number of covariates");
  roc_cmd->add_option("--peff", roc.peff, "Number of nonzero coefficients");
  roc_cmd->add_option("--n", roc.n, "Sample size");
  roc_cmd->add_option("--rho", roc.rho, "Design correlation parameter");
  roc_cmd->add_option("--design", roc.design, "toeplitz | equicorr | identity");
  roc_cmd->add_option("--sigma2", roc.sigma2, "Residual variance");
  roc_cmd->add_option("--alphas", roc.alphas, "Comma-separated alpha grid")->delimiter(',');
  roc_cmd->add_option("--replicates", roc.replicates, "Number of replicates");
  roc_cmd->add_option("--seed", roc.seed, "Random seed");
  roc_cmd->add_option("--threads", roc.threads, "Worker threads");
  roc_cmd->add_option("--out", roc.out, "ROC CSV path");

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Brute-force oracle checks");
  verify->add_flag("--fixtures", ver.fixtures, "Check the worked example fixtures");
  verify->add_flag("--random", ver.random, "Check a seeded random-model suite");
  verify->add_option("--models", ver.models, "Number of random models");
  verify->add_option("--p", ver.p, "Largest number of covariates per random model");
  verify->add_option("--seed", ver.seed, "Random seed");
  verify->add_option("--threads", ver.threads, "Worker threads");
  verify->add_option("--zero-tol", ver.zero_tol, "Tolerance for population zeros");
  verify->add_option("--out", ver.out, "Report path");

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Selection metrics from result and truth files");
  eval->add_option("--result", ev.result, "Result JSON from select")->required();
  eval->add_option("--truth", ev.truth, "Truth JSON from simulate")->required();
  eval->add_option("--data", ev.data, "Dataset CSV for the OLS refit");
  eval->add_option("--response", ev.response, "Response column name");
  eval->add_option("--model", ev.model, "Model JSON supplying Sigma_X");
  eval->add_option("--out", ev.out, "Metrics JSON path (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim, out);
    if (*select) return run_select(sel, out);
    if (*roc_cmd) return run_roc(roc, out);
    if (*verify) return run_verify(ver, out);
    if (*eval) return run_eval(ev, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace pcsimple::cli
