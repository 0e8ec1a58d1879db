#include "pcsimple/model.hpp"

#include <cmath>
#include <sstream>

#include "pcsimple/errors.hpp"

namespace pcsimple {

namespace {

bool is_symmetric(const Eigen::MatrixXd& m) {
  return m.rows() == m.cols() && m.isApprox(m.transpose(), 1e-12);
}

}  // namespace

void Dataset::validate() const {
  if (y.size() != X.rows()) throw DataError("dataset: response length does not match rows");
  if (!names.empty() && names.size() != static_cast<std::size_t>(X.cols())) {
    throw DataError("dataset: expected one name per covariate column");
  }
  if (!X.allFinite() || !y.allFinite()) throw DataError("dataset: non-finite entries");
}

void ModelSpec::validate() const {
  const Eigen::Index p = beta.size();
  if (p < 1) throw ModelError("model: need at least one covariate");
  if (sigma_x.rows() != p || sigma_x.cols() != p || mu_x.size() != p) {
    std::ostringstream msg;
    msg << "model: dimension mismatch (beta " << p << ", mu_x " << mu_x.size() << ", sigma_x "
        << sigma_x.rows() << "x" << sigma_x.cols() << ")";
    throw ModelError(msg.str());
  }
  if (!is_symmetric(sigma_x)) throw ModelError("model: sigma_x is not symmetric");
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma_x);
  if (llt.info() != Eigen::Success) {
    throw ModelError("model: sigma_x is not strictly positive definite");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ModelError("model: residual variance must be positive");
  }
  if (!beta.allFinite() || !mu_x.allFinite() || !std::isfinite(delta)) {
    throw ModelError("model: non-finite parameters");
  }
}

std::string_view to_string(SigmaKind kind) {
  switch (kind) {
    case SigmaKind::toeplitz: return "toeplitz";
    case SigmaKind::equicorr: return "equicorr";
    case SigmaKind::identity: return "identity";
    case SigmaKind::explicit_matrix: return "explicit";
  }
  return "unknown";
}

SigmaKind parse_sigma_kind(std::string_view name) {
  if (name == "toeplitz") return SigmaKind::toeplitz;
  if (name == "equicorr") return SigmaKind::equicorr;
  if (name == "identity") return SigmaKind::identity;
  if (name == "explicit") return SigmaKind::explicit_matrix;
  throw DomainError("unknown design kind '" + std::string(name) + "'");
}

Eigen::MatrixXd build_sigma(SigmaKind kind, int p, double rho,
                            const std::optional<Eigen::MatrixXd>& explicit_sigma) {
  if (p < 1) throw DomainError("build_sigma: p must be >= 1");
  if (!std::isfinite(rho)) throw DomainError("build_sigma: rho must be finite");
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(p, p);
  switch (kind) {
    case SigmaKind::identity:
      break;
    case SigmaKind::toeplitz:
      if (!(std::abs(rho) < 1.0)) {
        throw DomainError("build_sigma: toeplitz design needs |rho| < 1");
      }
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          if (i != j) sigma(i, j) = std::pow(rho, std::abs(i - j));
        }
      }
      break;
    case SigmaKind::equicorr: {
      const double lower = p > 1 ? -1.0 / (p - 1) : -1.0;
      if (!(rho > lower && rho < 1.0)) {
        throw DomainError("build_sigma: equicorrelated design needs -1/(p-1) < rho < 1");
      }
      sigma.setConstant(rho);
      sigma.diagonal().setOnes();
      break;
    }
    case SigmaKind::explicit_matrix: {
      if (!explicit_sigma) throw DomainError("build_sigma: explicit design needs a matrix");
      sigma = *explicit_sigma;
      if (sigma.rows() != p || sigma.cols() != p) {
        throw DomainError("build_sigma: explicit matrix has the wrong size");
      }
      if (!is_symmetric(sigma) || Eigen::LLT<Eigen::MatrixXd>(sigma).info() != Eigen::Success) {
        throw DomainError("build_sigma: explicit matrix is not symmetric positive definite");
      }
      break;
    }
  }
  return sigma;
}

std::vector<int> evenly_spaced_support(int p, int peff) {
  if (peff < 1 || peff > p) {
    std::ostringstream msg;
    msg << "need 1 <= peff <= p (got peff = " << peff << ", p = " << p << ")";
    throw DomainError(msg.str());
  }
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(peff));
  if (peff == 1) {
    idx.push_back((p + 1) / 2);
    return idx;
  }
  // floor(x + 1/2) with x = (k-1)(p-1)/(peff-1), in integer arithmetic.
  const long long den = peff - 1;
  for (long long k = 0; k < peff; ++k) {
    const long long num = k * (p - 1);
    idx.push_back(1 + static_cast<int>((2 * num + den) / (2 * den)));
  }
  return idx;
}

Eigen::VectorXd draw_coefficients(int p, int peff, Rng& rng) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int j : evenly_spaced_support(p, peff)) beta(j - 1) = rng.normal();
  return beta;
}

std::vector<int> support_of(const Eigen::VectorXd& beta) {
  std::vector<int> s;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) s.push_back(static_cast<int>(j) + 1);
  }
  return s;
}

Dataset simulate_dataset(const ModelSpec& model, std::size_t n, Rng& rng) {
  if (n < 1) throw DomainError("simulate: n must be >= 1");
  const int p = model.p();
  if (model.sigma_x.rows() != p || model.mu_x.size() != p) {
    throw ModelError("simulate: dimension mismatch between beta, mu_x and sigma_x");
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(model.sigma_x);
  if (llt.info() != Eigen::Success) {
    throw ModelError("simulate: sigma_x is not positive definite (Cholesky failed)");
  }
  if (!(model.sigma2 > 0.0)) throw ModelError("simulate: residual variance must be positive");
  const Eigen::MatrixXd lower = llt.matrixL();
  const double noise_sd = std::sqrt(model.sigma2);

  Dataset data;
  const auto rows = static_cast<Eigen::Index>(n);
  data.X.resize(rows, p);
  data.y.resize(rows);
  Eigen::VectorXd z(p);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (int k = 0; k < p; ++k) z(k) = rng.normal();
    const Eigen::VectorXd x = model.mu_x + lower.triangularView<Eigen::Lower>() * z;
    data.X.row(i) = x.transpose();
    data.y(i) = model.delta + x.dot(model.beta) + noise_sd * rng.normal();
  }
  data.names.reserve(static_cast<std::size_t>(p));
  for (int k = 1; k <= p; ++k) data.names.push_back("x" + std::to_string(k));
  return data;
}

std::string_view to_string(FixtureId id) {
  switch (id) {
    case FixtureId::example1: return "example1";
    case FixtureId::example2: return "example2";
    case FixtureId::example3: return "example3";
    case FixtureId::example4: return "example4";
  }
  return "unknown";
}

FixtureId parse_fixture(std::string_view name) {
  if (name == "example1") return FixtureId::example1;
  if (name == "example2") return FixtureId::example2;
  if (name == "example3") return FixtureId::example3;
  if (name == "example4") return FixtureId::example4;
  throw DomainError("unknown fixture '" + std::string(name) + "'");
}

ModelSpec fixture(FixtureId id, Rng& rng) {
  ModelSpec m;
  switch (id) {
    case FixtureId::example1:
      // X1 = e1, X2 = X1 + e2, Y = X1 - X2 + e
      m.sigma_x.resize(2, 2);
      m.sigma_x << 1, 1,
                   1, 2;
      m.beta.resize(2);
      m.beta << 1, -1;
      break;
    case FixtureId::example2:
      // X1 = e1, X2 = X1 + e2, X3 = X1 + e3, X4 = X2 - X3 + e4, Y = X2 + e
      m.sigma_x.resize(4, 4);
      m.sigma_x << 1, 1,  1,  0,
                   1, 2,  1,  1,
                   1, 1,  2, -1,
                   0, 1, -1,  3;
      m.beta.resize(4);
      m.beta << 0, 1, 0, 0;
      break;
    case FixtureId::example3:
      // X1 = e1, X2 = X1 + e2, X3 = X1 + e3, Y = X2 - X3 + e
      m.sigma_x.resize(3, 3);
      m.sigma_x << 1, 1, 1,
                   1, 2, 1,
                   1, 1, 2;
      m.beta.resize(3);
      m.beta << 0, 1, -1;
      break;
    case FixtureId::example4: {
      constexpr double r1 = -0.4;
      constexpr double r2 = 0.2;
      m.sigma_x.resize(4, 4);
      m.sigma_x << 1,  r1, r1, r2,
                   r1, 1,  r1, r2,
                   r1, r1, 1,  r2,
                   r2, r2, r2, 1;
      m.beta.resize(4);
      for (int j = 0; j < 3; ++j) m.beta(j) = rng.normal();
      m.beta(3) = 0.0;
      break;
    }
  }
  m.mu_x = Eigen::VectorXd::Zero(m.beta.size());
  m.delta = 0.0;
  m.sigma2 = 1.0;
  return m;
}

ModelSpec fixture(FixtureId id) {
  Rng rng(0);
  return fixture(id, rng);
}

}  // namespace pcsimple
