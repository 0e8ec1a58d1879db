#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pcsimple/errors.hpp"
#include "pcsimple/io.hpp"
#include "pcsimple/model.hpp"
#include "pcsimple/stats.hpp"

namespace pcsimple {
namespace {

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

TEST(Rng, SplitMixReferenceOutput) {
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(split_seed(1, 0), split_seed(1, 1));
  EXPECT_NE(split_seed(1, 0), split_seed(2, 0));
}

TEST(Rng, UniformStaysInOpenInterval) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const int k = rng.uniform_int(2, 6);
    ASSERT_GE(k, 2);
    ASSERT_LE(k, 6);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(1);
  double sum = 0, sum_sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.01);
}

TEST(BuildSigma, ToeplitzP3) {
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0.5, 0.25,
              0.5, 1, 0.5,
              0.25, 0.5, 1;
  EXPECT_EQ(build_sigma(SigmaKind::toeplitz, 3, 0.5), expected);
}

TEST(BuildSigma, ZeroRhoIsIdentity) {
  EXPECT_EQ(build_sigma(SigmaKind::toeplitz, 4, 0.0), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(build_sigma(SigmaKind::equicorr, 4, 0.0), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(build_sigma(SigmaKind::identity, 4, 0.7), Eigen::MatrixXd::Identity(4, 4));
}

TEST(BuildSigma, EquicorrSmallestEigenvalue) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_sigma(SigmaKind::equicorr, 4, 0.5));
  EXPECT_NEAR(es.eigenvalues().minCoeff(), 0.5, 1e-14);
  EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0 + 3 * 0.5, 1e-14);
}

TEST(BuildSigma, RangeErrors) {
  EXPECT_THROW(build_sigma(SigmaKind::toeplitz, 3, 1.0), DomainError);
  EXPECT_THROW(build_sigma(SigmaKind::toeplitz, 3, -1.0), DomainError);
  EXPECT_THROW(build_sigma(SigmaKind::equicorr, 4, -1.0 / 3.0), DomainError);
  EXPECT_NO_THROW(build_sigma(SigmaKind::equicorr, 4, -0.3));
  EXPECT_THROW(build_sigma(SigmaKind::equicorr, 4, 1.0), DomainError);
  EXPECT_THROW(build_sigma(SigmaKind::explicit_matrix, 2, 0.0), DomainError);
  Eigen::MatrixXd not_pd(2, 2);
  not_pd << 1, 2, 2, 1;
  EXPECT_THROW(build_sigma(SigmaKind::explicit_matrix, 2, 0.0, not_pd), DomainError);
}

TEST(EvenlySpacedSupport, Placement) {
  EXPECT_EQ(evenly_spaced_support(19, 3), (std::vector<int>{1, 10, 19}));
  EXPECT_EQ(evenly_spaced_support(10, 4), (std::vector<int>{1, 4, 7, 10}));
  // 1 + 4.5 rounds half up to 6.
  EXPECT_EQ(evenly_spaced_support(10, 3), (std::vector<int>{1, 6, 10}));
  EXPECT_EQ(evenly_spaced_support(7, 1), (std::vector<int>{4}));
  EXPECT_EQ(evenly_spaced_support(8, 1), (std::vector<int>{4}));
  EXPECT_EQ(evenly_spaced_support(4, 4), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_THROW(evenly_spaced_support(3, 4), DomainError);
  EXPECT_THROW(evenly_spaced_support(3, 0), DomainError);
}

TEST(DrawCoefficients, ExactSupportAndDeterminism) {
  for (int p = 1; p <= 40; p += 3) {
    for (int peff = 1; peff <= p; peff += 2) {
      Rng a(p * 100 + peff), b(p * 100 + peff);
      const Eigen::VectorXd beta = draw_coefficients(p, peff, a);
      EXPECT_EQ(beta, draw_coefficients(p, peff, b));
      EXPECT_EQ(support_of(beta), evenly_spaced_support(p, peff));
      EXPECT_EQ(static_cast<int>(support_of(beta).size()), peff);
    }
  }
  Rng rng(5);
  EXPECT_EQ(support_of(draw_coefficients(6, 6, rng)).size(), 6u);
}

TEST(SimulateDataset, NoiselessLineApproachesPerfectCorrelation) {
  ModelSpec m;
  m.sigma_x = Eigen::MatrixXd::Identity(2, 2);
  m.mu_x = Eigen::VectorXd::Zero(2);
  m.beta = Eigen::VectorXd::Unit(2, 0);
  double previous_gap = 1.0;
  for (double sigma2 : {1e-2, 1e-6, 1e-12}) {
    m.sigma2 = sigma2;
    Rng rng(3);
    const double r = correlation_matrix(simulate_dataset(m, 2000, rng)).correlation()(0, 1);
    EXPECT_LT(1.0 - r, previous_gap);
    previous_gap = 1.0 - r;
  }
  EXPECT_LT(previous_gap, 1e-10);
}

TEST(SimulateDataset, SameSeedSameBytes) {
  ModelSpec m;
  m.sigma_x = build_sigma(SigmaKind::toeplitz, 2, 0.3);
  m.mu_x = Eigen::VectorXd::Zero(2);
  m.beta = Eigen::Vector2d(1.0, -0.5);
  auto render = [&] {
    Rng rng(2024);
    std::ostringstream csv;
    io::write_dataset_csv(csv, simulate_dataset(m, 5, rng));
    return csv.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(SimulateDataset, SampleCovarianceConcentrates) {
  ModelSpec m;
  m.sigma_x = build_sigma(SigmaKind::toeplitz, 5, 0.5);
  m.mu_x = Eigen::VectorXd::LinSpaced(5, -2, 2);
  Rng coef(1);
  m.beta = draw_coefficients(5, 2, coef);
  Rng rng(17);
  const Dataset d = simulate_dataset(m, 50000, rng);
  EXPECT_LE((sample_covariance(d.X) - m.sigma_x).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LE((d.X.colwise().mean().transpose() - m.mu_x).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SimulateDataset, NonPositiveDefiniteSigmaFails) {
  ModelSpec m;
  m.sigma_x.resize(2, 2);
  m.sigma_x << 1, 2, 2, 1;
  m.mu_x = Eigen::VectorXd::Zero(2);
  m.beta = Eigen::VectorXd::Zero(2);
  Rng rng(1);
  EXPECT_THROW(simulate_dataset(m, 10, rng), ModelError);
  EXPECT_THROW(m.validate(), ModelError);
}

TEST(Fixtures, Example1) {
  const ModelSpec m = fixture(FixtureId::example1);
  EXPECT_EQ(m.beta, Eigen::Vector2d(1, -1));
  Eigen::MatrixXd s(2, 2);
  s << 1, 1, 1, 2;
  EXPECT_EQ(m.sigma_x, s);
  EXPECT_EQ(m.sigma2, 1.0);
}

TEST(Fixtures, Example4MatchesDisplayedMatrix) {
  Rng rng(9);
  const ModelSpec m = fixture(FixtureId::example4, rng);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double expected = i == j ? 1.0 : (i == 3 || j == 3 ? 0.2 : -0.4);
      EXPECT_EQ(m.sigma_x(i, j), expected);
    }
  }
  EXPECT_EQ(m.beta(3), 0.0);
  EXPECT_EQ(support_of(m.beta), (std::vector<int>{1, 2, 3}));
}

TEST(Fixtures, Example3Support) {
  EXPECT_EQ(support_of(fixture(FixtureId::example3).beta), (std::vector<int>{2, 3}));
}

TEST(Fixtures, AllPositiveDefinite) {
  for (auto id : {FixtureId::example1, FixtureId::example2, FixtureId::example3,
                  FixtureId::example4}) {
    EXPECT_NO_THROW(fixture(id).validate()) << to_string(id);
  }
  EXPECT_THROW(parse_fixture("example9"), DomainError);
}

// Monte-Carlo check of the fixture covariances against the structural equations
// simulated directly (X and Y built from independent standard normals).
TEST(Fixtures, CovariancesMatchStructuralEquations) {
  const Eigen::Index n = 50000;
  Rng rng(77);
  auto e = [&] { return rng.normal(); };

  Eigen::MatrixXd ex1(n, 2), ex2(n, 4), ex3(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a1 = e(), a2 = a1 + e();
    ex1.row(i) << a1, a2;
    const double b1 = e(), b2 = b1 + e(), b3 = b1 + e(), b4 = b2 - b3 + e();
    ex2.row(i) << b1, b2, b3, b4;
    const double c1 = e(), c2 = c1 + e(), c3 = c1 + e();
    ex3.row(i) << c1, c2, c3;
  }
  EXPECT_LE((sample_covariance(ex1) - fixture(FixtureId::example1).sigma_x).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LE((sample_covariance(ex2) - fixture(FixtureId::example2).sigma_x).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LE((sample_covariance(ex3) - fixture(FixtureId::example3).sigma_x).cwiseAbs().maxCoeff(), 0.05);
}

}  // namespace
}  // namespace pcsimple
