#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pcsimple/dataset.hpp"
#include "pcsimple/rng.hpp"

namespace pcsimple {

// Random-design linear model Y = delta + X^T beta + eps, X ~ N(mu_x, sigma_x),
// eps ~ N(0, sigma2) independent of X.
struct ModelSpec {
  Eigen::VectorXd mu_x;
  Eigen::MatrixXd sigma_x;
  Eigen::VectorXd beta;
  double delta = 0.0;
  double sigma2 = 1.0;

  [[nodiscard]] int p() const { return static_cast<int>(beta.size()); }

  // Throws ModelError on dimension mismatch, asymmetric or non-PD sigma_x,
  // or sigma2 <= 0.
  void validate() const;
};

enum class SigmaKind { toeplitz, equicorr, identity, explicit_matrix };

std::string_view to_string(SigmaKind kind);
// Accepts "toeplitz", "equicorr", "identity", "explicit"; throws DomainError otherwise.
SigmaKind parse_sigma_kind(std::string_view name);

// Design covariances:
//   toeplitz  rho^|i-j|            (|rho| < 1)
//   equicorr  1 on the diagonal, rho elsewhere  (-1/(p-1) < rho < 1)
//   identity  I
//   explicit  the supplied matrix, checked for symmetry and positive definiteness
Eigen::MatrixXd build_sigma(SigmaKind kind, int p, double rho,
                            const std::optional<Eigen::MatrixXd>& explicit_sigma = std::nullopt);

// 1-based indices of the nonzero coefficients: round-half-up of
// 1 + (k-1)(p-1)/(peff-1) for k = 1..peff, or ceil(p/2) when peff == 1.
std::vector<int> evenly_spaced_support(int p, int peff);

// peff nonzero N(0,1) coefficients at evenly_spaced_support(p, peff); exact zeros elsewhere.
Eigen::VectorXd draw_coefficients(int p, int peff, Rng& rng);

// 1-based indices j with beta_j != 0.
std::vector<int> support_of(const Eigen::VectorXd& beta);

// n i.i.d. rows. Per row: p standard normals mapped through the lower
// Cholesky factor of sigma_x, then one normal for the noise.
Dataset simulate_dataset(const ModelSpec& model, std::size_t n, Rng& rng);

enum class FixtureId { example1, example2, example3, example4 };

std::string_view to_string(FixtureId id);
FixtureId parse_fixture(std::string_view name);

// Exact population models of the worked structural-equation examples.
// example4 draws beta_1..3 from `rng`; the others ignore it.
ModelSpec fixture(FixtureId id, Rng& rng);
ModelSpec fixture(FixtureId id);

// What a simulation run records about the generating model.
struct TruthRecord {
  int p = 0;
  int peff = 0;
  Eigen::VectorXd beta;
  std::vector<int> support;
  std::string sigma_kind;
  double rho = 0.0;
  double sigma2 = 1.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::string fixture;  // empty unless generated from a fixture
};

}  // namespace pcsimple
