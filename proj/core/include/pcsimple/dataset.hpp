#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pcsimple {

// Raw sample: n rows of p covariates plus the response.
struct Dataset {
  Eigen::MatrixXd X;               // n x p
  Eigen::VectorXd y;               // n
  std::vector<std::string> names;  // p covariate labels
  std::string response_name = "y";

  [[nodiscard]] Eigen::Index rows() const { return X.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return X.cols(); }

  // Throws DataError on shape mismatch or non-finite entries.
  void validate() const;
};

}  // namespace pcsimple
