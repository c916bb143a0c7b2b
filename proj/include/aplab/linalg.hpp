#pragma once

#include <Eigen/Dense>

namespace aplab::linalg {

/// Singular values of a complex matrix of any shape, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

/// Rank with relative tolerance tau (sigma > tau * sigma_max counts).
int rank_with_tol(const Eigen::MatrixXcd& a, double tau);

/// Orthonormal basis of the right null space at relative tolerance tau
/// (columns; may be empty).
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& a, double tau);

/// Real singular values of a real matrix of any shape, descending.
Eigen::VectorXd singular_values_real(const Eigen::MatrixXd& a);

int rank_with_tol_real(const Eigen::MatrixXd& a, double tau);

}  // namespace aplab::linalg
