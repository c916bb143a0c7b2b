#include "aplab/linalg.hpp"

namespace aplab::linalg {

// JacobiSVD with the default preconditioner needs rows >= cols; transpose
// when the input is wide (singular values are unchanged, U and V swap).

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (a.rows() >= a.cols()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.adjoint().eval());
  return svd.singularValues();
}

int rank_with_tol(const Eigen::MatrixXcd& a, double tau) {
  Eigen::VectorXd sv = singular_values(a);
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau * sv(0)) ++rank;
  return rank;
}

Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& a, double tau) {
  if (a.rows() >= a.cols()) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double top = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tau * top) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
  }
  // wide: kernel vectors are the left singular vectors of the adjoint with
  // small (or absent) singular values
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.adjoint().eval(), Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau * top) ++rank;
  return svd.matrixU().rightCols(a.cols() - rank);
}

Eigen::VectorXd singular_values_real(const Eigen::MatrixXd& a) {
  if (a.rows() >= a.cols()) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return svd.singularValues();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.transpose().eval());
  return svd.singularValues();
}

int rank_with_tol_real(const Eigen::MatrixXd& a, double tau) {
  Eigen::VectorXd sv = singular_values_real(a);
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tau * sv(0)) ++rank;
  return rank;
}

}  // namespace aplab::linalg
