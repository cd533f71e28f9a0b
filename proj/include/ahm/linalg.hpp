#pragma once

#include <Eigen/Dense>

namespace ahm {

/// Thin SVD A = U * diag(s) * V^T with singular values sorted descending.
struct SvdResult {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd vt;
};

/// Computes the thin SVD through LAPACK's divide-and-conquer driver,
/// falling back to Eigen's Jacobi SVD if the driver fails to converge.
/// Throws std::runtime_error (with a condition report) if both fail.
SvdResult thin_svd(const Eigen::MatrixXd& a);

/// Symmetric eigendecomposition helper: returns (eigenvalues ascending,
/// eigenvectors as columns).
struct SymEigResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SymEigResult sym_eig(const Eigen::MatrixXd& a);

/// diag(v)^-1 with entries below floor_rel * max(v) treated as zero.
Eigen::VectorXd pseudo_inverse_diag(const Eigen::VectorXd& v, double floor_rel);

}  // namespace ahm
