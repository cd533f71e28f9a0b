#include "ahm/linalg.hpp"

#include <lapacke.h>

#include <sstream>
#include <stdexcept>

namespace ahm {

SvdResult thin_svd(const Eigen::MatrixXd& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);

  SvdResult out;
  out.u.resize(m, k);
  out.s.resize(k);
  out.vt.resize(k, n);

  Eigen::MatrixXd work = a;  // dgesdd destroys its input
  lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m,
                                   out.s.data(), out.u.data(), m,
                                   out.vt.data(), k);
  if (info == 0) return out;

  // Divide-and-conquer occasionally fails on ill-conditioned input.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() == Eigen::Success) {
    out.u = svd.matrixU();
    out.s = svd.singularValues();
    out.vt = svd.matrixV().transpose();
    return out;
  }

  std::ostringstream msg;
  msg << "SVD failed (dgesdd info=" << info << ") for " << m << "x" << n
      << " matrix, |A|_max=" << a.cwiseAbs().maxCoeff();
  throw std::runtime_error(msg.str());
}

SymEigResult sym_eig(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd pseudo_inverse_diag(const Eigen::VectorXd& v, double floor_rel) {
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(v.size());
  if (v.size() == 0) return inv;
  const double floor = v.cwiseAbs().maxCoeff() * floor_rel;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > floor) inv[i] = 1.0 / v[i];
  return inv;
}

}  // namespace ahm
