#include "ahm/finite_mps.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ahm/linalg.hpp"

namespace ahm {
namespace {

using SiteTensor = FiniteMPS::SiteTensor;

// E' = sum_{s,s'} X(s',s) T[s]^T E T[s']
Eigen::MatrixXd transfer_step(const Eigen::MatrixXd& env, const SiteTensor& t,
                              const SiteOperator& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(t[0].cols(), t[0].cols());
  for (int s = 0; s < kLocalDim; ++s) {
    const Eigen::MatrixXd tmp = t[s].transpose() * env;
    for (int sp = 0; sp < kLocalDim; ++sp) {
      const double o = x(sp, s);
      if (o != 0.0) out += o * (tmp * t[sp]);
    }
  }
  return out;
}

}  // namespace

FiniteMPS FiniteMPS::product_state(
    int sites, int chi_max, std::uint64_t seed,
    std::optional<std::pair<double, double>> bias) {
  if (sites < 2) throw std::invalid_argument("need at least two sites");
  if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");

  FiniteMPS mps;
  mps.chi_max_ = chi_max;
  mps.center_ = 0;
  mps.tensors_.resize(sites);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.1, 1.0);
  for (int i = 0; i < sites; ++i) {
    Eigen::Vector4d c;
    if (bias) {
      const auto [pu, pd] = *bias;
      if (pu < 0.0 || pu > 1.0 || pd < 0.0 || pd > 1.0)
        throw std::domain_error("bias densities must lie in [0,1]");
      c << std::sqrt((1 - pu) * (1 - pd)), std::sqrt(pu * (1 - pd)),
          std::sqrt((1 - pu) * pd), std::sqrt(pu * pd);
    } else {
      for (int s = 0; s < kLocalDim; ++s) c[s] = dist(rng);
      c.normalize();
    }
    for (int s = 0; s < kLocalDim; ++s)
      mps.tensors_[i][s] = Eigen::MatrixXd::Constant(1, 1, c[s]);
  }
  return mps;
}

FiniteMPS FiniteMPS::from_site_amplitudes(
    int chi_max, const std::vector<Eigen::Vector4d>& amplitudes) {
  if (amplitudes.size() < 2) throw std::invalid_argument("need two sites");
  if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
  FiniteMPS mps;
  mps.chi_max_ = chi_max;
  mps.center_ = 0;
  mps.tensors_.resize(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    Eigen::Vector4d c = amplitudes[i].normalized();
    for (int s = 0; s < kLocalDim; ++s)
      mps.tensors_[i][s] = Eigen::MatrixXd::Constant(1, 1, c[s]);
  }
  return mps;
}

int FiniteMPS::max_bond_dimension() const {
  int chi = 1;
  for (const auto& t : tensors_)
    chi = std::max(chi, static_cast<int>(t[0].cols()));
  return chi;
}

void FiniteMPS::shift_right() {
  SiteTensor& m = tensors_[center_];
  const int rows = static_cast<int>(m[0].rows());
  const int cols = static_cast<int>(m[0].cols());
  Eigen::MatrixXd stack(kLocalDim * rows, cols);
  for (int s = 0; s < kLocalDim; ++s)
    stack.block(s * rows, 0, rows, cols) = m[s];

  SvdResult svd = thin_svd(stack);
  const int k = static_cast<int>(svd.s.size());
  for (int s = 0; s < kLocalDim; ++s)
    m[s] = svd.u.block(s * rows, 0, rows, k);
  const Eigen::MatrixXd carry = svd.s.asDiagonal() * svd.vt;
  SiteTensor& next = tensors_[center_ + 1];
  for (int s = 0; s < kLocalDim; ++s) next[s] = carry * next[s];
  ++center_;
}

void FiniteMPS::shift_left() {
  SiteTensor& m = tensors_[center_];
  const int rows = static_cast<int>(m[0].rows());
  const int cols = static_cast<int>(m[0].cols());
  Eigen::MatrixXd stack(rows, kLocalDim * cols);
  for (int s = 0; s < kLocalDim; ++s)
    stack.block(0, s * cols, rows, cols) = m[s];

  SvdResult svd = thin_svd(stack);
  const int k = static_cast<int>(svd.s.size());
  for (int s = 0; s < kLocalDim; ++s)
    m[s] = svd.vt.block(0, s * cols, k, cols);
  const Eigen::MatrixXd carry = svd.u * svd.s.asDiagonal();
  SiteTensor& prev = tensors_[center_ - 1];
  for (int s = 0; s < kLocalDim; ++s) prev[s] = prev[s] * carry;
  --center_;
}

void FiniteMPS::move_center(int site) {
  if (site < 0 || site >= size()) throw std::domain_error("site out of range");
  while (center_ < site) shift_right();
  while (center_ > site) shift_left();
}

TruncationReport FiniteMPS::apply_bond_gate(int bond,
                                            const BondOperator& gate) {
  if (bond < 0 || bond + 1 >= size()) throw std::domain_error("bad bond");
  move_center(bond);

  SiteTensor& ml = tensors_[bond];
  SiteTensor& mr = tensors_[bond + 1];
  const int chi_l = static_cast<int>(ml[0].rows());
  const int chi_m = static_cast<int>(ml[0].cols());
  const int chi_r = static_cast<int>(mr[0].cols());
  (void)chi_m;

  Eigen::MatrixXd theta(kLocalDim * chi_l, kLocalDim * chi_r);
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2)
      theta.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r) = ml[s1] * mr[s2];

  Eigen::MatrixXd evolved = Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2) {
      auto dst = evolved.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r);
      for (int t1 = 0; t1 < kLocalDim; ++t1)
        for (int t2 = 0; t2 < kLocalDim; ++t2) {
          const double g = gate(4 * s1 + s2, 4 * t1 + t2);
          if (g != 0.0)
            dst += g * theta.block(t1 * chi_l, t2 * chi_r, chi_l, chi_r);
        }
    }

  SvdResult svd = thin_svd(evolved);
  TruncationDecision cut = decide_truncation(svd.s, chi_max_);
  Eigen::VectorXd lam = svd.s.head(cut.keep);
  lam /= lam.norm();

  for (int s = 0; s < kLocalDim; ++s) {
    ml[s] = svd.u.block(s * chi_l, 0, chi_l, cut.keep);
    mr[s] = lam.asDiagonal() *
            svd.vt.block(0, s * chi_r, cut.keep, chi_r);
  }
  center_ = bond + 1;
  return {cut.discarded_weight, cut.keep};
}

double FiniteMPS::center_norm2() const {
  double n2 = 0.0;
  for (int s = 0; s < kLocalDim; ++s)
    n2 += tensors_[center_][s].squaredNorm();
  return n2;
}

double FiniteMPS::local_expectation(int site, const SiteOperator& op) {
  move_center(site);
  const SiteTensor& m = tensors_[site];
  double acc = 0.0;
  for (int s = 0; s < kLocalDim; ++s)
    for (int sp = 0; sp < kLocalDim; ++sp) {
      const double o = op(sp, s);
      if (o != 0.0) acc += o * m[s].cwiseProduct(m[sp]).sum();
    }
  return acc / center_norm2();
}

double FiniteMPS::bond_expectation(int bond, const BondOperator& h) {
  if (bond < 0 || bond + 1 >= size()) throw std::domain_error("bad bond");
  move_center(bond);
  const SiteTensor& ml = tensors_[bond];
  const SiteTensor& mr = tensors_[bond + 1];
  const int chi_l = static_cast<int>(ml[0].rows());
  const int chi_r = static_cast<int>(mr[0].cols());

  Eigen::MatrixXd theta(kLocalDim * chi_l, kLocalDim * chi_r);
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2)
      theta.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r) = ml[s1] * mr[s2];

  double num = 0.0;
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(chi_l, chi_r);
      for (int t1 = 0; t1 < kLocalDim; ++t1)
        for (int t2 = 0; t2 < kLocalDim; ++t2) {
          const double g = h(4 * s1 + s2, 4 * t1 + t2);
          if (g != 0.0)
            acc += g * theta.block(t1 * chi_l, t2 * chi_r, chi_l, chi_r);
        }
      num += theta.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r)
                 .cwiseProduct(acc)
                 .sum();
    }
  return num / theta.squaredNorm();
}

double FiniteMPS::two_point(int site, const SiteOperator& op_left,
                            const SiteOperator& op_right,
                            const SiteOperator& string_op, int r) {
  if (r < 0 || site < 0 || site + r >= size())
    throw std::domain_error("correlation range beyond chain end");
  if (r == 0) return local_expectation(site, op_left * op_right);

  move_center(site);
  Eigen::MatrixXd env = transfer_step(
      Eigen::MatrixXd::Identity(tensors_[site][0].rows(),
                                tensors_[site][0].rows()),
      tensors_[site], op_left);
  for (int j = 1; j < r; ++j)
    env = transfer_step(env, tensors_[site + j], string_op);
  env = transfer_step(env, tensors_[site + r], op_right);
  return env.trace() / center_norm2();
}

}  // namespace ahm
