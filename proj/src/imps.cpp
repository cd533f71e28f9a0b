#include "ahm/imps.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ahm/linalg.hpp"

namespace ahm {
namespace {

constexpr double kSingularFloorRel = 1e-12;
constexpr double kDegenerateRel = 1e-10;
constexpr int kDegenerateSlack = 4;
constexpr double kLambdaInvFloorRel = 1e-10;
constexpr double kCanonicalTrigger = 1e-6;
constexpr double kLooseFixedPointTol = 1e-9;
constexpr int kGramRouteMinDim = 96;

using SiteTensor = CanonicalIMPS::SiteTensor;

Eigen::VectorXd normalized(Eigen::VectorXd v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw std::runtime_error("zero Schmidt vector");
  return v / n;
}

}  // namespace

namespace {

// Gram-matrix route: eigendecomposition of theta^T theta (or theta theta^T
// for wide matrices), singular values refined as |theta v|, and the
// reconstructed side re-orthonormalized by a thin QR. Only the kept
// columns are formed.
TruncatedSvd gram_svd_truncate(const Eigen::MatrixXd& theta, int chi_max) {
  const bool tall = theta.rows() >= theta.cols();
  const Eigen::MatrixXd gram =
      tall ? Eigen::MatrixXd(theta.transpose() * theta)
           : Eigen::MatrixXd(theta * theta.transpose());
  SymEigResult eig = sym_eig(gram);  // ascending

  const Eigen::Index n = gram.rows();
  Eigen::MatrixXd basis(n, n);
  for (Eigen::Index i = 0; i < n; ++i) basis.col(i) = eig.vectors.col(n - 1 - i);

  // refined singular values from the image of the eigenbasis
  const Eigen::MatrixXd image =
      tall ? Eigen::MatrixXd(theta * basis)
           : Eigen::MatrixXd(theta.transpose() * basis);
  Eigen::VectorXd sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) sigma[i] = image.col(i).norm();

  TruncationDecision cut = decide_truncation(sigma, chi_max);
  const int keep = cut.keep;

  Eigen::MatrixXd reconstructed(image.rows(), keep);
  for (int i = 0; i < keep; ++i) {
    const double s = image.col(i).norm();
    reconstructed.col(i) =
        s > 0.0 ? Eigen::VectorXd(image.col(i) / s)
                : Eigen::VectorXd::Zero(image.rows());
  }
  // clean residual non-orthogonality from near-floor columns
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(reconstructed);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(image.rows(), keep);
  const Eigen::MatrixXd r = q.transpose() * reconstructed;
  for (int i = 0; i < keep; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);

  TruncatedSvd out;
  out.cut = cut;
  out.s = sigma.head(keep);
  if (tall) {
    out.u = std::move(q);
    out.vt = basis.leftCols(keep).transpose();
  } else {
    out.u = basis.leftCols(keep);
    out.vt = q.transpose();
  }
  return out;
}

}  // namespace

TruncatedSvd svd_truncate(const Eigen::MatrixXd& theta, int chi_max) {
  if (std::min(theta.rows(), theta.cols()) >= kGramRouteMinDim)
    return gram_svd_truncate(theta, chi_max);
  SvdResult svd = thin_svd(theta);
  TruncatedSvd out;
  out.cut = decide_truncation(svd.s, chi_max);
  out.u = svd.u.leftCols(out.cut.keep);
  out.s = svd.s.head(out.cut.keep);
  out.vt = svd.vt.topRows(out.cut.keep);
  return out;
}

TruncationDecision decide_truncation(const Eigen::VectorXd& s, int chi_max) {
  const int n = static_cast<int>(s.size());
  if (n == 0) throw std::runtime_error("empty singular value set");
  const double total = s.squaredNorm();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("singular values degenerate or non-finite");

  const double floor = s[0] * kSingularFloorRel;
  int rank = 0;
  while (rank < n && s[rank] >= floor) ++rank;
  if (rank == 0) rank = 1;

  int keep = std::min(chi_max, rank);
  if (keep < rank) {
    // keep a degenerate multiplet together when it fits in the slack
    int extended = keep;
    const double boundary = s[keep - 1];
    while (extended < rank && s[extended] >= boundary * (1.0 - kDegenerateRel))
      ++extended;
    if (extended <= chi_max + kDegenerateSlack) keep = extended;
  }

  TruncationDecision d;
  d.keep = keep;
  d.discarded_weight = s.tail(n - keep).squaredNorm() / total;
  return d;
}

CanonicalIMPS::CanonicalIMPS() {
  chi_max_ = 1;
  lambda_a_ = Eigen::VectorXd::Ones(1);
  lambda_b_ = Eigen::VectorXd::Ones(1);
  for (int s = 0; s < kLocalDim; ++s) {
    gamma_a_[s] = Eigen::MatrixXd::Constant(1, 1, s == 0 ? 1.0 : 0.0);
    gamma_b_[s] = Eigen::MatrixXd::Constant(1, 1, s == 0 ? 1.0 : 0.0);
  }
}

CanonicalIMPS CanonicalIMPS::product_state(
    int chi_max, std::uint64_t seed,
    std::optional<std::pair<double, double>> bias) {
  if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
  std::array<Eigen::Vector4d, 2> amps;
  if (bias) {
    const auto [pu, pd] = *bias;
    if (pu < 0.0 || pu > 1.0 || pd < 0.0 || pd > 1.0)
      throw std::domain_error("bias densities must lie in [0,1]");
    Eigen::Vector4d c;
    c << std::sqrt((1 - pu) * (1 - pd)), std::sqrt(pu * (1 - pd)),
        std::sqrt((1 - pu) * pd), std::sqrt(pu * pd);
    amps[0] = amps[1] = c;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.1, 1.0);
    for (auto& c : amps) {
      for (int s = 0; s < kLocalDim; ++s) c[s] = dist(rng);
      c.normalize();
    }
  }

  CanonicalIMPS state;
  state.chi_max_ = chi_max;
  state.lambda_a_ = Eigen::VectorXd::Ones(1);
  state.lambda_b_ = Eigen::VectorXd::Ones(1);
  for (int s = 0; s < kLocalDim; ++s) {
    state.gamma_a_[s] = Eigen::MatrixXd::Constant(1, 1, amps[0][s]);
    state.gamma_b_[s] = Eigen::MatrixXd::Constant(1, 1, amps[1][s]);
  }
  return state;
}

void CanonicalIMPS::set_chi_max(int chi_max) {
  if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
  chi_max_ = chi_max;
}

namespace {

// theta block (s1, s2) of lamOuter GL[s1] lamMid GR[s2] lamOuter,
// assembled as a (d*chiL) x (d*chiR) matrix with row (s1*chiL + l).
Eigen::MatrixXd assemble_theta(const SiteTensor& gl, const SiteTensor& gr,
                               const Eigen::VectorXd& lam_outer,
                               const Eigen::VectorXd& lam_mid) {
  const int chi = static_cast<int>(lam_outer.size());
  Eigen::MatrixXd theta(kLocalDim * chi, kLocalDim * chi);
  std::array<Eigen::MatrixXd, kLocalDim> left, right;
  for (int s = 0; s < kLocalDim; ++s) {
    left[s] = lam_outer.asDiagonal() * gl[s] * lam_mid.asDiagonal();
    right[s] = gr[s] * lam_outer.asDiagonal();
  }
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2)
      theta.block(s1 * chi, s2 * chi, chi, chi) = left[s1] * right[s2];
  return theta;
}

Eigen::MatrixXd apply_gate_to_theta(const BondOperator& gate,
                                    const Eigen::MatrixXd& theta, int chi_l,
                                    int chi_r) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2) {
      auto dst = out.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r);
      for (int t1 = 0; t1 < kLocalDim; ++t1)
        for (int t2 = 0; t2 < kLocalDim; ++t2) {
          const double g = gate(4 * s1 + s2, 4 * t1 + t2);
          if (g != 0.0)
            dst += g * theta.block(t1 * chi_l, t2 * chi_r, chi_l, chi_r);
        }
    }
  return out;
}

}  // namespace

TruncationReport CanonicalIMPS::apply_two_site_gate(const BondOperator& gate,
                                                    UnitCellBond bond) {
  SiteTensor& gl = bond == UnitCellBond::AB ? gamma_a_ : gamma_b_;
  SiteTensor& gr = bond == UnitCellBond::AB ? gamma_b_ : gamma_a_;
  Eigen::VectorXd& lam_mid =
      bond == UnitCellBond::AB ? lambda_a_ : lambda_b_;
  Eigen::VectorXd& lam_outer =
      bond == UnitCellBond::AB ? lambda_b_ : lambda_a_;

  const int chi = static_cast<int>(lam_outer.size());
  Eigen::MatrixXd theta = assemble_theta(gl, gr, lam_outer, lam_mid);
  theta = apply_gate_to_theta(gate, theta, chi, chi);

  TruncatedSvd svd = svd_truncate(theta, chi_max_);
  const int keep = svd.cut.keep;

  lam_mid = normalized(svd.s);
  const Eigen::VectorXd inv_outer =
      pseudo_inverse_diag(lam_outer, kLambdaInvFloorRel);
  for (int s = 0; s < kLocalDim; ++s) {
    gl[s] = inv_outer.asDiagonal() * svd.u.middleRows(s * chi, chi);
    gr[s] = svd.vt.middleCols(s * chi, chi) * inv_outer.asDiagonal();
  }

  TruncationReport report{svd.cut.discarded_weight, keep};
  if (canonical_residual() > kCanonicalTrigger) canonicalize(kLooseFixedPointTol);
  return report;
}

double CanonicalIMPS::local_expectation(const SiteOperator& op,
                                        UnitCellSite site) const {
  const SiteTensor& g = site == UnitCellSite::A ? gamma_a_ : gamma_b_;
  const Eigen::VectorXd& lam_l =
      site == UnitCellSite::A ? lambda_b_ : lambda_a_;
  const Eigen::VectorXd& lam_r =
      site == UnitCellSite::A ? lambda_a_ : lambda_b_;
  SiteTensor w;
  for (int s = 0; s < kLocalDim; ++s)
    w[s] = lam_l.asDiagonal() * g[s] * lam_r.asDiagonal();
  double acc = 0.0;
  for (int s = 0; s < kLocalDim; ++s)
    for (int sp = 0; sp < kLocalDim; ++sp) {
      const double o = op(sp, s);
      if (o != 0.0) acc += o * w[s].cwiseProduct(w[sp]).sum();
    }
  return acc;
}

double CanonicalIMPS::local_expectation(const SiteOperator& op) const {
  return 0.5 * (local_expectation(op, UnitCellSite::A) +
                local_expectation(op, UnitCellSite::B));
}

namespace {

// E' = sum_{s,s'} X(s',s) B[s]^T E B[s'] for right-canonical site tensors.
Eigen::MatrixXd transfer_step(const Eigen::MatrixXd& env, const SiteTensor& b,
                              const SiteOperator& x) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(b[0].cols(), b[0].cols());
  for (int s = 0; s < kLocalDim; ++s) {
    const Eigen::MatrixXd tmp = b[s].transpose() * env;
    for (int sp = 0; sp < kLocalDim; ++sp) {
      const double o = x(sp, s);
      if (o != 0.0) out += o * (tmp * b[sp]);
    }
  }
  return out;
}

}  // namespace

double CanonicalIMPS::two_point_from(UnitCellSite origin,
                                     const SiteOperator& op_left,
                                     const SiteOperator& op_right,
                                     const SiteOperator& string_op,
                                     int r) const {
  if (r < 0) throw std::domain_error("separation must be non-negative");
  if (r == 0) {
    const SiteOperator prod = op_left * op_right;
    return local_expectation(prod, origin);
  }

  std::array<SiteTensor, 2> b_form;  // [0]=parity of the origin, [1]=next
  const bool origin_is_a = origin == UnitCellSite::A;
  for (int p = 0; p < 2; ++p) {
    const bool is_a = origin_is_a == (p == 0);
    const SiteTensor& g = is_a ? gamma_a_ : gamma_b_;
    const Eigen::VectorXd& lam_r = is_a ? lambda_a_ : lambda_b_;
    for (int s = 0; s < kLocalDim; ++s)
      b_form[p][s] = g[s] * lam_r.asDiagonal();
  }
  const Eigen::VectorXd& lam_left = origin_is_a ? lambda_b_ : lambda_a_;

  Eigen::MatrixXd env = lam_left.array().square().matrix().asDiagonal();
  env = transfer_step(env, b_form[0], op_left);
  for (int j = 1; j < r; ++j)
    env = transfer_step(env, b_form[j % 2], string_op);
  env = transfer_step(env, b_form[r % 2], op_right);
  return env.trace();
}

double CanonicalIMPS::two_point(const SiteOperator& op_left,
                                const SiteOperator& op_right,
                                const SiteOperator& string_op, int r) const {
  return 0.5 * (two_point_from(UnitCellSite::A, op_left, op_right, string_op, r) +
                two_point_from(UnitCellSite::B, op_left, op_right, string_op, r));
}

double CanonicalIMPS::bond_expectation(const BondOperator& h,
                                       UnitCellBond bond) const {
  const SiteTensor& gl = bond == UnitCellBond::AB ? gamma_a_ : gamma_b_;
  const SiteTensor& gr = bond == UnitCellBond::AB ? gamma_b_ : gamma_a_;
  const Eigen::VectorXd& lam_mid =
      bond == UnitCellBond::AB ? lambda_a_ : lambda_b_;
  const Eigen::VectorXd& lam_outer =
      bond == UnitCellBond::AB ? lambda_b_ : lambda_a_;

  const int chi = static_cast<int>(lam_outer.size());
  const Eigen::MatrixXd theta = assemble_theta(gl, gr, lam_outer, lam_mid);
  const Eigen::MatrixXd h_theta = apply_gate_to_theta(h, theta, chi, chi);
  const double norm2 = theta.cwiseProduct(theta).sum();
  return theta.cwiseProduct(h_theta).sum() / norm2;
}

double CanonicalIMPS::canonical_residual() const {
  auto deviation = [](const Eigen::MatrixXd& m) {
    return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols()))
        .cwiseAbs()
        .maxCoeff();
  };
  double res = 0.0;
  for (UnitCellSite site : {UnitCellSite::A, UnitCellSite::B}) {
    const SiteTensor& g = site == UnitCellSite::A ? gamma_a_ : gamma_b_;
    const Eigen::VectorXd& lam_l =
        site == UnitCellSite::A ? lambda_b_ : lambda_a_;
    const Eigen::VectorXd& lam_r =
        site == UnitCellSite::A ? lambda_a_ : lambda_b_;
    Eigen::MatrixXd left = Eigen::MatrixXd::Zero(lam_r.size(), lam_r.size());
    Eigen::MatrixXd right = Eigen::MatrixXd::Zero(lam_l.size(), lam_l.size());
    for (int s = 0; s < kLocalDim; ++s) {
      const Eigen::MatrixXd a = lam_l.asDiagonal() * g[s];
      const Eigen::MatrixXd b = g[s] * lam_r.asDiagonal();
      left += a.transpose() * a;
      right += b * b.transpose();
    }
    res = std::max(res, deviation(left));
    res = std::max(res, deviation(right));
  }
  return res;
}

namespace {

struct FixedPoint {
  Eigen::MatrixXd matrix;
  double eigenvalue = 0.0;
};

// Dominant fixed point of the (completely positive) cell transfer map,
// by power iteration from the identity.
template <class Step>
FixedPoint dominant_fixed_point(int chi, double tol, Step&& step) {
  FixedPoint fp;
  fp.matrix = Eigen::MatrixXd::Identity(chi, chi) / std::sqrt(double(chi));
  const int max_iter = tol < 1e-10 ? 20000 : 500;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::MatrixXd next = step(fp.matrix);
    next = 0.5 * (next + next.transpose().eval());
    const double norm = next.norm();
    if (!(norm > 0.0)) throw std::runtime_error("transfer map annihilated");
    next /= norm;
    const double delta = (next - fp.matrix).norm();
    fp.matrix = next;
    fp.eigenvalue = norm;
    if (delta < tol) break;
  }
  return fp;
}

}  // namespace

void CanonicalIMPS::canonicalize(double fixed_point_tol) {
  const int chi = static_cast<int>(lambda_b_.size());

  // coarse-grained cell, physical index 4*s1 + s2
  std::array<Eigen::MatrixXd, 16> cell;
  for (int s1 = 0; s1 < kLocalDim; ++s1) {
    const Eigen::MatrixXd left = gamma_a_[s1] * lambda_a_.asDiagonal();
    for (int s2 = 0; s2 < kLocalDim; ++s2)
      cell[4 * s1 + s2] = left * gamma_b_[s2];
  }

  SiteTensor ba, bb, aa, ab;
  for (int s = 0; s < kLocalDim; ++s) {
    ba[s] = gamma_a_[s] * lambda_a_.asDiagonal();
    bb[s] = gamma_b_[s] * lambda_b_.asDiagonal();
    aa[s] = lambda_b_.asDiagonal() * gamma_a_[s];
    ab[s] = lambda_a_.asDiagonal() * gamma_b_[s];
  }
  auto right_step = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(lambda_a_.size(), lambda_a_.size());
    for (int s = 0; s < kLocalDim; ++s) inner += bb[s] * m * bb[s].transpose();
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(chi, chi);
    for (int s = 0; s < kLocalDim; ++s) outer += ba[s] * inner * ba[s].transpose();
    return outer;
  };
  auto left_step = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(lambda_a_.size(), lambda_a_.size());
    for (int s = 0; s < kLocalDim; ++s)
      inner += aa[s].transpose() * m * aa[s];
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(chi, chi);
    for (int s = 0; s < kLocalDim; ++s)
      outer += ab[s].transpose() * inner * ab[s];
    return outer;
  };

  const FixedPoint vr = dominant_fixed_point(chi, fixed_point_tol, right_step);
  const FixedPoint vl = dominant_fixed_point(chi, fixed_point_tol, left_step);

  auto factor = [](const Eigen::MatrixXd& v) {
    SymEigResult eig = sym_eig(v);
    Eigen::VectorXd d = eig.values.cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd root = eig.vectors * d.asDiagonal();
    Eigen::MatrixXd inv =
        pseudo_inverse_diag(d, kLambdaInvFloorRel).asDiagonal() *
        eig.vectors.transpose();
    return std::make_pair(root, inv);
  };
  auto [x, x_inv] = factor(vr.matrix);    // V_R = X X^T
  auto [yt, yt_inv] = factor(vl.matrix);  // V_L = Y^T Y with Y = yt^T
  const Eigen::MatrixXd y = yt.transpose();
  const Eigen::MatrixXd y_inv = yt_inv.transpose();

  SvdResult gauge = thin_svd(y * lambda_b_.asDiagonal() * x);
  TruncationDecision cut = decide_truncation(gauge.s, chi_max_);
  const int chi_new = cut.keep;
  lambda_b_ = normalized(gauge.s.head(chi_new));

  const Eigen::MatrixXd to_left =
      gauge.vt.topRows(chi_new) * x_inv;              // chi_new x chi
  const Eigen::MatrixXd to_right =
      y_inv * gauge.u.leftCols(chi_new);              // chi x chi_new
  std::array<Eigen::MatrixXd, 16> cell_new;
  for (int s = 0; s < 16; ++s) cell_new[s] = to_left * cell[s] * to_right;

  // rescale so the transfer map of the canonical cell has eigenvalue one
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(chi_new, chi_new);
  for (int s = 0; s < 16; ++s) {
    const Eigen::MatrixXd c = cell_new[s] * lambda_b_.asDiagonal();
    gram += c * c.transpose();
  }
  const double scale = gram.trace() / chi_new;
  if (!(scale > 0.0)) throw std::runtime_error("cell norm collapsed");
  for (auto& c : cell_new) c /= std::sqrt(scale);

  // split the cell back into the two-site form
  Eigen::MatrixXd theta(kLocalDim * chi_new, kLocalDim * chi_new);
  for (int s1 = 0; s1 < kLocalDim; ++s1)
    for (int s2 = 0; s2 < kLocalDim; ++s2)
      theta.block(s1 * chi_new, s2 * chi_new, chi_new, chi_new) =
          lambda_b_.asDiagonal() * cell_new[4 * s1 + s2] *
          lambda_b_.asDiagonal();

  TruncatedSvd split = svd_truncate(theta, chi_max_);
  lambda_a_ = normalized(split.s);
  const Eigen::VectorXd inv_b =
      pseudo_inverse_diag(lambda_b_, kLambdaInvFloorRel);
  for (int s = 0; s < kLocalDim; ++s) {
    gamma_a_[s] = inv_b.asDiagonal() * split.u.middleRows(s * chi_new, chi_new);
    gamma_b_[s] = split.vt.middleCols(s * chi_new, chi_new) * inv_b.asDiagonal();
  }
}

bool CanonicalIMPS::operator==(const CanonicalIMPS& other) const {
  auto eq_vec = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
  };
  auto eq_tensor = [](const SiteTensor& a, const SiteTensor& b) {
    for (int s = 0; s < kLocalDim; ++s) {
      if (a[s].rows() != b[s].rows() || a[s].cols() != b[s].cols())
        return false;
      if (!(a[s].array() == b[s].array()).all()) return false;
    }
    return true;
  };
  return chi_max_ == other.chi_max_ && eq_vec(lambda_a_, other.lambda_a_) &&
         eq_vec(lambda_b_, other.lambda_b_) &&
         eq_tensor(gamma_a_, other.gamma_a_) &&
         eq_tensor(gamma_b_, other.gamma_b_);
}

// ---------------------------------------------------------------------------
// checkpoint IO

struct ImpsAccess {
  static CanonicalIMPS make(int chi_max, SiteTensor ga, SiteTensor gb,
                            Eigen::VectorXd la, Eigen::VectorXd lb) {
    CanonicalIMPS s;
    s.chi_max_ = chi_max;
    s.gamma_a_ = std::move(ga);
    s.gamma_b_ = std::move(gb);
    s.lambda_a_ = std::move(la);
    s.lambda_b_ = std::move(lb);
    return s;
  }
};

namespace {

constexpr char kMagic[8] = {'A', 'H', 'M', 'I', 'M', 'P', 'S', '1'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T take(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_vector(std::ostream& os, const Eigen::VectorXd& v) {
  put<std::uint64_t>(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
}
Eigen::VectorXd take_vector(std::istream& is) {
  const auto n = take<std::uint64_t>(is);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return v;
}

void put_tensor(std::ostream& os, const SiteTensor& t) {
  put<std::uint64_t>(os, static_cast<std::uint64_t>(t[0].rows()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(t[0].cols()));
  for (const auto& m : t)
    os.write(reinterpret_cast<const char*>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
}
SiteTensor take_tensor(std::istream& is) {
  const auto rows = take<std::uint64_t>(is);
  const auto cols = take<std::uint64_t>(is);
  SiteTensor t;
  for (auto& m : t) {
    m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    is.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (!is) throw std::runtime_error("truncated checkpoint");
  }
  return t;
}

}  // namespace

void write_checkpoint(const CanonicalIMPS& state, const HubbardParams& params,
                      std::ostream& os) {
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kLocalDim);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(state.chi_max()));
  for (double v : {params.t_up, params.t_down, params.U, params.mu, params.dmu})
    put(os, v);
  put_vector(os, state.lambda(UnitCellBond::AB));
  put_vector(os, state.lambda(UnitCellBond::BA));
  put_tensor(os, state.gamma(UnitCellSite::A));
  put_tensor(os, state.gamma(UnitCellSite::B));
  if (!os) throw std::runtime_error("checkpoint write failed");
}

ImpsCheckpoint read_checkpoint(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not a state checkpoint");
  if (take<std::uint32_t>(is) != kLocalDim)
    throw std::runtime_error("unexpected local dimension");
  const auto chi_max = static_cast<int>(take<std::uint32_t>(is));
  ImpsCheckpoint out;
  out.params.t_up = take<double>(is);
  out.params.t_down = take<double>(is);
  out.params.U = take<double>(is);
  out.params.mu = take<double>(is);
  out.params.dmu = take<double>(is);
  Eigen::VectorXd la = take_vector(is);
  Eigen::VectorXd lb = take_vector(is);
  SiteTensor ga = take_tensor(is);
  SiteTensor gb = take_tensor(is);
  out.state = ImpsAccess::make(chi_max, std::move(ga), std::move(gb),
                               std::move(la), std::move(lb));
  return out;
}

void save_checkpoint(const CanonicalIMPS& state, const HubbardParams& params,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_checkpoint(state, params, os);
}

ImpsCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_checkpoint(is);
}

}  // namespace ahm
