#include "ahm/model.hpp"

#include <cmath>
#include <stdexcept>

#include "ahm/linalg.hpp"

namespace ahm {

void HubbardParams::validate() const {
  // t_up = 0 is admitted for the atomic limit even though t_up = 1 is the
  // usual unit of energy
  if (!(t_up >= 0.0)) throw std::invalid_argument("t_up must be >= 0");
  if (!(t_down >= 0.0)) throw std::invalid_argument("t_down must be >= 0");
  for (double v : {t_up, t_down, U, mu, dmu})
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coupling");
}

const LocalOperators& local_operators() {
  static const LocalOperators ops = [] {
    LocalOperators o;
    o.c_up.setZero();
    o.c_up(0, 1) = 1.0;   // c_up |up> = |vac>
    o.c_up(2, 3) = 1.0;   // c_up |up,dn> = |dn>
    o.c_dn.setZero();
    o.c_dn(0, 2) = 1.0;   // c_dn |dn> = |vac>
    o.c_dn(1, 3) = -1.0;  // c_dn |up,dn> = -|up>
    o.n_up = Eigen::Vector4d(0, 1, 0, 1).asDiagonal();
    o.n_dn = Eigen::Vector4d(0, 0, 1, 1).asDiagonal();
    o.parity = Eigen::Vector4d(1, -1, -1, 1).asDiagonal();
    o.pair = o.c_up * o.c_dn;
    o.identity.setIdentity();
    return o;
  }();
  return ops;
}

BondOperator kron_site(const SiteOperator& a, const SiteOperator& b) {
  BondOperator out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return out;
}

BondOperator build_bond_hamiltonian(const HubbardParams& params,
                                    EdgeFlags edges) {
  params.validate();
  const LocalOperators& op = local_operators();
  const SiteOperator cdag_up = op.c_up.transpose();
  const SiteOperator cdag_dn = op.c_dn.transpose();

  // c+_{L,s} c_{R,s} = (c+_s P) (x) c_s in the spin representation; the
  // parity factor carries the Jordan-Wigner string across the bond.
  BondOperator h = BondOperator::Zero();
  h -= params.t_up * (kron_site(cdag_up * op.parity, op.c_up) +
                      kron_site(op.parity * op.c_up, cdag_up));
  h -= params.t_down * (kron_site(cdag_dn * op.parity, op.c_dn) +
                        kron_site(op.parity * op.c_dn, cdag_dn));

  const SiteOperator onsite = params.U * op.n_up * op.n_dn -
                              params.mu * (op.n_up + op.n_dn) +
                              params.dmu * (op.n_dn - op.n_up);
  const double w_left = edges.left_open ? 1.0 : 0.5;
  const double w_right = edges.right_open ? 1.0 : 0.5;
  h += w_left * kron_site(onsite, op.identity);
  h += w_right * kron_site(op.identity, onsite);
  return h;
}

BondOperator build_gate(const BondOperator& h, double tau) {
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("bond Hamiltonian must be symmetric");
  SymEigResult eig = sym_eig(h);
  Eigen::VectorXd w = (-tau * eig.values.array()).exp();
  BondOperator gate =
      eig.vectors * w.asDiagonal() * eig.vectors.transpose();
  return gate;
}

double mass_ratio_to_hopping(double mass_up, double mass_dn, double t_up) {
  if (!(mass_up > 0.0) || !(mass_dn > 0.0))
    throw std::domain_error("masses must be positive");
  return t_up * mass_up / mass_dn;
}

}  // namespace ahm
