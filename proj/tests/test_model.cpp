#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "ahm/model.hpp"
#include "oracles.hpp"

using namespace ahm;

namespace {

SiteOperator anticommutator(const SiteOperator& a, const SiteOperator& b) {
  return a * b + b * a;
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("local operators satisfy the anticommutation algebra") {
  const LocalOperators& op = local_operators();
  const SiteOperator id = SiteOperator::Identity();

  CHECK((anticommutator(op.c_up, op.c_up.transpose()) - id).norm() == 0.0);
  CHECK((anticommutator(op.c_dn, op.c_dn.transpose()) - id).norm() == 0.0);
  CHECK(anticommutator(op.c_up, op.c_dn.transpose()).norm() == 0.0);
  CHECK(anticommutator(op.c_dn, op.c_up.transpose()).norm() == 0.0);
  CHECK(anticommutator(op.c_up, op.c_up).norm() == 0.0);
  CHECK(anticommutator(op.c_dn, op.c_dn).norm() == 0.0);
  CHECK(anticommutator(op.c_up, op.c_dn).norm() == 0.0);
}

TEST_CASE("ordering signs and composite operators") {
  const LocalOperators& op = local_operators();
  // c_dn |up,dn> = -|up>
  Eigen::Vector4d updn = Eigen::Vector4d::Unit(3);
  Eigen::Vector4d res = op.c_dn * updn;
  CHECK(res(1) == -1.0);
  CHECK(res.cwiseAbs().sum() == 1.0);

  CHECK((op.n_up - op.c_up.transpose() * op.c_up).norm() == 0.0);
  CHECK((op.n_dn - op.c_dn.transpose() * op.c_dn).norm() == 0.0);
  CHECK((op.n_up.diagonal() - Eigen::Vector4d(0, 1, 0, 1)).norm() == 0.0);
  CHECK((op.n_dn.diagonal() - Eigen::Vector4d(0, 0, 1, 1)).norm() == 0.0);
  CHECK((op.parity.diagonal() - Eigen::Vector4d(1, -1, -1, 1)).norm() == 0.0);
  CHECK((op.pair - op.c_up * op.c_dn).norm() == 0.0);
}

TEST_CASE("mass ratio to hopping") {
  CHECK(mass_ratio_to_hopping(6.0, 40.0) == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(mass_ratio_to_hopping(2.5, 2.5) == doctest::Approx(1.0));
  CHECK(mass_ratio_to_hopping(1.0, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mass_ratio_to_hopping(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(mass_ratio_to_hopping(1.0, -3.0), std::domain_error);
}

TEST_CASE("single-particle bond spectrum") {
  HubbardParams p{1.0, 1.0, 0.0, 0.0, 0.0};
  BondOperator h = build_bond_hamiltonian(p);
  // one up fermion on two sites: indices 4 (|up,vac>) and 1 (|vac,up>)
  Eigen::Matrix2d block;
  block << h(4, 4), h(4, 1), h(1, 4), h(1, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("atomic limit eigenvalue on a doubly occupied edge site") {
  HubbardParams p{0.0, 0.0, -4.0, 0.0, 0.0};
  BondOperator h = build_bond_hamiltonian(p, EdgeFlags{true, true});
  CHECK(h(12, 12) == doctest::Approx(-4.0));  // |up dn> (x) |vac>
}

TEST_CASE("two-site chain matches the dense Fock-space oracle") {
  HubbardParams p{1.0, 0.5, -4.0, -2.0, 1.0};
  BondOperator h = build_bond_hamiltonian(p, EdgeFlags{true, true});

  Eigen::MatrixXd reference = oracle::dense_chain_hamiltonian(p, 2);
  Eigen::MatrixXd remapped(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      remapped(i, j) = reference(oracle::two_site_tensor_to_fock(i),
                                 oracle::two_site_tensor_to_fock(j));
  CHECK((h - remapped).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("bond Hamiltonian commutes with both particle numbers") {
  const LocalOperators& op = local_operators();
  HubbardParams p{1.0, 0.3, -4.0, -1.7, 1.4};
  BondOperator h = build_bond_hamiltonian(p);
  const SiteOperator id = SiteOperator::Identity();
  BondOperator n_up_tot = kron_site(op.n_up, id) + kron_site(id, op.n_up);
  BondOperator n_dn_tot = kron_site(op.n_dn, id) + kron_site(id, op.n_dn);
  CHECK((h * n_up_tot - n_up_tot * h).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((h * n_dn_tot - n_dn_tot * h).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("gate basics") {
  HubbardParams p{1.0, 0.7, -4.0, -1.7, 2.6};
  BondOperator h = build_bond_hamiltonian(p);

  BondOperator g0 = build_gate(h, 0.0);
  CHECK((g0 - BondOperator::Identity()).cwiseAbs().maxCoeff() < 1e-14);

  // spectral action on an eigenvector
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const double tau = 0.37;
  BondOperator g = build_gate(h, tau);
  Eigen::VectorXd v = es.eigenvectors().col(3);
  Eigen::VectorXd gv = g * v;
  CHECK((gv - std::exp(-tau * es.eigenvalues()(3)) * v).norm() < 1e-12);

  BondOperator asym = h;
  asym(0, 1) += 1e-6;
  CHECK_THROWS(build_gate(asym, 0.1));
}

TEST_CASE("gate conserves particle-number sectors") {
  const LocalOperators& op = local_operators();
  HubbardParams p{1.0, 0.5, -4.0, -2.4, -2.1};
  BondOperator g = build_gate(build_bond_hamiltonian(p), 0.1);
  auto sector = [&](int idx) {
    const int sl = idx / 4, sr = idx % 4;
    const int nu = static_cast<int>(op.n_up(sl, sl) + op.n_up(sr, sr));
    const int nd = static_cast<int>(op.n_dn(sl, sl) + op.n_dn(sr, sr));
    return std::make_pair(nu, nd);
  };
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (sector(i) != sector(j)) CHECK(std::abs(g(i, j)) < 1e-14);
}

TEST_CASE("gate matches the cubic Taylor polynomial to fourth order") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd a(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) a(i, j) = dist(rng);
  BondOperator h = 0.5 * (a + a.transpose());

  auto remainder = [&](double tau) {
    BondOperator g = build_gate(h, tau);
    BondOperator taylor = BondOperator::Identity() - tau * h +
                          (tau * tau / 2.0) * h * h -
                          (tau * tau * tau / 6.0) * h * h * h;
    return (g - taylor).norm();
  };
  const double r1 = remainder(0.02);
  const double r2 = remainder(0.01);
  CHECK(r1 / r2 == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("particle-hole image has the shifted bond spectrum") {
  HubbardParams p{1.0, 0.4, -4.0, -1.2, 0.9};
  auto [mu_ph, dmu_ph] = std::make_pair(p.U - p.mu, -p.dmu);
  HubbardParams mapped{p.t_up, p.t_down, p.U, mu_ph, dmu_ph};

  Eigen::VectorXd e1 = sorted_eigenvalues(build_bond_hamiltonian(p));
  Eigen::VectorXd e2 = sorted_eigenvalues(build_bond_hamiltonian(mapped));
  const double shift = p.U - 2.0 * p.mu;
  CHECK((e1 - (e2.array() + shift).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((HubbardParams{-1.0, 1.0, 0.0, 0.0, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS((HubbardParams{1.0, -0.1, 0.0, 0.0, 0.0}).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW((HubbardParams{1.0, 0.0, -4.0, 1.0, -2.0}).validate());
}
