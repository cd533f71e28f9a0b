#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "ahm/model.hpp"

namespace ahm {

/// Outcome of one two-site SVD truncation. discarded_weight is the sum of
/// squared dropped singular values relative to the total weight.
struct TruncationReport {
  double discarded_weight = 0.0;
  int chi_used = 0;
};

/// Cumulative truncation statistics over a sweep (or a whole run).
struct SweepStats {
  double max_discarded = 0.0;
  double sum_discarded = 0.0;
  int max_chi = 0;
  long gates = 0;

  void absorb(const TruncationReport& r) {
    max_discarded = std::max(max_discarded, r.discarded_weight);
    sum_discarded += r.discarded_weight;
    max_chi = std::max(max_chi, r.chi_used);
    ++gates;
  }
  void absorb(const SweepStats& s) {
    max_discarded = std::max(max_discarded, s.max_discarded);
    sum_discarded += s.sum_discarded;
    max_chi = std::max(max_chi, s.max_chi);
    gates += s.gates;
  }
};

enum class UnitCellBond { AB, BA };
enum class UnitCellSite { A, B };

/// Infinite MPS with a two-site (A,B) unit cell in Gamma-lambda canonical
/// form. Gamma tensors are stored as one chi x chi matrix per physical
/// index; lambda vectors are the Schmidt coefficients of the two
/// inequivalent bonds, kept positive, descending and normalized to
/// sum(lambda^2) = 1.
class CanonicalIMPS {
 public:
  using SiteTensor = std::array<Eigen::MatrixXd, kLocalDim>;

  /// The chi = 1 vacuum.
  CanonicalIMPS();

  /// chi = 1 product state. With bias = (n_up, n_dn) targets in [0,1]^2 the
  /// site amplitudes are the deterministic uncorrelated superposition with
  /// those densities; otherwise they are pseudo-random from the seed
  /// (distinct draws for the A and B sites).
  static CanonicalIMPS product_state(
      int chi_max, std::uint64_t seed,
      std::optional<std::pair<double, double>> bias = std::nullopt);

  int chi_max() const { return chi_max_; }
  void set_chi_max(int chi_max);
  int chi_a() const { return static_cast<int>(lambda_a_.size()); }
  int chi_b() const { return static_cast<int>(lambda_b_.size()); }

  const SiteTensor& gamma(UnitCellSite s) const {
    return s == UnitCellSite::A ? gamma_a_ : gamma_b_;
  }
  const Eigen::VectorXd& lambda(UnitCellBond b) const {
    return b == UnitCellBond::AB ? lambda_a_ : lambda_b_;
  }

  /// Contracts the two-site wavefunction of the bond with the gate,
  /// truncates by SVD and restores the Gamma tensors. Re-canonicalizes
  /// if the orthogonality residual exceeds 1e-6 afterwards.
  TruncationReport apply_two_site_gate(const BondOperator& gate,
                                       UnitCellBond bond);

  /// Unit-cell average (⟨op⟩_A + ⟨op⟩_B) / 2.
  double local_expectation(const SiteOperator& op) const;
  double local_expectation(const SiteOperator& op, UnitCellSite site) const;

  /// ⟨op_left(i) [prod string(i+j)] op_right(i+r)⟩ averaged over the two
  /// unit-cell origins; r = 0 evaluates the on-site product op_left*op_right.
  double two_point(const SiteOperator& op_left, const SiteOperator& op_right,
                   const SiteOperator& string_op, int r) const;
  double two_point_from(UnitCellSite origin, const SiteOperator& op_left,
                        const SiteOperator& op_right,
                        const SiteOperator& string_op, int r) const;

  /// Two-site expectation ⟨h⟩ on one bond of the unit cell.
  double bond_expectation(const BondOperator& h, UnitCellBond bond) const;

  /// Largest deviation of the four Gamma-lambda orthogonality conditions
  /// from the identity.
  double canonical_residual() const;

  /// Restores canonical form via the transfer-matrix gauge fixing of the
  /// coarse-grained cell; the state is unchanged up to truncation at
  /// chi_max. fixed_point_tol controls the transfer fixed-point iteration
  /// (the loose default is used for the automatic in-evolution trigger).
  void canonicalize(double fixed_point_tol = 1e-13);

  bool operator==(const CanonicalIMPS& other) const;

 private:
  int chi_max_ = 60;
  SiteTensor gamma_a_, gamma_b_;      // A: (chi_b x chi_a), B: (chi_a x chi_b)
  Eigen::VectorXd lambda_a_, lambda_b_;

  friend struct ImpsAccess;
};

/// Truncation decision shared by every SVD site: keep
/// min(chi_max, rank above relative floor 1e-12), extending through a
/// degenerate multiplet at the boundary if it fits within chi_max + 4.
struct TruncationDecision {
  int keep = 0;
  double discarded_weight = 0.0;
};
TruncationDecision decide_truncation(const Eigen::VectorXd& singular_values,
                                     int chi_max);

/// SVD + truncation in one step. Large wavefunction matrices go through a
/// Gram-matrix eigendecomposition (singular values refined against theta
/// and the kept basis re-orthonormalized), small ones through the direct
/// SVD driver.
struct TruncatedSvd {
  Eigen::MatrixXd u;   // rows x keep
  Eigen::VectorXd s;   // kept singular values, descending, unnormalized
  Eigen::MatrixXd vt;  // keep x cols
  TruncationDecision cut;
};
TruncatedSvd svd_truncate(const Eigen::MatrixXd& theta, int chi_max);

/// Checkpoint container: state plus the couplings that generated it.
struct ImpsCheckpoint {
  CanonicalIMPS state;
  HubbardParams params;
};

void save_checkpoint(const CanonicalIMPS& state, const HubbardParams& params,
                     const std::string& path);
ImpsCheckpoint load_checkpoint(const std::string& path);
void write_checkpoint(const CanonicalIMPS& state, const HubbardParams& params,
                      std::ostream& os);
ImpsCheckpoint read_checkpoint(std::istream& is);

}  // namespace ahm
