#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ahm/imps.hpp"
#include "ahm/model.hpp"

namespace ahm {

/// Open-chain MPS with a tracked orthogonality center, used by the
/// finite-chain evolution mode that bridges to exact diagonalization.
class FiniteMPS {
 public:
  using SiteTensor = std::array<Eigen::MatrixXd, kLocalDim>;

  static FiniteMPS product_state(
      int sites, int chi_max, std::uint64_t seed,
      std::optional<std::pair<double, double>> bias = std::nullopt);

  /// Product state with explicit per-site amplitudes over the local basis.
  static FiniteMPS from_site_amplitudes(
      int chi_max, const std::vector<Eigen::Vector4d>& amplitudes);

  int size() const { return static_cast<int>(tensors_.size()); }
  int chi_max() const { return chi_max_; }
  int center() const { return center_; }
  int max_bond_dimension() const;

  void move_center(int site);

  /// Gate on (bond, bond+1); SVD-truncates to chi_max and renormalizes.
  TruncationReport apply_bond_gate(int bond, const BondOperator& gate);

  double local_expectation(int site, const SiteOperator& op);
  double bond_expectation(int bond, const BondOperator& h);
  /// ⟨op_left(i) [prod string] op_right(i+r)⟩; r = 0 uses the operator
  /// product on site i.
  double two_point(int site, const SiteOperator& op_left,
                   const SiteOperator& op_right, const SiteOperator& string_op,
                   int r);

 private:
  std::vector<SiteTensor> tensors_;
  int center_ = 0;
  int chi_max_ = 0;

  void shift_right();
  void shift_left();
  double center_norm2() const;
};

}  // namespace ahm
