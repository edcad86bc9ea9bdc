#pragma once

#include <memory>
#include <optional>
#include <string>

#include "vrdec/chebyshev.hpp"
#include "vrdec/gossip.hpp"

namespace vrdec {

enum class MixingKind { Extra, Diging, ExtraCa, DigingCa };

std::string to_string(MixingKind kind);
inline bool is_diging_family(MixingKind k) {
  return k == MixingKind::Diging || k == MixingKind::DigingCa;
}
inline bool is_chebyshev(MixingKind k) {
  return k == MixingKind::ExtraCa || k == MixingKind::DigingCa;
}

inline constexpr double kDigingFloor = 0.70710678118654752440;  // sqrt(2)/2

// The (U, V) pair of the constrained reformulation, expressed through an
// effective gossip matrix W_eff:
//   EXTRA    : W_eff = W,                         U^2 = V^2 = (I - W_eff)/2
//   DIGing   : W_eff = W,                         U = I - W_eff, V^2 = I - W_eff^2
//   EXTRA-CA : W_eff = I - (2/2.2) P_t(c3 U^2),   so U^2 = V^2 = P_t(c3 U^2)/2.2
//   DIGing-CA: W_eff = I - (2-sqrt2)/2.2 P_t(c3 U), so U = (2-sqrt2)/2.2 P_t(c3 U)
// One application of W_eff costs one communication round, or t rounds for the
// Chebyshev kinds.
class MixingOperator {
 public:
  MixingOperator(MixingKind kind, std::shared_ptr<const GossipMatrix> base);

  MixingKind kind() const { return kind_; }
  const GossipMatrix& base() const { return *base_; }
  int size() const { return base_->size(); }
  double kappa() const { return kappa_; }
  int t() const { return plan_ ? plan_->t : 0; }
  const std::optional<ChebyshevPlan>& plan() const { return plan_; }
  int rounds_per_gossip() const { return plan_ ? plan_->t : 1; }

  Stack gossip(const Stack& x) const;
  Stack apply_Usq(const Stack& x) const;
  Stack apply_Vsq(const Stack& x) const;
  // Only defined for the DIGing kinds; EXTRA's U is a matrix square root.
  Stack apply_U(const Stack& x) const;

 private:
  MixingKind kind_;
  std::shared_ptr<const GossipMatrix> base_;
  std::optional<ChebyshevPlan> plan_;
  double kappa_ = 0.0;
};

// Constructs the operator and, for m <= 64, verifies the spectral relations
// U^2 <= V^2 <= I/2 and lambda_min_nonzero(U^2) >= 1/kappa by dense
// eigendecomposition (throws std::logic_error on violation).
MixingOperator make_mixing(MixingKind kind, std::shared_ptr<const GossipMatrix> base);

struct SpectralBounds {
  double max_eig_Usq_minus_Vsq = 0.0;  // <= 0 when U^2 <= V^2
  double max_eig_Vsq = 0.0;            // <= 1/2
  double min_nonzero_eig_Usq = 0.0;    // >= 1/kappa
  double kernel_residual = 0.0;        // |U^2 1|_inf
  double kappa = 0.0;

  bool holds(double tol) const {
    return max_eig_Usq_minus_Vsq <= tol && max_eig_Vsq <= 0.5 + tol &&
           min_nonzero_eig_Usq >= 1.0 / kappa - tol && kernel_residual <= tol;
  }
};

SpectralBounds spectral_bounds(const MixingOperator& op);

}  // namespace vrdec
