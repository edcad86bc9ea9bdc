#include "vrdec/mixing.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vrdec {

namespace {
constexpr double kCaScale = 2.2;
constexpr double kMaxVerifiedNodes = 64;
}  // namespace

std::string to_string(MixingKind kind) {
  switch (kind) {
    case MixingKind::Extra: return "EXTRA";
    case MixingKind::Diging: return "DIGING";
    case MixingKind::ExtraCa: return "EXTRA_CA";
    case MixingKind::DigingCa: return "DIGING_CA";
  }
  return "?";
}

MixingOperator::MixingOperator(MixingKind kind, std::shared_ptr<const GossipMatrix> base)
    : kind_(kind), base_(std::move(base)) {
  if (!base_) throw std::invalid_argument("mixing operator needs a gossip matrix");
  const GossipMatrix& w = *base_;
  switch (kind_) {
    case MixingKind::Extra:
      if (w.omega_floor < 0.0) throw std::invalid_argument("spectral floor must be >= 0");
      kappa_ = 2.0 * w.kappa_c;
      break;
    case MixingKind::Diging:
      if (w.omega_floor < kDigingFloor - 1e-12) {
        throw std::invalid_argument("spectral floor violated; re-shift W");
      }
      kappa_ = w.kappa_c * w.kappa_c;
      break;
    case MixingKind::ExtraCa:
      // L = U^2 = (I - W)/2.
      plan_ = chebyshev_plan((1.0 - w.lambda_min()) / 2.0, (1.0 - w.sigma2) / 2.0);
      kappa_ = 3.0;
      break;
    case MixingKind::DigingCa:
      // L = U = I - W.
      plan_ = chebyshev_plan(1.0 - w.lambda_min(), 1.0 - w.sigma2);
      kappa_ = 20.0;
      break;
  }
}

Stack MixingOperator::gossip(const Stack& x) const {
  const GossipMatrix& w = *base_;
  switch (kind_) {
    case MixingKind::Extra:
    case MixingKind::Diging:
      return w.apply(x);
    case MixingKind::ExtraCa: {
      const LinearAction usq = [&w](const Stack& v) -> Stack { return 0.5 * (v - w.apply(v)); };
      return x - (2.0 / kCaScale) * chebyshev_apply(usq, *plan_, x);
    }
    case MixingKind::DigingCa: {
      const LinearAction u = [&w](const Stack& v) -> Stack { return v - w.apply(v); };
      return x - ((2.0 - std::sqrt(2.0)) / kCaScale) * chebyshev_apply(u, *plan_, x);
    }
  }
  throw std::logic_error("unhandled mixing kind");
}

Stack MixingOperator::apply_Usq(const Stack& x) const {
  if (is_diging_family(kind_)) {
    const Stack ux = apply_U(x);
    return apply_U(ux);
  }
  return 0.5 * (x - gossip(x));
}

Stack MixingOperator::apply_Vsq(const Stack& x) const {
  if (is_diging_family(kind_)) {
    const Stack wx = gossip(x);
    return x - gossip(wx);
  }
  return 0.5 * (x - gossip(x));
}

Stack MixingOperator::apply_U(const Stack& x) const {
  if (!is_diging_family(kind_)) {
    throw std::logic_error("U is a matrix square root for " + to_string(kind_) +
                           "; only U^2 is available");
  }
  return x - gossip(x);
}

SpectralBounds spectral_bounds(const MixingOperator& op) {
  const int m = op.size();
  auto symmetrize = [](const DenseMatrix& a) -> DenseMatrix { return 0.5 * (a + a.transpose()); };
  const DenseMatrix usq = symmetrize(dense_of([&](const Stack& x) { return op.apply_Usq(x); }, m));
  const DenseMatrix vsq = symmetrize(dense_of([&](const Stack& x) { return op.apply_Vsq(x); }, m));

  SpectralBounds out;
  out.kappa = op.kappa();
  out.max_eig_Usq_minus_Vsq = symmetric_eigenvalues(usq - vsq).maxCoeff();
  out.max_eig_Vsq = symmetric_eigenvalues(vsq).maxCoeff();
  // Ker(U^2) = Span(1) is one-dimensional, so the smallest eigenvalue is the
  // kernel and the next one is the smallest nonzero eigenvalue.
  const Vector usq_eigs = symmetric_eigenvalues(usq);
  out.min_nonzero_eig_Usq = usq_eigs(1);
  out.kernel_residual = (usq * Vector::Ones(m)).cwiseAbs().maxCoeff();
  return out;
}

MixingOperator make_mixing(MixingKind kind, std::shared_ptr<const GossipMatrix> base) {
  MixingOperator op(kind, std::move(base));
  if (op.size() <= kMaxVerifiedNodes) {
    const SpectralBounds b = spectral_bounds(op);
    if (!b.holds(1e-10)) {
      std::ostringstream msg;
      msg << "spectral relations fail for " << to_string(kind)
          << ": max eig(U^2-V^2)=" << b.max_eig_Usq_minus_Vsq
          << ", max eig(V^2)=" << b.max_eig_Vsq
          << ", min nonzero eig(U^2)=" << b.min_nonzero_eig_Usq << " vs 1/kappa=" << 1.0 / b.kappa;
      throw std::logic_error(msg.str());
    }
  }
  return op;
}

}  // namespace vrdec
