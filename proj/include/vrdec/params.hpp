#pragma once

#include <optional>
#include <string>

#include "vrdec/mixing.hpp"
#include "vrdec/objective.hpp"

namespace vrdec {

enum class Variant { Extra, Diging, VrExtra, VrDiging, AccVrExtra, AccVrDiging };

struct Method {
  Variant variant = Variant::VrExtra;
  bool chebyshev = false;

  bool operator==(const Method&) const = default;
};

inline bool is_batch(Variant v) { return v == Variant::Extra || v == Variant::Diging; }
inline bool is_accelerated(Variant v) { return v == Variant::AccVrExtra || v == Variant::AccVrDiging; }
inline bool is_extra_family(Variant v) {
  return v == Variant::Extra || v == Variant::VrExtra || v == Variant::AccVrExtra;
}

MixingKind mixing_kind(Method method);

// "EXTRA", "DIGing", "VR-EXTRA", "VR-DIGing", "Acc-VR-EXTRA", "Acc-VR-DIGing",
// with a "-CA" suffix for the Chebyshev forms.
std::string to_string(Method method);
// Case-insensitive; '_' and '-' are interchangeable.
Method parse_method(const std::string& text);

struct ParamOptions {
  double alpha_multiplier = 1.0;
  std::optional<int> b_override;
  std::optional<double> snapshot_prob_override;
  std::optional<double> kappa_override;
  bool auto_zero_pad = true;
  bool acc_fallback = true;
};

struct SolverParams {
  Method method;
  double alpha = 0.0;
  int b = 1;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double kappa = 0.0;
  double snapshot_prob = 1.0;
  bool padding_recommended = false;  // kappa > max{kappa_s, n} for a non-accelerated VR method
  bool fallback_batch = false;       // the large-kappa batch size b = ceil(Lbar_f / L_f) was used
};

struct ProblemConstants {
  int n = 1;  // samples per node (n' when padded)
  double mu = 0.0;
  double L_f = 0.0;
  double Lbar_f = 0.0;

  double kappa_s() const { return Lbar_f / mu; }
  double kappa_b() const { return L_f / mu; }
};
ProblemConstants constants_of(const Problem& problem);

// Theory defaults:
//   batch / VR: alpha = c / (28 max{L_f, kappa mu}),
//               b = ceil(max{Lbar_f, n mu} / max{L_f, kappa mu})
//   Acc:        b = ceil(sqrt(n max{Lbar_f, n mu} / (kappa L_f))),
//               theta1 = sqrt(kappa mu / L_f) / 2, theta2 = Lbar_f / (2 L_f b),
//               alpha = c / (10 L_f)
// Throws std::invalid_argument when mu <= 0.
SolverParams default_params(Method method, const ProblemConstants& problem, double kappa,
                            const ParamOptions& options = {});
SolverParams default_params(Method method, const Problem& problem, const MixingOperator& mixing,
                            const ParamOptions& options = {});

// The problem a method actually runs on, plus its parameters. A non-accelerated
// VR method in the kappa > max{kappa_s, n} regime is moved onto the zero-padded
// problem (unless disabled), with kappa' = n' so that b = 1.
struct ResolvedRun {
  Problem problem;
  SolverParams params;
  bool padded = false;
};

ResolvedRun resolve_run(Method method, const Problem& problem, const MixingOperator& mixing,
                        const ParamOptions& options = {});

}  // namespace vrdec
