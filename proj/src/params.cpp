#include "vrdec/params.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace vrdec {

namespace {

// Ceiling that ignores relative rounding noise, so a ratio that is 1 in exact
// arithmetic does not become a batch of 2.
int ceil_int(double x) {
  return static_cast<int>(std::ceil(x * (1.0 - 1e-12)));
}

std::string canonical(std::string text) {
  for (auto& c : text) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return text;
}

}  // namespace

MixingKind mixing_kind(Method method) {
  if (is_extra_family(method.variant)) {
    return method.chebyshev ? MixingKind::ExtraCa : MixingKind::Extra;
  }
  return method.chebyshev ? MixingKind::DigingCa : MixingKind::Diging;
}

std::string to_string(Method method) {
  std::string name;
  switch (method.variant) {
    case Variant::Extra: name = "EXTRA"; break;
    case Variant::Diging: name = "DIGing"; break;
    case Variant::VrExtra: name = "VR-EXTRA"; break;
    case Variant::VrDiging: name = "VR-DIGing"; break;
    case Variant::AccVrExtra: name = "Acc-VR-EXTRA"; break;
    case Variant::AccVrDiging: name = "Acc-VR-DIGing"; break;
  }
  return method.chebyshev ? name + "-CA" : name;
}

Method parse_method(const std::string& text) {
  std::string key = canonical(text);
  Method out;
  if (key.size() > 3 && key.compare(key.size() - 3, 3, "-CA") == 0) {
    out.chebyshev = true;
    key.resize(key.size() - 3);
  }
  if (key == "EXTRA") out.variant = Variant::Extra;
  else if (key == "DIGING") out.variant = Variant::Diging;
  else if (key == "VR-EXTRA") out.variant = Variant::VrExtra;
  else if (key == "VR-DIGING") out.variant = Variant::VrDiging;
  else if (key == "ACC-VR-EXTRA") out.variant = Variant::AccVrExtra;
  else if (key == "ACC-VR-DIGING") out.variant = Variant::AccVrDiging;
  else throw std::invalid_argument("unknown variant '" + text + "'");
  return out;
}

ProblemConstants constants_of(const Problem& problem) {
  return {problem.n(), problem.mu, problem.L_f, problem.Lbar_f};
}

SolverParams default_params(Method method, const ProblemConstants& problem, double mixing_kappa,
                            const ParamOptions& options) {
  if (!(problem.mu > 0.0)) throw std::invalid_argument("mu must be positive (strong convexity)");
  if (!(options.alpha_multiplier > 0.0)) throw std::invalid_argument("alpha multiplier must be positive");
  const double mu = problem.mu;
  const double n = problem.n;
  const double L = problem.L_f;
  const double Lbar = problem.Lbar_f;

  SolverParams out;
  out.method = method;
  out.kappa = options.kappa_override.value_or(mixing_kappa);
  const double kappa = out.kappa;

  if (is_accelerated(method.variant)) {
    int b = ceil_int(std::sqrt(n * std::max(Lbar, n * mu) / (kappa * L)));
    const double large_kappa =
        std::max(n * problem.kappa_b() / problem.kappa_s(),
                 n * n * problem.kappa_b() / (problem.kappa_s() * problem.kappa_s()));
    if (options.acc_fallback && kappa > large_kappa) {
      b = ceil_int(Lbar / L);
      out.fallback_batch = true;
    }
    out.b = std::clamp(options.b_override.value_or(b), 1, problem.n);
    out.theta1 = std::min(0.5, 0.5 * std::sqrt(kappa * mu / L));
    out.theta2 = std::min(0.5, Lbar / (2.0 * L * out.b));
    out.alpha = options.alpha_multiplier / (10.0 * L);
  } else {
    const double denom = std::max(L, kappa * mu);
    out.alpha = options.alpha_multiplier / (28.0 * denom);
    if (is_batch(method.variant)) {
      out.b = problem.n;
    } else {
      out.b = std::clamp(options.b_override.value_or(ceil_int(std::max(Lbar, n * mu) / denom)), 1,
                         problem.n);
      out.padding_recommended = kappa > std::max(problem.kappa_s(), n);
    }
  }
  out.snapshot_prob = is_batch(method.variant)
                          ? 1.0
                          : options.snapshot_prob_override.value_or(static_cast<double>(out.b) / n);
  if (!(out.snapshot_prob > 0.0 && out.snapshot_prob <= 1.0)) {
    throw std::invalid_argument("snapshot probability must be in (0, 1]");
  }
  return out;
}

SolverParams default_params(Method method, const Problem& problem, const MixingOperator& mixing,
                            const ParamOptions& options) {
  if (mixing.kind() != mixing_kind(method)) {
    throw std::invalid_argument("mixing operator " + to_string(mixing.kind()) + " does not match " +
                                to_string(method));
  }
  return default_params(method, constants_of(problem), mixing.kappa(), options);
}

ResolvedRun resolve_run(Method method, const Problem& problem, const MixingOperator& mixing,
                        const ParamOptions& options) {
  ResolvedRun out{problem, default_params(method, problem, mixing, options), false};
  if (!out.params.padding_recommended || !options.auto_zero_pad || problem.padded()) return out;
  out.problem = zero_pad(problem, out.params.kappa);
  out.padded = true;
  ParamOptions padded_options = options;
  padded_options.kappa_override = static_cast<double>(out.problem.n());
  out.params = default_params(method, out.problem, mixing, padded_options);
  out.params.padding_recommended = false;
  return out;
}

}  // namespace vrdec
