#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrdec/linalg.hpp"

namespace vrdec {

enum class LossFamily { Ridge, Logistic };
std::string to_string(LossFamily family);

struct Sample {
  Eigen::SparseVector<double> feature;
  double label = 0.0;
};
using Dataset = std::vector<Sample>;

// Counts component-gradient evaluations of real samples. Zero samples never
// increment it.
struct EvalCounter {
  std::uint64_t count = 0;
};

// f_(i)(x) = (1/n') sum_j f_(i),j(x) with
//   ridge   : f_j(x) = 1/2 (a_j^T x - y_j)^2 + reg/2 |x|^2
//   logistic: f_j(x) = log(1 + exp(-y_j a_j^T x)) + reg/2 |x|^2
// Samples n_real..n_total-1 are zero samples: f_j = 0, carrying the shared
// synthetic smoothness constant `zero_smoothness`. They are never stored.
class LocalObjective {
 public:
  LocalObjective(LossFamily family, SparseRowMatrix features, Vector labels, double reg);

  LossFamily family() const { return family_; }
  int dim() const { return static_cast<int>(features_.cols()); }
  int real_count() const { return static_cast<int>(features_.rows()); }
  int sample_count() const { return n_total_; }
  int zero_count() const { return n_total_ - real_count(); }
  bool is_zero_sample(int j) const { return j >= real_count(); }

  const SparseRowMatrix& features() const { return features_; }
  const Vector& labels() const { return labels_; }
  double reg() const { return reg_; }

  // L_(i),j for every sample (real ones only; see zero_smoothness()).
  const Vector& smoothness() const { return smoothness_; }
  double smoothness(int j) const { return is_zero_sample(j) ? zero_smoothness_ : smoothness_(j); }
  double zero_smoothness() const { return zero_smoothness_; }

  double mu() const { return reg_ * real_count() / n_total_; }
  double L_local() const { return L_local_; }        // upper bound on smoothness of f_(i)
  double Lbar_local() const { return Lbar_local_; }  // (1/n') sum_j L_(i),j

  double component_value(int j, const Vector& x) const;
  Vector component_grad(int j, const Vector& x, EvalCounter& counter) const;
  double value(const Vector& x) const;
  Vector full_grad(const Vector& x, EvalCounter& counter) const;

  // Appends n_total - n_real zero samples with the given synthetic constant.
  LocalObjective with_zero_samples(int n_total, double zero_smoothness) const;

  // d/dt of the per-sample loss at margin t = a^T x.
  double loss_derivative(int j, double margin) const;

 private:
  double loss(int j, double margin) const;

  LossFamily family_;
  SparseRowMatrix features_;
  Vector labels_;
  double reg_;
  int n_total_;
  Vector smoothness_;
  double zero_smoothness_ = 0.0;
  double L_local_ = 0.0;
  double Lbar_local_ = 0.0;
};

struct Problem {
  LossFamily family = LossFamily::Ridge;
  std::vector<LocalObjective> nodes;
  int p = 0;
  double mu = 0.0;
  double L_f = 0.0;
  double Lbar_f = 0.0;
  double kappa_s = 0.0;
  double kappa_b = 0.0;

  int m() const { return static_cast<int>(nodes.size()); }
  int n() const { return nodes.front().sample_count(); }
  int n_real() const { return nodes.front().real_count(); }
  bool padded() const { return n() != n_real(); }

  // sum_i f_(i)(x) and its gradient.
  double value(const Vector& x) const;
  Vector grad(const Vector& x) const;
  // sum_i f_(i)(x_(i)) for a stacked iterate.
  double stacked_value(const Stack& x) const;
};

// Shards must all have the same sample count and dimension `p`.
Problem make_problem(LossFamily family, const std::vector<Dataset>& shards, int p, double mu);
Problem make_ridge(const std::vector<Dataset>& shards, int p, double mu);
Problem make_logistic(const std::vector<Dataset>& shards, int p, double mu);

// Deterministic synthetic ridge instance. Feature k is scaled by
// conditioning^(-k/(2(p-1))) and every feature vector has unit expected
// squared norm; targets come from a planted model plus 0.1 noise.
Problem make_ridge(int m, int n, int p, double mu, std::uint64_t seed, double conditioning);

// Zero-sample padding: n' = ceil(kappa) samples per node, the padded ones
// carrying L = (n mu n' - n Lbar_(i)) / (n' - n). Requires kappa > max{kappa_s, n}.
Problem zero_pad(const Problem& problem, double kappa);

// Power-iteration estimate of the largest eigenvalue of A^T A.
double gram_spectral_norm(const SparseRowMatrix& a, int max_iters = 50, double tol = 1e-8);

}  // namespace vrdec
