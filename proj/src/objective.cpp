#include "vrdec/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "vrdec/rng.hpp"

namespace vrdec {

namespace {

// Gram matrices up to this order are decomposed exactly; larger ones fall
// back to power iteration.
constexpr int kExactGramLimit = 512;

double row_dot(const SparseRowMatrix& a, int row, const Vector& x) {
  double s = 0.0;
  for (SparseRowMatrix::InnerIterator it(a, row); it; ++it) s += it.value() * x(it.index());
  return s;
}

double row_squared_norm(const SparseRowMatrix& a, int row) {
  double s = 0.0;
  for (SparseRowMatrix::InnerIterator it(a, row); it; ++it) s += it.value() * it.value();
  return s;
}

double largest_gram_eigenvalue(const SparseRowMatrix& a) {
  const auto rows = a.rows();
  const auto cols = a.cols();
  if (std::min(rows, cols) <= kExactGramLimit) {
    const DenseMatrix dense(a);
    const DenseMatrix gram = rows <= cols ? DenseMatrix(dense * dense.transpose())
                                          : DenseMatrix(dense.transpose() * dense);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, solver.eigenvalues().maxCoeff());
  }
  return gram_spectral_norm(a);
}

double stable_log1p_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

SparseRowMatrix to_matrix(const Dataset& shard, int p) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (int j = 0; j < static_cast<int>(shard.size()); ++j) {
    const auto& f = shard[j].feature;
    if (f.size() > p) throw std::invalid_argument("feature dimension exceeds p");
    for (Eigen::SparseVector<double>::InnerIterator it(f); it; ++it) {
      triplets.emplace_back(j, static_cast<int>(it.index()), it.value());
    }
  }
  SparseRowMatrix a(static_cast<Eigen::Index>(shard.size()), p);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

}  // namespace

std::string to_string(LossFamily family) {
  return family == LossFamily::Ridge ? "ridge" : "logistic";
}

double gram_spectral_norm(const SparseRowMatrix& a, int max_iters, double tol) {
  Vector v = Vector::Ones(a.cols()) / std::sqrt(static_cast<double>(a.cols()));
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector av = a * v;
    Vector w = a.transpose() * av;
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (std::abs(next - estimate) <= tol * std::max(1.0, std::abs(next))) return next;
    estimate = next;
  }
  return estimate;
}

LocalObjective::LocalObjective(LossFamily family, SparseRowMatrix features, Vector labels,
                               double reg)
    : family_(family),
      features_(std::move(features)),
      labels_(std::move(labels)),
      reg_(reg),
      n_total_(static_cast<int>(features_.rows())) {
  if (!(reg_ > 0.0)) throw std::invalid_argument("mu must be positive (strong convexity)");
  if (n_total_ < 1) throw std::invalid_argument("node has no samples");
  if (labels_.size() != features_.rows()) throw std::invalid_argument("label count mismatch");
  if (family_ == LossFamily::Logistic) {
    for (int j = 0; j < labels_.size(); ++j) {
      if (labels_(j) != 1.0 && labels_(j) != -1.0) {
        throw std::invalid_argument("logistic label must be +1 or -1, got " +
                                    std::to_string(labels_(j)) + " at sample " +
                                    std::to_string(j));
      }
    }
  }
  features_.makeCompressed();
  const double loss_curvature = family_ == LossFamily::Ridge ? 1.0 : 0.25;
  const int n = real_count();
  smoothness_.resize(n);
  for (int j = 0; j < n; ++j) smoothness_(j) = loss_curvature * row_squared_norm(features_, j) + reg_;
  Lbar_local_ = smoothness_.mean();
  L_local_ = loss_curvature * largest_gram_eigenvalue(features_) / n + reg_;
}

LocalObjective LocalObjective::with_zero_samples(int n_total, double zero_smoothness) const {
  if (n_total < real_count()) throw std::invalid_argument("cannot shrink a node");
  LocalObjective out = *this;
  const double n = real_count();
  out.n_total_ = n_total;
  out.zero_smoothness_ = zero_smoothness;
  // f' = (n/n') f on the real part.
  out.L_local_ = L_local_ * n / n_total;
  out.Lbar_local_ = (smoothness_.sum() + (n_total - n) * zero_smoothness) / n_total;
  return out;
}

double LocalObjective::loss(int j, double margin) const {
  const double y = labels_(j);
  if (family_ == LossFamily::Ridge) return 0.5 * (margin - y) * (margin - y);
  return stable_log1p_exp(-y * margin);
}

double LocalObjective::loss_derivative(int j, double margin) const {
  const double y = labels_(j);
  if (family_ == LossFamily::Ridge) return margin - y;
  // -y * sigmoid(-y t), written to stay finite for large |t|.
  const double t = y * margin;
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return -y * e / (1.0 + e);
  }
  return -y / (1.0 + std::exp(t));
}

double LocalObjective::component_value(int j, const Vector& x) const {
  if (is_zero_sample(j)) return 0.0;
  return loss(j, row_dot(features_, j, x)) + 0.5 * reg_ * x.squaredNorm();
}

Vector LocalObjective::component_grad(int j, const Vector& x, EvalCounter& counter) const {
  if (is_zero_sample(j)) return Vector::Zero(x.size());
  ++counter.count;
  const double c = loss_derivative(j, row_dot(features_, j, x));
  Vector g = reg_ * x;
  for (SparseRowMatrix::InnerIterator it(features_, j); it; ++it) g(it.index()) += c * it.value();
  return g;
}

double LocalObjective::value(const Vector& x) const {
  const Vector margins = features_ * x;
  double s = 0.0;
  for (int j = 0; j < real_count(); ++j) s += loss(j, margins(j));
  s += 0.5 * reg_ * real_count() * x.squaredNorm();
  return s / n_total_;
}

Vector LocalObjective::full_grad(const Vector& x, EvalCounter& counter) const {
  const Vector margins = features_ * x;
  Vector coef(real_count());
  for (int j = 0; j < real_count(); ++j) coef(j) = loss_derivative(j, margins(j));
  counter.count += static_cast<std::uint64_t>(real_count());
  Vector g = features_.transpose() * coef;
  g += real_count() * reg_ * x;
  return g / n_total_;
}

double Problem::value(const Vector& x) const {
  double s = 0.0;
  for (const auto& node : nodes) s += node.value(x);
  return s;
}

Vector Problem::grad(const Vector& x) const {
  Vector g = Vector::Zero(p);
  EvalCounter scratch;
  for (const auto& node : nodes) g += node.full_grad(x, scratch);
  return g;
}

double Problem::stacked_value(const Stack& x) const {
  double s = 0.0;
  for (int i = 0; i < m(); ++i) s += nodes[i].value(x.row(i).transpose());
  return s;
}

namespace {

Problem assemble(LossFamily family, std::vector<LocalObjective> nodes, int p) {
  if (nodes.empty()) throw std::invalid_argument("problem needs at least one node");
  Problem out;
  out.family = family;
  out.p = p;
  out.mu = nodes.front().mu();
  for (const auto& node : nodes) {
    if (node.sample_count() != nodes.front().sample_count() ||
        node.real_count() != nodes.front().real_count()) {
      throw std::invalid_argument("all nodes must hold the same number of samples");
    }
    out.L_f = std::max(out.L_f, node.L_local());
    out.Lbar_f = std::max(out.Lbar_f, node.Lbar_local());
  }
  out.nodes = std::move(nodes);
  out.kappa_s = out.Lbar_f / out.mu;
  out.kappa_b = out.L_f / out.mu;
  return out;
}

}  // namespace

Problem make_problem(LossFamily family, const std::vector<Dataset>& shards, int p, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive (strong convexity)");
  if (p < 1) throw std::invalid_argument("dimension must be positive");
  std::vector<LocalObjective> nodes;
  nodes.reserve(shards.size());
  for (const auto& shard : shards) {
    Vector labels(static_cast<Eigen::Index>(shard.size()));
    for (std::size_t j = 0; j < shard.size(); ++j) labels(static_cast<Eigen::Index>(j)) = shard[j].label;
    nodes.emplace_back(family, to_matrix(shard, p), std::move(labels), mu);
  }
  return assemble(family, std::move(nodes), p);
}

Problem make_ridge(const std::vector<Dataset>& shards, int p, double mu) {
  return make_problem(LossFamily::Ridge, shards, p, mu);
}

Problem make_logistic(const std::vector<Dataset>& shards, int p, double mu) {
  return make_problem(LossFamily::Logistic, shards, p, mu);
}

Problem make_ridge(int m, int n, int p, double mu, std::uint64_t seed, double conditioning) {
  if (m < 1 || n < 1 || p < 1) throw std::invalid_argument("counts must be positive");
  if (!(conditioning >= 1.0)) throw std::invalid_argument("conditioning must be >= 1");
  StreamRng rng = derive_stream(seed, 0, StreamId::Generator);
  Vector scale(p);
  for (int k = 0; k < p; ++k) {
    const double frac = p > 1 ? static_cast<double>(k) / (p - 1) : 0.0;
    scale(k) = std::pow(conditioning, -0.5 * frac);
  }
  scale /= scale.norm();
  Vector planted(p);
  for (int k = 0; k < p; ++k) planted(k) = rng.normal();

  std::vector<Dataset> shards(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      Vector a(p);
      for (int k = 0; k < p; ++k) a(k) = scale(k) * rng.normal();
      Sample s;
      s.feature = a.sparseView();
      s.label = a.dot(planted) + 0.1 * rng.normal();
      shards[i].push_back(std::move(s));
    }
  }
  return make_ridge(shards, p, mu);
}

Problem zero_pad(const Problem& problem, double kappa) {
  if (problem.padded()) throw std::invalid_argument("problem is already padded");
  const double n = problem.n();
  if (!(kappa > std::max(problem.kappa_s, n))) {
    throw std::invalid_argument("padding not applicable: kappa must exceed max{kappa_s, n}");
  }
  const int n_prime = static_cast<int>(std::ceil(kappa));
  const double mu = problem.mu;
  std::vector<LocalObjective> nodes;
  nodes.reserve(problem.nodes.size());
  for (const auto& node : problem.nodes) {
    const double synthetic = (n * mu * n_prime - n * node.Lbar_local()) / (n_prime - n);
    nodes.push_back(node.with_zero_samples(n_prime, synthetic));
  }
  return assemble(problem.family, std::move(nodes), problem.p);
}

}  // namespace vrdec
