#include "vrdec/solver.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace vrdec {

namespace {

template <class F>
void for_each_node(int m, int threads, F&& f) {
  if (threads <= 1 || m <= 1) {
    for (int i = 0; i < m; ++i) f(i);
    return;
  }
  const int k = std::min(threads, m);
  std::exception_ptr failure;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(k));
  for (int t = 0; t < k; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < m; i += k) f(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(guard);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Vector row_of(const Stack& a, int i) { return a.row(i).transpose(); }

Stack full_grad_stack(SolverState& state, const Problem& problem, const Stack& points) {
  Stack out(state.m, state.p);
  for_each_node(state.m, state.threads, [&](int i) {
    out.row(i) = problem.nodes[i].full_grad(row_of(points, i), state.batch_evals[i]).transpose();
  });
  return out;
}

Stack vr_grad_stack(SolverState& state, const Problem& problem, const Stack& points) {
  Stack out(state.m, state.p);
  const int b = state.params.b;
  for_each_node(state.m, state.threads, [&](int i) {
    VRNodeState& node = state.vr[i];
    const auto batch = sample_batch(state.dists[i], b, node.sample_rng);
    out.row(i) = vr_gradient(node, problem.nodes[i], state.dists[i], row_of(points, i), batch).transpose();
  });
  return out;
}

void snapshot_coins(SolverState& state, const Problem& problem, const Stack& x_new) {
  const double prob = state.params.snapshot_prob;
  for_each_node(state.m, state.threads, [&](int i) {
    snapshot_update(state.vr[i], problem.nodes[i], row_of(x_new, i), prob);
  });
}

void track_dual(SolverState& state) {
  state.max_dual_violation = std::max(state.max_dual_violation, dual_violation(state.lam));
}

// EXTRA / VR-EXTRA:
//   x^{k+1} = x^k + W x^k - (x^{k-1} + W x^{k-1})/2 - alpha (g^k - g^{k-1})
// DIGing / VR-DIGing:
//   s^{k+1} = W s^k + g^k - g^{k-1},  x^{k+1} = W x^k - alpha s^{k+1}
// `grad` is g^k at x^k. The first call performs x^1 = x^0 - alpha g^0.
void tracking_update(SolverState& state, const MixingOperator& mixing, Stack grad) {
  const double alpha = state.params.alpha;
  const bool extra = is_extra_family(state.params.method.variant);
  if (state.iter == 0) {
    // x^0 is a consensus vector, so the U and V^2 terms vanish.
    state.x_prev = state.x;
    state.wx_prev = state.x;
    state.x -= alpha * state.grad_prev;
    if (!extra) state.s = state.grad_prev;
    return;
  }
  if (extra) {
    const Stack wx = mixing.gossip(state.x);
    Stack next = state.x + wx - 0.5 * (state.x_prev + state.wx_prev) - alpha * (grad - state.grad_prev);
    state.lam += 0.5 * (state.x - wx);
    state.x_prev = std::move(state.x);
    state.wx_prev = wx;
    state.x = std::move(next);
  } else {
    // s and x travel in the same round.
    Stack both(state.m, 2 * state.p);
    both << state.s, state.x;
    const Stack mixed = mixing.gossip(both);
    const auto ws = mixed.leftCols(state.p);
    const auto wx = mixed.rightCols(state.p);
    state.lam += state.x - wx;
    state.s = ws + grad - state.grad_prev;
    state.x = wx - alpha * state.s;
  }
  state.grad_prev = std::move(grad);
}

void finish_iteration(SolverState& state) {
  track_dual(state);
  ++state.iter;
  state.cum_rounds += static_cast<std::uint64_t>(state.rounds_per_iteration);
}

}  // namespace

std::uint64_t SolverState::evals(int node) const {
  if (!vr.empty()) return vr[node].evals.count;
  return batch_evals[node].count;
}

std::uint64_t SolverState::per_draw_evals(int node) const {
  if (!vr.empty()) return vr[node].evals.count - vr[node].real_draws;
  return batch_evals[node].count;
}

std::uint64_t SolverState::max_evals(bool per_draw) const {
  std::uint64_t out = 0;
  for (int i = 0; i < m; ++i) out = std::max(out, per_draw ? per_draw_evals(i) : evals(i));
  return out;
}

int gossips_per_iteration(Variant variant) {
  return variant == Variant::AccVrDiging ? 2 : 1;
}

double dual_violation(const Stack& lam) {
  if (lam.size() == 0) return 0.0;
  const double worst = lam.colwise().sum().cwiseAbs().maxCoeff();
  return worst / std::max(1.0, lam.norm());
}

SolverState make_solver(const Problem& problem, const MixingOperator& mixing,
                        const SolverParams& params, std::uint64_t seed, const Vector& x0,
                        int threads) {
  if (mixing.kind() != mixing_kind(params.method)) {
    throw std::invalid_argument("mixing operator " + to_string(mixing.kind()) + " does not match " +
                                to_string(params.method));
  }
  if (mixing.size() != problem.m()) {
    throw std::invalid_argument("graph has " + std::to_string(mixing.size()) + " nodes but the problem has " +
                                std::to_string(problem.m()));
  }
  if (!(params.alpha > 0.0) || params.b < 1) throw std::invalid_argument("invalid solver parameters");
  if (x0.size() != 0 && x0.size() != problem.p) throw std::invalid_argument("start vector has the wrong dimension");
  if (threads < 1) throw std::invalid_argument("thread count must be >= 1");

  SolverState state;
  state.params = params;
  state.m = problem.m();
  state.p = problem.p;
  state.threads = threads;
  state.rounds_per_iteration = gossips_per_iteration(params.method.variant) * mixing.rounds_per_gossip();

  const Vector start = x0.size() == 0 ? Vector::Zero(problem.p) : x0;
  state.x = start.transpose().replicate(state.m, 1);
  state.lam = Stack::Zero(state.m, state.p);

  const Variant v = params.method.variant;
  if (is_batch(v)) {
    state.batch_evals.assign(static_cast<std::size_t>(state.m), EvalCounter{});
    state.grad_prev = full_grad_stack(state, problem, state.x);
    return state;
  }

  state.vr.resize(static_cast<std::size_t>(state.m));
  state.dists.resize(static_cast<std::size_t>(state.m));
  state.grad_prev = Stack(state.m, state.p);
  for_each_node(state.m, threads, [&](int i) {
    state.dists[i] = build_distribution(problem.nodes[i]);
    state.vr[i] = make_vr_state(problem.nodes[i], start, seed, i);
    state.grad_prev.row(i) = state.vr[i].grad_at_w.transpose();
  });
  if (is_accelerated(v)) {
    state.z = state.x;
    state.wz = state.x;
    if (v == Variant::AccVrDiging) {
      state.wwz = state.x;
      state.wlam = state.lam;
    }
  }
  return state;
}

void batch_step(SolverState& state, const Problem& problem, const MixingOperator& mixing) {
  if (!is_batch(state.params.method.variant)) throw std::logic_error("batch_step on a stochastic method");
  Stack grad;
  if (state.iter > 0) grad = full_grad_stack(state, problem, state.x);
  tracking_update(state, mixing, std::move(grad));
  finish_iteration(state);
}

void vr_step(SolverState& state, const Problem& problem, const MixingOperator& mixing) {
  const Variant v = state.params.method.variant;
  if (is_batch(v) || is_accelerated(v)) throw std::logic_error("vr_step on a non-VR method");
  Stack grad;
  if (state.iter > 0) grad = vr_grad_stack(state, problem, state.x);
  tracking_update(state, mixing, std::move(grad));
  snapshot_coins(state, problem, state.x);
  finish_iteration(state);
}

void acc_step(SolverState& state, const Problem& problem, const MixingOperator& mixing) {
  const Variant v = state.params.method.variant;
  if (!is_accelerated(v)) throw std::logic_error("acc_step on a non-accelerated method");
  const SolverParams& prm = state.params;
  const double t1 = prm.theta1;
  const double t2 = prm.theta2;
  const double shrink = problem.mu * prm.alpha / t1;

  Stack w(state.m, state.p);
  for (int i = 0; i < state.m; ++i) w.row(i) = state.vr[i].w.transpose();
  state.y = t1 * state.z + t2 * w + (1.0 - t1 - t2) * state.x;
  const Stack grad = vr_grad_stack(state, problem, state.y);

  // U lambda and V^2 z from cached products.
  Stack u_lam;
  Stack vsq_z;
  if (v == Variant::AccVrExtra) {
    u_lam = state.lam;
    vsq_z = 0.5 * (state.z - state.wz);
  } else {
    u_lam = state.lam - state.wlam;
    vsq_z = state.z - state.wwz;
  }
  Stack z_next = (shrink * state.y + state.z - (prm.alpha * grad + u_lam + t1 * vsq_z) / t1) / (1.0 + shrink);

  Stack wz_next = mixing.gossip(z_next);
  if (v == Variant::AccVrExtra) {
    state.lam += t1 * 0.5 * (z_next - wz_next);
  } else {
    Stack wwz_next = mixing.gossip(wz_next);
    state.lam += t1 * (z_next - wz_next);
    state.wlam += t1 * (wz_next - wwz_next);
    state.wwz = std::move(wwz_next);
  }
  state.x = state.y + t1 * (z_next - state.z);
  state.z = std::move(z_next);
  state.wz = std::move(wz_next);
  snapshot_coins(state, problem, state.x);
  finish_iteration(state);
}

void step(SolverState& state, const Problem& problem, const MixingOperator& mixing) {
  const Variant v = state.params.method.variant;
  if (is_batch(v)) batch_step(state, problem, mixing);
  else if (is_accelerated(v)) acc_step(state, problem, mixing);
  else vr_step(state, problem, mixing);
}

}  // namespace vrdec
