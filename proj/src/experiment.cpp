#include "vrdec/experiment.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vrdec/data.hpp"

namespace vrdec {

namespace {

constexpr double kDivergenceFactor = 1e6;

bool rows_identical(const Stack& x) {
  for (int i = 1; i < x.rows(); ++i) {
    if (x.row(i) != x.row(0)) return false;
  }
  return true;
}

bool keep_row(const ExperimentConfig& config, long iter) {
  return iter <= config.full_trace_until || iter % config.thin_every == 0;
}

bool reached(const StopRule& stop, const TraceRow& row) {
  if (stop.target_mean_sq_dist && row.mean_sq_dist <= *stop.target_mean_sq_dist) return true;
  if (stop.target_subopt && row.subopt <= *stop.target_subopt) return true;
  return false;
}

}  // namespace

bool ExperimentResult::diverged() const {
  for (const auto& t : traces) {
    if (t.diverged) return true;
  }
  return false;
}

TraceRow measure(const Stack& x, const Problem& problem, const ReferenceSolution& reference) {
  const double m = static_cast<double>(x.rows());
  TraceRow row;
  const Vector xbar = x.colwise().mean().transpose();
  row.subopt = problem.value(xbar) - reference.f;
  row.mean_sq_dist = (x.rowwise() - reference.x.transpose()).squaredNorm() / m;
  // The mean of equal rows can differ from them in the last bit.
  row.consensus = rows_identical(x) ? 0.0 : (x.rowwise() - xbar.transpose()).squaredNorm() / m;
  return row;
}

Problem build_problem(const ProblemConfig& config, int m) {
  if (config.data) {
    LibsvmData data = load_libsvm(config.data->string());
    if (config.normalize) normalize_rows(data.samples);
    const auto shards = partition(data.samples, m, config.n, config.shuffle_seed);
    return make_problem(config.family, shards, data.p, config.mu);
  }
  if (config.family == LossFamily::Ridge) {
    return make_ridge(m, config.n, config.p, config.mu, config.seed, config.conditioning);
  }
  return make_logistic(synthetic_logistic(m, config.n, config.p, config.seed, config.label_noise,
                                          config.conditioning),
                       config.p, config.mu);
}

std::shared_ptr<const GossipMatrix> gossip_for(const Graph& graph, MixingKind kind) {
  const double floor = kind == MixingKind::Diging ? kDigingFloor : 0.0;
  return std::make_shared<const GossipMatrix>(spectral_shift(metropolis_weights(graph), floor));
}

VariantTrace run_variant(const ExperimentConfig& config, const VariantConfig& variant,
                         const Problem& problem, const Graph& graph,
                         const ReferenceSolution& reference) {
  const MixingOperator mixing = make_mixing(mixing_kind(variant.method), gossip_for(graph, mixing_kind(variant.method)));
  ParamOptions options;
  options.alpha_multiplier = variant.alpha_multiplier;
  options.b_override = variant.b;
  options.snapshot_prob_override = variant.snapshot_prob;
  options.auto_zero_pad = config.auto_zero_pad;
  options.acc_fallback = config.acc_fallback;
  const ResolvedRun run = resolve_run(variant.method, problem, mixing, options);

  VariantTrace trace;
  trace.variant = to_string(variant.method);
  trace.params = run.params;
  trace.padded = run.padded;

  SolverState state = make_solver(run.problem, mixing, run.params, config.seed, Vector(), config.threads);
  trace.rounds_per_iteration = state.rounds_per_iteration;
  const bool per_draw = config.evals == EvalConvention::PerDraw;
  auto snapshot = [&] {
    TraceRow row = measure(state.x, problem, reference);
    row.iter = state.iter;
    row.cum_rounds = state.cum_rounds;
    row.cum_evals_per_node = state.max_evals(per_draw);
    return row;
  };

  const long max_iters = variant.max_iters.value_or(config.stop.max_iters);
  TraceRow row = snapshot();
  trace.rows.push_back(row);
  const double initial = std::abs(row.subopt);
  bool done = reached(config.stop, row);
  while (!done && state.iter < max_iters) {
    step(state, run.problem, mixing);
    row = snapshot();
    const bool blown = !std::isfinite(row.subopt) || !std::isfinite(row.mean_sq_dist) ||
                       row.subopt > kDivergenceFactor * std::max(initial, std::numeric_limits<double>::min());
    if (blown) {
      trace.rows.push_back(row);
      trace.diverged = true;
      std::ostringstream msg;
      msg << trace.variant << " diverged at iteration " << row.iter << ": subopt " << row.subopt
          << " exceeds " << kDivergenceFactor << " x the initial " << initial << " (alpha "
          << run.params.alpha << ")";
      trace.error = msg.str();
      break;
    }
    done = reached(config.stop, row);
    if (done || state.iter == max_iters || keep_row(config, state.iter)) trace.rows.push_back(row);
  }
  trace.iterations = state.iter;
  trace.max_dual_violation = state.max_dual_violation;
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const Graph graph = build_graph(parse_graph_spec(config.graph));
  const Problem problem = build_problem(config.problem, graph.size());
  ExperimentResult result;
  result.reference = reference_solution(problem, config.reference_tol);
  for (const auto& variant : config.variants) {
    result.traces.push_back(run_variant(config, variant, problem, graph, result.reference));
  }
  if (result.diverged()) {
    std::string what;
    for (const auto& t : result.traces) {
      if (t.diverged) what += (what.empty() ? "" : "; ") + t.error;
    }
    throw DivergenceError(what, std::move(result));
  }
  return result;
}

}  // namespace vrdec
