#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrdec/config.hpp"
#include "vrdec/gossip.hpp"
#include "vrdec/reference.hpp"
#include "vrdec/solver.hpp"

namespace vrdec {

struct TraceRow {
  long iter = 0;
  std::uint64_t cum_rounds = 0;
  std::uint64_t cum_evals_per_node = 0;  // max over nodes
  double subopt = 0.0;        // sum_i f_(i)(xbar) - f*
  double mean_sq_dist = 0.0;  // |X - 1 x*^T|_F^2 / m
  double consensus = 0.0;     // |X - 1 xbar^T|_F^2 / m
};

struct VariantTrace {
  std::string variant;
  SolverParams params;
  bool padded = false;
  int rounds_per_iteration = 1;
  long iterations = 0;
  double max_dual_violation = 0.0;
  bool diverged = false;
  std::string error;
  std::vector<TraceRow> rows;
};

struct ExperimentResult {
  ReferenceSolution reference;
  std::vector<VariantTrace> traces;

  bool diverged() const;
};

// Raised by run_experiment when a variant trips the divergence guard. The
// partial result is attached.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, ExperimentResult partial)
      : std::runtime_error(what), result(std::move(partial)) {}
  ExperimentResult result;
};

// Metrics of a stacked iterate against the original (unpadded) problem.
TraceRow measure(const Stack& x, const Problem& problem, const ReferenceSolution& reference);

Problem build_problem(const ProblemConfig& config, int m);

// Base gossip matrix for a mixing kind: floor sqrt(2)/2 for plain DIGing,
// zero otherwise.
std::shared_ptr<const GossipMatrix> gossip_for(const Graph& graph, MixingKind kind);

// Runs one method to the stop rule. Does not throw on divergence; the trace
// is flagged instead.
VariantTrace run_variant(const ExperimentConfig& config, const VariantConfig& variant,
                         const Problem& problem, const Graph& graph,
                         const ReferenceSolution& reference);

// Every variant of the config. Throws DivergenceError after running all
// variants if any of them diverged.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Long format, header
//   variant,iter,cum_rounds,cum_evals_per_node,subopt,mean_sq_dist,consensus
// with floats printed to 17 significant digits.
void write_csv(const std::vector<VariantTrace>& traces, const std::filesystem::path& path);
void write_csv(const std::vector<VariantTrace>& traces, std::ostream& out);

}  // namespace vrdec
