#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "vrdec/experiment.hpp"

namespace vrdec {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const std::vector<VariantTrace>& traces, std::ostream& out) {
  if (traces.empty()) throw std::invalid_argument("no traces to write");
  out << "variant,iter,cum_rounds,cum_evals_per_node,subopt,mean_sq_dist,consensus\n";
  for (const auto& trace : traces) {
    for (const auto& row : trace.rows) {
      out << trace.variant << ',' << row.iter << ',' << row.cum_rounds << ','
          << row.cum_evals_per_node << ',' << format_double(row.subopt) << ','
          << format_double(row.mean_sq_dist) << ',' << format_double(row.consensus) << '\n';
    }
  }
}

void write_csv(const std::vector<VariantTrace>& traces, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(traces, out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace vrdec
