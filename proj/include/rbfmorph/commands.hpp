#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbfmorph/deformers.hpp"
#include "rbfmorph/kernel.hpp"
#include "rbfmorph/mesh_io.hpp"
#include "rbfmorph/selection.hpp"
#include "rbfmorph/wing_case.hpp"

namespace rbfmorph::cli {

enum class Algorithm { Greedy, Gcb };

struct RunConfig {
  std::string mesh_path;
  std::string disp_path;    // MDK1-DISP source, or
  std::string deform_mode;  // "bend-twist" | "span-sine" | "zero"
  BendTwistParams bend_twist;
  SpanSineParams span_sine;

  double radius = 7.0;
  double tolerance = 1e-6;
  Algorithm algorithm = Algorithm::Gcb;
  std::optional<std::size_t> m;  // empty means "auto"
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_supports;
  std::size_t workers = 1;

  std::string history_path;
  std::string out_path;
  std::string report_path;

  // bench
  std::vector<std::size_t> m_list;

  // metrics
  std::string after_path;
  std::vector<std::string> support_paths;
  std::vector<std::uint64_t> random_seeds;
};

// Usage problems (missing inputs, conflicting options). Exit status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Probe-based choice of the group count: a short greedy run (up to
// `probe_limit` supports or tolerance) estimates N_c from the decay of the
// maximum error, then m = round(1.5 N_b / N_c) clamped to [1, N_b].
struct GroupCountEstimate {
  std::size_t m = 1;
  double estimated_supports = 0.0;
  std::size_t probe_supports = 0;
};
GroupCountEstimate auto_group_count(const BoundarySet& b, double tolerance, const KernelConfig& kcfg,
                                    std::size_t probe_limit = 200);

// Loads the mesh and the prescribed boundary field named by `cfg`.
struct Problem {
  Mesh mesh;
  BoundarySet boundary;
};
Problem load_problem(const RunConfig& cfg);

struct SelectionRun {
  SelectionResult result;
  std::size_t m = 1;  // group count actually used
};

// Resolves m ("auto" included) and runs the configured algorithm.
SelectionRun run_selection(const BoundarySet& b, const RunConfig& cfg, std::ostream& log);

// Each command returns the process exit status.
int cmd_select(const RunConfig& cfg, std::ostream& out);
int cmd_deform(const RunConfig& cfg, std::ostream& out);
int cmd_metrics(const RunConfig& cfg, std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);
int cmd_generate(const WingCaseParams& params, const std::string& out_path, std::ostream& out);

// Runs one of the above, mapping exceptions to a message on `err` and a
// nonzero status (2 for usage errors, 1 otherwise).
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err);

}  // namespace rbfmorph::cli

#include <ostream>

template <typename Fn>
int rbfmorph::cli::guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}
