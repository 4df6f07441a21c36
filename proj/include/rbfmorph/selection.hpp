#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "rbfmorph/geometry.hpp"
#include "rbfmorph/interpolant.hpp"
#include "rbfmorph/kernel.hpp"

namespace rbfmorph {

// Moving-wall nodes with their prescribed displacements. Everything in the
// selection and metrics modules addresses nodes by their position in this
// set ("boundary index"); `indices` maps a position back to the mesh node id.
struct BoundarySet {
  std::vector<std::size_t> indices;
  std::vector<Point3> points;
  DisplacementField disp;

  std::size_t size() const noexcept { return points.size(); }

  // Throws InvalidArgument unless the three sequences agree, are nonempty and
  // the ids are unique.
  void validate() const;
};

struct GroupPartition {
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> groups;
  std::uint64_t seed = 0;
};

struct SelectionConfig {
  double tolerance = 1e-6;     // E*
  std::size_t max_supports = std::numeric_limits<std::size_t>::max();  // N_c^max
  std::size_t m = 1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  // When nonzero, a full boundary sweep is recorded every time the support
  // count reaches a multiple of this value. Not part of the timed stages.
  std::size_t snapshot_every = 0;
  // Record the largest support-node residual seen after any solve.
  bool check_support_residual = false;
};

struct IterationRecord {
  std::size_t iter = 0;
  std::size_t group = 0;
  std::size_t node = 0;             // added node, or the local arg-max when nothing was added
  double local_max_error = 0.0;
  std::uint64_t kernel_evals = 0;
  std::uint64_t cum_kernel_evals = 0;
  double t1_s = 0.0;                // error stage
  double t2_s = 0.0;                // factor update and weight solve
  std::size_t supports_before = 0;  // support count the errors were computed with
  bool added = false;
};

struct GlobalSweep {
  std::size_t node_of_max = 0;
  double max_error = 0.0;
  double rms_error = 0.0;
  std::uint64_t kernel_evals = 0;
  double t_s = 0.0;
};

struct ErrorSnapshot {
  std::size_t supports = 0;
  double max_error = 0.0;
  double rms_error = 0.0;
};

struct SelectionHistory {
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  std::optional<GlobalSweep> final_sweep;
  std::optional<double> t3_s;
  std::vector<ErrorSnapshot> snapshots;
  double max_support_residual = 0.0;
};

struct SelectionResult {
  SupportSet support;
  SelectionHistory history;
  bool converged = false;
};

// Seeded uniform permutation dealt round-robin into m groups.
// Throws InvalidGroupCount unless 1 <= m <= N_b.
GroupPartition partition_boundary(const BoundarySet& b, std::size_t m, std::uint64_t seed);

// |prescribed_j - F(r_j)|, Euclidean over the three components.
double interpolation_error(std::size_t j, const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg);

struct GroupMax {
  std::size_t node = 0;
  double error = 0.0;
};

// Arg-max of the interpolation error over `group`, ties to the lowest index.
// Adds card(group) * |S| to `kernel_evals`.
GroupMax group_arg_max_error(std::span<const std::size_t> group, const BoundarySet& b, const SupportSet& s,
                             const KernelConfig& cfg, std::uint64_t& kernel_evals, std::size_t workers = 1);

// Largest-displacement node, then two farthest-point picks.
std::array<std::size_t, 3> seed_supports(const BoundarySet& b);

// Grouping-circular greedy selection: each iteration scans one group in turn.
SelectionResult gcb_select(const BoundarySet& b, const SelectionConfig& cfg, const KernelConfig& kcfg);

// Traditional greedy selection (global arg-max each iteration). cfg.m is ignored.
SelectionResult greedy_select(const BoundarySet& b, const SelectionConfig& cfg, const KernelConfig& kcfg);

// n distinct nodes drawn without replacement, weights solved. Candidates that
// cannot be factored are skipped in favour of the next draw.
SupportSet random_select(const BoundarySet& b, std::size_t n, std::uint64_t seed, const KernelConfig& kcfg);

// Sum of per-iteration error-stage kernel evaluations.
std::uint64_t error_stage_cost(const SelectionHistory& history);

// Sum over iterations of N_b * |S_k|: the error-stage cost a full scan would
// have had on the same support-count schedule.
std::uint64_t full_scan_cost(const SelectionHistory& history, std::size_t boundary_count);

double total_t1(const SelectionHistory& history);
double total_t2(const SelectionHistory& history);

}  // namespace rbfmorph
