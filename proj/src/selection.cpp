#include "rbfmorph/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "rbfmorph/errors.hpp"
#include "rbfmorph/parallel.hpp"
#include "rbfmorph/rng.hpp"

namespace rbfmorph {

void BoundarySet::validate() const {
  if (points.empty()) throw InvalidArgument("boundary set is empty");
  if (indices.size() != points.size() || disp.size() != points.size()) {
    throw InvalidArgument("boundary set: indices, points and displacements differ in length");
  }
  std::unordered_set<std::size_t> seen;
  seen.reserve(indices.size());
  for (std::size_t id : indices) {
    if (!seen.insert(id).second) throw InvalidArgument("boundary set: duplicate node id " + std::to_string(id));
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline double node_error(std::size_t j, const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg) {
  const Vec3Displacement f = evaluate_displacement_unchecked(b.points[j], s, cfg);
  const Vec3Displacement& d = b.disp[j];
  return norm({d.dx - f.dx, d.dy - f.dy, d.dz - f.dz});
}

// errors[k] = error of nodes[k]. Each entry is computed independently, so the
// values are identical for any worker count.
void scan_errors(std::span<const std::size_t> nodes, const BoundarySet& b, const SupportSet& s,
                 const KernelConfig& cfg, std::size_t workers, std::vector<double>& errors) {
  errors.resize(nodes.size());
  parallel_for(nodes.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) errors[k] = node_error(nodes[k], b, s, cfg);
  });
}

// "a beats b": larger error, then lower index.
inline bool ranks_above(double ea, std::size_t ia, double eb, std::size_t ib) {
  return ea > eb || (ea == eb && ia < ib);
}

GlobalSweep sweep_all(const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg, std::size_t workers) {
  const auto t0 = Clock::now();
  std::vector<std::size_t> all(b.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  std::vector<double> errors;
  scan_errors(all, b, s, cfg, workers, errors);
  GlobalSweep g;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < errors.size(); ++j) {
    if (ranks_above(errors[j], j, g.max_error, g.node_of_max) || j == 0) {
      g.max_error = errors[j];
      g.node_of_max = j;
    }
    sum_sq += errors[j] * errors[j];
  }
  g.rms_error = std::sqrt(sum_sq / static_cast<double>(errors.size()));
  g.kernel_evals = static_cast<std::uint64_t>(b.size()) * s.size();
  g.t_s = seconds_since(t0);
  return g;
}

void validate_inputs(const BoundarySet& b, const SelectionConfig& cfg, std::size_t m) {
  b.validate();
  if (!(cfg.tolerance > 0.0)) throw InvalidArgument("selection tolerance must be positive");
  if (cfg.max_supports < 3) throw InvalidArgument("max_supports must be at least 3");
  if (m < 1 || m > b.size()) {
    throw InvalidGroupCount("group count " + std::to_string(m) + " outside [1, " + std::to_string(b.size()) + "]");
  }
}

enum : std::uint8_t { kEligible = 0, kSupport = 1, kRejected = 2 };

// Shared state of one selection run: the growing interpolant, per-node status
// and the history being recorded.
class SelectionRun {
 public:
  SelectionRun(const BoundarySet& b, const SelectionConfig& cfg, const KernelConfig& kcfg)
      : b_(b), cfg_(cfg), kcfg_(kcfg), builder_(kcfg), status_(b.size(), kEligible) {
    result_.history.seed = cfg.seed;
  }

  void add_seeds() {
    for (std::size_t node : seed_supports(b_)) {
      const auto r = builder_.try_add(node, b_.points[node], b_.disp[node]);
      if (r == InterpolantBuilder::AddResult::NearDuplicate) {
        throw DuplicateNodes("seed node " + std::to_string(node) + " coincides with another seed");
      }
      if (r == InterpolantBuilder::AddResult::NotPositiveDefinite) {
        throw NotPositiveDefinite("seed node " + std::to_string(node) + " cannot be factored");
      }
      status_[node] = kSupport;
    }
    builder_.solve();
    after_solve();
  }

  std::size_t support_count() const { return builder_.support().size(); }
  bool at_capacity() const { return support_count() >= std::min(cfg_.max_supports, b_.size()); }

  struct Visit {
    bool added = false;
    double local_max = 0.0;
  };

  // Scans `nodes`, records one iteration and adds the best eligible node if
  // its error exceeds the tolerance.
  Visit visit(std::size_t iter, std::size_t group, std::span<const std::size_t> nodes) {
    IterationRecord rec;
    rec.iter = iter;
    rec.group = group;
    rec.supports_before = support_count();

    auto t0 = Clock::now();
    scan_errors(nodes, b_, builder_.support(), kcfg_, cfg_.workers, errors_);
    rec.kernel_evals = static_cast<std::uint64_t>(nodes.size()) * support_count();
    cum_evals_ += rec.kernel_evals;
    rec.cum_kernel_evals = cum_evals_;

    // Local maximum over non-support nodes; candidates are the eligible ones
    // above tolerance.
    bool have_max = false;
    std::size_t max_node = *std::min_element(nodes.begin(), nodes.end());
    double max_err = 0.0;
    candidates_.clear();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const std::size_t j = nodes[k];
      if (status_[j] == kSupport) continue;
      const double e = errors_[k];
      if (!have_max || ranks_above(e, j, max_err, max_node)) {
        max_err = e;
        max_node = j;
        have_max = true;
      }
      if (status_[j] == kEligible && e > cfg_.tolerance) candidates_.push_back({e, j});
    }
    rec.t1_s = seconds_since(t0);
    rec.local_max_error = max_err;
    rec.node = max_node;

    if (max_err > cfg_.tolerance) {
      std::sort(candidates_.begin(), candidates_.end(), [](const auto& a, const auto& c) {
        return ranks_above(a.first, a.second, c.first, c.second);
      });
      t0 = Clock::now();
      for (const auto& [e, j] : candidates_) {
        const auto r = builder_.try_add(j, b_.points[j], b_.disp[j]);
        if (r != InterpolantBuilder::AddResult::Added) {
          status_[j] = kRejected;
          continue;
        }
        status_[j] = kSupport;
        builder_.solve();
        rec.added = true;
        rec.node = j;
        break;
      }
      rec.t2_s = seconds_since(t0);
      if (rec.added) after_solve();
    }

    result_.history.records.push_back(rec);
    return {rec.added, max_err};
  }

  SelectionResult finish() {
    result_.history.final_sweep = sweep_all(b_, builder_.support(), kcfg_, cfg_.workers);
    result_.converged = result_.history.final_sweep->max_error <= cfg_.tolerance;
    result_.support = builder_.support();
    return std::move(result_);
  }

 private:
  void after_solve() {
    if (cfg_.check_support_residual) {
      result_.history.max_support_residual =
          std::max(result_.history.max_support_residual, builder_.max_support_residual());
    }
    if (cfg_.snapshot_every > 0 && support_count() % cfg_.snapshot_every == 0) {
      const GlobalSweep g = sweep_all(b_, builder_.support(), kcfg_, cfg_.workers);
      result_.history.snapshots.push_back({support_count(), g.max_error, g.rms_error});
    }
  }

  const BoundarySet& b_;
  const SelectionConfig& cfg_;
  KernelConfig kcfg_;
  InterpolantBuilder builder_;
  std::vector<std::uint8_t> status_;
  std::vector<double> errors_;
  std::vector<std::pair<double, std::size_t>> candidates_;
  std::uint64_t cum_evals_ = 0;
  SelectionResult result_;
};

}  // namespace

GroupPartition partition_boundary(const BoundarySet& b, std::size_t m, std::uint64_t seed) {
  const std::size_t n = b.size();
  if (m < 1 || m > n) {
    throw InvalidGroupCount("group count " + std::to_string(m) + " outside [1, " + std::to_string(n) + "]");
  }
  GroupPartition part;
  part.m = m;
  part.seed = seed;
  part.groups.resize(m);
  for (auto& g : part.groups) g.reserve(n / m + 1);
  Rng rng(seed);
  const std::vector<std::size_t> perm = rng.permutation(n);
  for (std::size_t i = 0; i < n; ++i) part.groups[i % m].push_back(perm[i]);
  return part;
}

double interpolation_error(std::size_t j, const BoundarySet& b, const SupportSet& s, const KernelConfig& cfg) {
  if (j >= b.size()) throw UnknownIndex("boundary index " + std::to_string(j) + " out of range");
  if (s.empty()) throw EmptySupportSet("interpolation_error: support set is empty");
  return node_error(j, b, s, cfg);
}

GroupMax group_arg_max_error(std::span<const std::size_t> group, const BoundarySet& b, const SupportSet& s,
                             const KernelConfig& cfg, std::uint64_t& kernel_evals, std::size_t workers) {
  if (group.empty()) throw EmptyGroup("group_arg_max_error: group is empty");
  if (s.empty()) throw EmptySupportSet("group_arg_max_error: support set is empty");
  for (std::size_t j : group) {
    if (j >= b.size()) throw UnknownIndex("boundary index " + std::to_string(j) + " out of range");
  }
  std::vector<double> errors;
  scan_errors(group, b, s, cfg, workers, errors);
  GroupMax best{group[0], errors[0]};
  for (std::size_t k = 1; k < group.size(); ++k) {
    if (ranks_above(errors[k], group[k], best.error, best.node)) best = {group[k], errors[k]};
  }
  kernel_evals += static_cast<std::uint64_t>(group.size()) * s.size();
  return best;
}

std::array<std::size_t, 3> seed_supports(const BoundarySet& b) {
  const std::size_t n = b.size();
  if (n < 3) throw TooFewBoundaryNodes("need at least 3 boundary nodes, have " + std::to_string(n));

  std::array<std::size_t, 3> seeds{};
  double best = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double mag = norm(b.disp[j]);
    if (mag > best) {
      best = mag;
      seeds[0] = j;
    }
  }

  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> chosen(n, false);
  chosen[seeds[0]] = true;
  for (std::size_t pick = 1; pick < 3; ++pick) {
    const Point3& last = b.points[seeds[pick - 1]];
    double far = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      nearest[j] = std::min(nearest[j], distance(b.points[j], last));
      if (!chosen[j] && nearest[j] > far) {
        far = nearest[j];
        seeds[pick] = j;
      }
    }
    chosen[seeds[pick]] = true;
  }
  return seeds;
}

SelectionResult gcb_select(const BoundarySet& b, const SelectionConfig& cfg, const KernelConfig& kcfg) {
  validate_inputs(b, cfg, cfg.m);
  const GroupPartition part = partition_boundary(b, cfg.m, cfg.seed);

  SelectionRun run(b, cfg, kcfg);
  run.add_seeds();

  std::size_t quiet = 0;
  bool blocked = false;
  for (std::size_t k = 0; !run.at_capacity(); ++k) {
    const std::size_t g = k % cfg.m;
    const auto v = run.visit(k, g, part.groups[g]);
    if (v.added) {
      quiet = 0;
      blocked = false;
      continue;
    }
    ++quiet;
    blocked = blocked || v.local_max > cfg.tolerance;
    if (quiet >= cfg.m) {
      if (blocked) {
        throw SelectionStalled("no addable candidate while the interpolation error exceeds tolerance");
      }
      break;
    }
  }
  return run.finish();
}

SelectionResult greedy_select(const BoundarySet& b, const SelectionConfig& cfg, const KernelConfig& kcfg) {
  validate_inputs(b, cfg, 1);
  std::vector<std::size_t> all(b.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;

  SelectionRun run(b, cfg, kcfg);
  run.add_seeds();
  for (std::size_t k = 0; !run.at_capacity(); ++k) {
    const auto v = run.visit(k, 0, all);
    if (v.added) continue;
    if (v.local_max > cfg.tolerance) {
      throw SelectionStalled("no addable candidate while the interpolation error exceeds tolerance");
    }
    break;
  }
  return run.finish();
}

SupportSet random_select(const BoundarySet& b, std::size_t n, std::uint64_t seed, const KernelConfig& kcfg) {
  b.validate();
  if (n < 3 || n > b.size()) {
    throw InvalidCount("random_select: count " + std::to_string(n) + " outside [3, " + std::to_string(b.size()) +
                       "]");
  }
  Rng rng(seed);
  const std::vector<std::size_t> perm = rng.permutation(b.size());
  InterpolantBuilder builder(kcfg);
  for (std::size_t j : perm) {
    if (builder.support().size() == n) break;
    builder.try_add(j, b.points[j], b.disp[j]);
  }
  if (builder.support().size() < n) {
    throw InvalidCount("random_select: only " + std::to_string(builder.support().size()) +
                       " nodes could be factored");
  }
  builder.solve();
  return builder.support();
}

std::uint64_t error_stage_cost(const SelectionHistory& history) {
  std::uint64_t total = 0;
  for (const auto& r : history.records) total += r.kernel_evals;
  return total;
}

std::uint64_t full_scan_cost(const SelectionHistory& history, std::size_t boundary_count) {
  std::uint64_t total = 0;
  for (const auto& r : history.records) total += static_cast<std::uint64_t>(boundary_count) * r.supports_before;
  return total;
}

double total_t1(const SelectionHistory& history) {
  double t = 0.0;
  for (const auto& r : history.records) t += r.t1_s;
  return t;
}

double total_t2(const SelectionHistory& history) {
  double t = 0.0;
  for (const auto& r : history.records) t += r.t2_s;
  return t;
}

}  // namespace rbfmorph
