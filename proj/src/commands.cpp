#include "rbfmorph/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rbfmorph/interpolant.hpp"
#include "rbfmorph/metrics.hpp"
#include "rbfmorph/rng.hpp"

namespace rbfmorph::cli {

namespace {

using Clock = std::chrono::steady_clock;

std::ifstream open_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing ") + what + " path");
  std::ifstream in(path);
  if (!in) throw UsageError(std::string("cannot open ") + what + " '" + path + "'");
  return in;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

// Writes to `path`, or to `fallback` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
  } else {
    write_file(path, text);
  }
}

SelectionConfig selection_config(const RunConfig& cfg, std::size_t nb, std::size_t m) {
  SelectionConfig sc;
  sc.tolerance = cfg.tolerance;
  sc.max_supports = cfg.max_supports.value_or(std::max<std::size_t>(3, nb));
  sc.m = m;
  sc.seed = cfg.seed;
  sc.workers = cfg.workers;
  return sc;
}

bool acceptable(const SelectionResult& r, const RunConfig& cfg) {
  if (r.converged) return true;
  return cfg.max_supports.has_value() && r.support.size() >= *cfg.max_supports;
}

void print_summary(std::ostream& out, const SelectionResult& r, std::size_t m) {
  out << "supports: " << r.support.size() << '\n'
      << "m: " << m << '\n'
      << "converged: " << (r.converged ? "yes" : "no") << '\n'
      << "iterations: " << r.history.records.size() << '\n'
      << "error_stage_kernel_evals: " << error_stage_cost(r.history) << '\n';
  if (r.history.final_sweep) {
    out << "global_max_error: " << format_real(r.history.final_sweep->max_error) << '\n'
        << "global_rms_error: " << format_real(r.history.final_sweep->rms_error) << '\n';
  }
  out << "t1_s: " << format_real(total_t1(r.history)) << '\n'
      << "t2_s: " << format_real(total_t2(r.history)) << '\n';
}

std::string label_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

}  // namespace

GroupCountEstimate auto_group_count(const BoundarySet& b, double tolerance, const KernelConfig& kcfg,
                                    std::size_t probe_limit) {
  const std::size_t nb = b.size();
  SelectionConfig probe;
  probe.tolerance = tolerance;
  probe.max_supports = std::clamp<std::size_t>(probe_limit, 3, std::max<std::size_t>(3, nb));
  const SelectionResult r = greedy_select(b, probe, kcfg);

  GroupCountEstimate est;
  est.probe_supports = r.support.size();
  if (r.converged) {
    est.estimated_supports = static_cast<double>(r.support.size());
  } else {
    // Least-squares fit of log10(E) against the support count over the later
    // half of the probe, extrapolated to the tolerance.
    std::vector<std::pair<double, double>> pts;
    for (const auto& rec : r.history.records) {
      if (rec.local_max_error > 0.0) {
        pts.emplace_back(static_cast<double>(rec.supports_before), std::log10(rec.local_max_error));
      }
    }
    pts.erase(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(pts.size() / 2));
    double estimate = static_cast<double>(nb);
    if (pts.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double n = static_cast<double>(pts.size());
      const double denom = n * sxx - sx * sx;
      if (denom > 0.0) {
        const double slope = (n * sxy - sx * sy) / denom;
        const double intercept = (sy - slope * sx) / n;
        if (slope < 0.0) estimate = (std::log10(tolerance) - intercept) / slope;
      }
    }
    est.estimated_supports =
        std::clamp(estimate, static_cast<double>(r.support.size()), static_cast<double>(nb));
  }
  const double m = std::round(1.5 * static_cast<double>(nb) / est.estimated_supports);
  est.m = static_cast<std::size_t>(std::clamp(m, 1.0, static_cast<double>(nb)));
  return est;
}

Problem load_problem(const RunConfig& cfg) {
  auto mesh_in = open_input(cfg.mesh_path, "mesh");
  Problem p;
  p.mesh = read_mesh(mesh_in);

  const bool from_file = !cfg.disp_path.empty();
  const bool analytic = !cfg.deform_mode.empty();
  if (from_file == analytic) throw UsageError("give exactly one of --disp or --deform-mode");

  DisplacementField field;
  if (from_file) {
    auto disp_in = open_input(cfg.disp_path, "displacement");
    field = prescribe(p.mesh.boundary, disp_in);
  } else {
    std::vector<Point3> pts;
    pts.reserve(p.mesh.boundary.size());
    for (std::size_t id : p.mesh.boundary) pts.push_back(p.mesh.nodes[id]);
    AnalyticDeformer deformer;
    if (cfg.deform_mode == "bend-twist") {
      deformer = cfg.bend_twist;
    } else if (cfg.deform_mode == "span-sine") {
      deformer = cfg.span_sine;
    } else if (cfg.deform_mode == "zero") {
      deformer = ZeroDeformation{};
    } else {
      throw UsageError("unknown --deform-mode '" + cfg.deform_mode + "'");
    }
    field = prescribe(pts, deformer);
  }
  p.boundary = make_boundary_set(p.mesh, std::move(field));
  return p;
}

SelectionRun run_selection(const BoundarySet& b, const RunConfig& cfg, std::ostream& log) {
  const KernelConfig kcfg(cfg.radius);
  if (cfg.algorithm == Algorithm::Greedy) {
    return {greedy_select(b, selection_config(cfg, b.size(), 1), kcfg), 1};
  }
  std::size_t m = 0;
  if (cfg.m) {
    m = *cfg.m;
  } else {
    const GroupCountEstimate est = auto_group_count(b, cfg.tolerance, kcfg);
    log << "auto m: " << est.m << " (estimated supports " << format_real(std::round(est.estimated_supports))
        << ", probe " << est.probe_supports << ")\n";
    m = est.m;
  }
  return {gcb_select(b, selection_config(cfg, b.size(), m), kcfg), m};
}

int cmd_select(const RunConfig& cfg, std::ostream& out) {
  const Problem p = load_problem(cfg);
  const SelectionRun run = run_selection(p.boundary, cfg, out);
  const SelectionResult& r = run.result;
  if (!cfg.history_path.empty()) write_file(cfg.history_path, write_history_csv(r.history));
  if (!cfg.out_path.empty()) write_file(cfg.out_path, write_support_csv(r.support));
  print_summary(out, r, run.m);
  return acceptable(r, cfg) ? 0 : 3;
}

int cmd_deform(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out_path.empty()) throw UsageError("deform needs --out for the deformed mesh");
  Problem p = load_problem(cfg);
  SelectionRun run = run_selection(p.boundary, cfg, out);
  SelectionResult& r = run.result;

  const auto t0 = Clock::now();
  std::vector<Point3> moved = deform_points(p.mesh.nodes, r.support, KernelConfig(cfg.radius), cfg.workers);
  r.history.t3_s = std::chrono::duration<double>(Clock::now() - t0).count();

  if (!cfg.history_path.empty()) write_file(cfg.history_path, write_history_csv(r.history));
  Mesh deformed = std::move(p.mesh);
  deformed.nodes = std::move(moved);
  write_file(cfg.out_path, write_mesh(deformed));

  print_summary(out, r, run.m);
  out << "t3_s: " << format_real(*r.history.t3_s) << '\n';
  return acceptable(r, cfg) ? 0 : 3;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out) {
  auto mesh_in = open_input(cfg.mesh_path, "mesh");
  const Mesh before = read_mesh(mesh_in);

  std::ostringstream report;
  report << "metric,subject,reference,value\n";
  const auto quality_rows = [&report](const std::string& subject, const Mesh& mesh) {
    const QualityReport q = quality_report(mesh.cells, mesh.nodes);
    report << "quality_cells," << subject << ",," << q.q.size() << '\n'
           << "quality_min," << subject << ",," << format_real(q.min) << '\n'
           << "quality_mean," << subject << ",," << format_real(q.mean) << '\n';
    for (std::size_t k = 0; k < q.histogram.size(); ++k) {
      report << "quality_hist_" << (k < 10 ? "0" : "") << k << ',' << subject << ",," << q.histogram[k] << '\n';
    }
  };
  quality_rows("before", before);
  if (!cfg.after_path.empty()) {
    auto after_in = open_input(cfg.after_path, "deformed mesh");
    const Mesh after = read_mesh(after_in);
    if (after.nodes.size() != before.nodes.size()) throw UsageError("meshes differ in node count");
    quality_rows("after", after);
  }

  std::vector<std::pair<std::string, SupportSet>> sets;
  for (const auto& path : cfg.support_paths) {
    auto in = open_input(path, "support set");
    sets.emplace_back(label_of(path), read_support_csv(in));
  }
  if (!cfg.random_seeds.empty() || !sets.empty()) {
    const BoundarySet b = make_boundary_set(before, DisplacementField(before.boundary.size()));
    for (const auto& [label, s] : sets) {
      for (std::size_t node : s.nodes) {
        if (node >= b.size()) throw UsageError("support set '" + label + "' references unknown boundary node");
      }
    }
    if (!cfg.random_seeds.empty()) {
      if (sets.empty()) throw UsageError("random baselines need at least one --supports set for their size");
      const std::size_t n = sets.front().second.size();
      for (std::uint64_t seed : cfg.random_seeds) {
        // Only the node positions matter for the divergence.
        Rng rng(seed);
        const std::vector<std::size_t> perm = rng.permutation(b.size());
        SupportSet s;
        for (std::size_t k = 0; k < n && k < perm.size(); ++k) {
          s.nodes.push_back(perm[k]);
          s.points.push_back(b.points[perm[k]]);
        }
        sets.emplace_back("random-" + std::to_string(seed), std::move(s));
      }
    }
    for (const auto& [la, sa] : sets) {
      for (const auto& [lb, sb] : sets) {
        report << "kl," << la << ',' << lb << ',' << format_real(kl_divergence(sa, sb, b)) << '\n';
      }
    }
  }
  emit(cfg.report_path, report.str(), out);
  return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  if (cfg.m_list.empty()) throw UsageError("bench needs a nonempty --m-list");
  const Problem p = load_problem(cfg);
  const KernelConfig kcfg(cfg.radius);
  const std::size_t nb = p.boundary.size();

  // Warm-up, excluded from the table.
  (void)gcb_select(p.boundary, selection_config(cfg, nb, cfg.m_list.front()), kcfg);

  std::ostringstream csv;
  csv << "m,n_supports,converged,iterations,t1_s,t2_s,t3_s,kernel_evals,full_scan_evals,cost_ratio\n";
  for (std::size_t m : cfg.m_list) {
    SelectionResult r = gcb_select(p.boundary, selection_config(cfg, nb, m), kcfg);
    const auto t0 = Clock::now();
    const auto moved = deform_points(p.mesh.nodes, r.support, kcfg, cfg.workers);
    const double t3 = std::chrono::duration<double>(Clock::now() - t0).count();
    const std::uint64_t evals = error_stage_cost(r.history);
    const std::uint64_t full = full_scan_cost(r.history, nb);
    const double ratio =
        full == 0 ? 0.0 : static_cast<double>(evals) * static_cast<double>(m) / static_cast<double>(full);
    csv << m << ',' << r.support.size() << ',' << (r.converged ? 1 : 0) << ',' << r.history.records.size() << ','
        << format_real(total_t1(r.history)) << ',' << format_real(total_t2(r.history)) << ',' << format_real(t3)
        << ',' << evals << ',' << full << ',' << format_real(ratio) << '\n';
    (void)moved;
  }
  emit(cfg.report_path, csv.str(), out);
  return 0;
}

int cmd_generate(const WingCaseParams& params, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) throw UsageError("generate needs --out");
  const Mesh mesh = generate_wing_case(params);
  write_file(out_path, write_mesh(mesh));
  const BendTwistParams bt = wing_bend_twist(params);
  out << "nodes: " << mesh.nodes.size() << '\n'
      << "boundary: " << mesh.boundary.size() << '\n'
      << "cells: " << mesh.cells.size() << '\n'
      << "bend-twist: --b " << format_real(bt.b) << " --x0 " << format_real(bt.x0) << " --y0 "
      << format_real(bt.y0) << '\n';
  return 0;
}

}  // namespace rbfmorph::cli
