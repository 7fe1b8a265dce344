#pragma once

// Command-line pipelines: each subcommand builds a report, writes it to the
// configured stream as JSON or CSV, and maps the outcome to an exit code
// (0 ok, 1 check failure, 2 input or solver error).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pruefer/bounds.hpp"
#include "pruefer/errors.hpp"
#include "pruefer/io.hpp"
#include "pruefer/lemma_audit.hpp"
#include "pruefer/oracle.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/sensitivity.hpp"
#include "pruefer/spectrum.hpp"

namespace pruefer::cli {

enum class Subcommand { classify, spectrum, check_bounds, scan_theta, audit_lemmas, sweep, oracle };
enum class Format { json, csv };

inline constexpr std::string_view kSubcommandNames[] = {
    "classify", "spectrum", "check-bounds", "scan-theta", "audit-lemmas", "sweep", "oracle"};

inline std::string_view subcommand_name(Subcommand s) {
  return kSubcommandNames[static_cast<std::size_t>(s)];
}

inline std::optional<Subcommand> parse_subcommand(std::string_view name) {
  for (std::size_t k = 0; k < std::size(kSubcommandNames); ++k) {
    if (kSubcommandNames[k] == name) return static_cast<Subcommand>(k);
  }
  return std::nullopt;
}

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitInputError = 2 };

struct RunConfig {
  Subcommand subcommand = Subcommand::spectrum;
  std::string potential_file;
  int n_max = 12;
  double tol = 1e-10;  ///< relative integrator tolerance
  std::uint64_t seed = 0;
  int count = 100;
  int jobs = 0;  ///< 0: hardware concurrency
  std::string out;  ///< empty: standard output
  Format format = Format::json;

  void validate() const {
    if (n_max < 1) throw InputError("--n-max must be at least 1");
    if (!(tol > 0.0 && tol < 1e-2)) throw InputError("--tol must lie in (0, 1e-2)");
    if (count < 1) throw InputError("--count must be at least 1");
    if (jobs < 0) throw InputError("--jobs must be nonnegative");
    if (subcommand != Subcommand::sweep && potential_file.empty()) {
      throw InputError("--potential is required for " + std::string(subcommand_name(subcommand)));
    }
  }

  IntegratorConfig integrator() const {
    IntegratorConfig c;
    c.rel_tol = tol;
    c.abs_tol = tol * 1e-2;
    return c;
  }

  SpectrumConfig spectrum_config() const {
    SpectrumConfig c;
    c.n_max = n_max;
    c.integrator = integrator();
    return c;
  }

  int worker_count() const {
    if (jobs > 0) return jobs;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
};

/// Diagnostics logger on standard error; level from PRUEFER_LOG (default warn).
inline std::shared_ptr<spdlog::logger> logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_color_mt("pruefer");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("PRUEFER_LOG")) {
      const std::string_view v(env);
      if (v == "error") l->set_level(spdlog::level::err);
      else if (v == "warn") l->set_level(spdlog::level::warn);
      else if (v == "info") l->set_level(spdlog::level::info);
      else if (v == "debug") l->set_level(spdlog::level::debug);
    }
    return l;
  }();
  return instance;
}

namespace detail {

inline io::Json header(const RunConfig& cfg) {
  io::Json j;
  j["subcommand"] = subcommand_name(cfg.subcommand);
  j["n_max"] = cfg.n_max;
  j["tol"] = cfg.tol;
  return j;
}

inline void emit(std::ostream& os, const io::Json& j) { io::dump_json(j, os); }

// ---------------------------------------------------------------------------
// Single-potential pipelines
// ---------------------------------------------------------------------------

inline int run_classify(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  const ShapeReport shape = classify(p);
  const HypothesisReport hyp = check_hypotheses(p, shape);
  if (cfg.format == Format::csv) {
    os << "shape,x0,q_sup,q0,q1,qmin,nonnegative,single_barrier,qstar,sup_abs_dq,deriv_bound_ok,"
          "deriv_margin,eligibility_threshold,all_pairs_condition,all_pairs_margin\n";
    os << (io::CsvRow() << shape_name(shape.shape) << shape.x0 << shape.q_sup << shape.q0 << shape.q1
                        << shape.qmin << hyp.nonnegative << hyp.single_barrier << hyp.qstar
                        << hyp.sup_abs_dq << hyp.deriv_bound_ok << hyp.deriv_margin
                        << hyp.eligibility_threshold << hyp.all_pairs_condition << hyp.all_pairs_margin);
    return kExitOk;
  }
  io::Json j = header(cfg);
  j["potential"] = io::to_json(p.spec());
  j["shape"] = io::to_json(shape);
  j["hypotheses"] = io::to_json(hyp);
  emit(os, j);
  return kExitOk;
}

inline int run_spectrum(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  const std::vector<Eigenvalue> eigs = spectrum(p, cfg.spectrum_config());
  logger()->info("computed {} eigenvalues", eigs.size());
  if (cfg.format == Format::csv) {
    io::write_csv(os, eigs);
    return kExitOk;
  }
  io::Json j = header(cfg);
  j["potential"] = io::to_json(p.spec());
  j["eigenvalues"] = io::to_json(eigs);
  emit(os, j);
  return kExitOk;
}

struct BoundSuite {
  ShapeReport shape;
  HypothesisReport hyp;
  std::vector<Eigenvalue> eigs;
  std::vector<BoundReport> reports;  ///< theorem21, ab_square, ab_ceil, hk_single_well, hl_lower

  /// A suite fails when a pair that its theorem covers violates the bound.
  bool failed() const {
    for (const BoundReport& r : reports) {
      if (!r.applicable) continue;
      if (r.kind == BoundKind::theorem21 && !hyp.all_hold()) continue;
      if (!r.all_eligible_pass) return true;
    }
    return false;
  }
};

inline BoundSuite bound_suite(const Potential& p, const SpectrumConfig& sc) {
  BoundSuite s;
  s.shape = classify(p);
  s.hyp = check_hypotheses(p, s.shape);
  s.eigs = spectrum(p, sc);
  const std::string id = describe(p.spec());
  s.reports.push_back(check_theorem21(s.eigs, s.hyp));
  for (BoundReport& r : check_ashbaugh_benguria(s.eigs, s.hyp.nonnegative)) s.reports.push_back(std::move(r));
  s.reports.push_back(check_horvath_kiss(s.eigs, s.shape));
  s.reports.push_back(check_huang_law_lower(s.eigs, s.shape.q_sup));
  for (BoundReport& r : s.reports) r.potential_id = id;
  return s;
}

inline int run_check_bounds(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  const BoundSuite s = bound_suite(p, cfg.spectrum_config());
  if (!s.hyp.all_hold()) {
    logger()->warn("hypotheses do not all hold; theorem21 results are informational");
  }
  const int code = s.failed() ? kExitCheckFailed : kExitOk;
  if (cfg.format == Format::csv) {
    io::write_csv_header_pairs(os);
    for (const BoundReport& r : s.reports) io::write_csv_rows(os, r);
    return code;
  }
  io::Json j = header(cfg);
  j["potential"] = io::to_json(p.spec());
  j["shape"] = io::to_json(s.shape);
  j["hypotheses"] = io::to_json(s.hyp);
  j["eigenvalues"] = io::to_json(s.eigs);
  j["index_map"] = "hl_lower: 0-based index k maps to n = k + 1; xi = q_sup / ((n-1)^2 pi^2)";
  io::Json reports = io::Json::array();
  for (const BoundReport& r : s.reports) reports.push_back(io::to_json(r));
  j["reports"] = reports;
  j["pass"] = code == kExitOk;
  emit(os, j);
  return code;
}

inline constexpr std::size_t kScanGrid = 200;

inline int run_scan_theta(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  const ShapeReport shape = classify(p);
  const std::vector<Eigenvalue> eigs = spectrum(p, cfg.spectrum_config());
  ScanOptions opts;
  opts.integrator = cfg.integrator();
  const MonotonicityScan scan = monotonicity_scan(p, shape.x0, eigs.back().z, kScanGrid, opts);
  const bool failed = scan.hypotheses_hold && !scan.violations.empty();
  if (!scan.violations.empty()) {
    logger()->warn("{} negative values of the angle derivative", scan.violations.size());
  }
  if (cfg.format == Format::csv) {
    io::write_csv(os, scan);
  } else {
    io::Json j = header(cfg);
    j["potential"] = io::to_json(p.spec());
    j["hypotheses"] = io::to_json(check_hypotheses(p, shape));
    j["z_max"] = eigs.back().z;
    j["scan"] = io::to_json(scan);
    j["pass"] = !failed;
    emit(os, j);
  }
  return failed ? kExitCheckFailed : kExitOk;
}

inline int run_audit_lemmas(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  AuditGrid grid;
  grid.n_max = std::max(cfg.n_max, 10);
  grid.integrator = cfg.integrator();
  AuditReport report = audit_potential(p, grid);
  const std::vector<AuditResult> scalars = audit_scalar_inequalities();
  const bool failed = !report.all_pass() ||
                      std::any_of(scalars.begin(), scalars.end(), [](const AuditResult& r) { return !r.pass; });
  if (cfg.format == Format::csv) {
    AuditReport with_scalars = report;
    with_scalars.results.insert(with_scalars.results.end(), scalars.begin(), scalars.end());
    io::write_csv(os, with_scalars);
  } else {
    io::Json j = header(cfg);
    j["potential"] = io::to_json(p.spec());
    j["hypotheses"] = io::to_json(check_hypotheses(p));
    j["audit"] = io::to_json(report);
    io::Json s = io::Json::array();
    for (const AuditResult& r : scalars) s.push_back(io::to_json(r));
    j["scalar"] = s;
    j["pass"] = !failed;
    emit(os, j);
  }
  return failed ? kExitCheckFailed : kExitOk;
}

/// Relative agreement required between the shooting solver and the oracle.
inline constexpr double kOracleAgreement = 1e-5;

inline int run_oracle(const RunConfig& cfg, const Potential& p, std::ostream& os) {
  const std::vector<FdEigenvalue> fd = fd_spectrum(p, FdConfig{}, cfg.n_max);
  const std::vector<Eigenvalue> eigs = spectrum(p, cfg.spectrum_config());
  bool failed = false;
  std::vector<double> rel(fd.size());
  for (std::size_t k = 0; k < fd.size(); ++k) {
    rel[k] = std::abs(fd[k].lambda - eigs[k].lambda) / eigs[k].lambda;
    if (!(rel[k] <= kOracleAgreement)) failed = true;
  }
  if (cfg.format == Format::csv) {
    os << "n,lambda_fd,lambda_prufer,relative_difference\n";
    for (std::size_t k = 0; k < fd.size(); ++k) {
      os << (io::CsvRow() << fd[k].n << fd[k].lambda << eigs[k].lambda << rel[k]);
    }
  } else {
    io::Json j = header(cfg);
    j["potential"] = io::to_json(p.spec());
    j["grid_n"] = FdConfig{}.grid_n;
    j["richardson"] = true;
    io::Json rows = io::Json::array();
    for (std::size_t k = 0; k < fd.size(); ++k) {
      io::Json r;
      r["n"] = fd[k].n;
      r["lambda_fd"] = fd[k].lambda;
      r["lambda_prufer"] = eigs[k].lambda;
      r["relative_difference"] = rel[k];
      rows.push_back(r);
    }
    j["eigenvalues"] = rows;
    j["pass"] = !failed;
    emit(os, j);
  }
  return failed ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

struct SweepItem {
  std::uint64_t seed = 0;
  std::string potential_id;
  PotentialSpec spec;
  std::optional<BoundSuite> suite;
  std::string error;
};

inline SweepItem sweep_item(std::uint64_t seed, const SpectrumConfig& sc) {
  SweepItem item;
  item.seed = seed;
  try {
    item.spec = sample_admissible(seed);
    const Potential p(item.spec);
    item.potential_id = describe(p.spec());
    item.suite = bound_suite(p, sc);
  } catch (const std::exception& e) {
    item.error = e.what();
  }
  return item;
}

/// Runs `count` seeds in ordered chunks on a worker pool; each finished chunk is
/// handed to `sink` in seed order, so output never depends on scheduling.
template <class Sink>
void sweep_chunks(const RunConfig& cfg, Sink&& sink) {
  const SpectrumConfig sc = cfg.spectrum_config();
  const int workers = cfg.worker_count();
  const std::size_t chunk = static_cast<std::size_t>(workers) * 4;
  const std::size_t total = static_cast<std::size_t>(cfg.count);
  for (std::size_t start = 0; start < total; start += chunk) {
    const std::size_t n = std::min(chunk, total - start);
    std::vector<SweepItem> items(n);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
      for (std::size_t k = next++; k < n; k = next++) items[k] = sweep_item(cfg.seed + start + k, sc);
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < std::min<int>(workers, static_cast<int>(n)); ++w) pool.emplace_back(work);
    }
    for (SweepItem& item : items) sink(item);
    logger()->info("sweep: {} of {} potentials done", start + n, total);
  }
}

inline int run_sweep(const RunConfig& cfg, std::ostream& os) {
  bool any_error = false;
  bool any_failure = false;
  std::size_t eligible = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  io::Json potentials = io::Json::array();

  if (cfg.format == Format::csv) {
    os << "seed,potential_id,n,m,ratio,bound,bound_kind,eligible,margin\n";
  }
  sweep_chunks(cfg, [&](const SweepItem& item) {
    if (!item.suite) {
      any_error = true;
      logger()->error("seed {}: {}", item.seed, item.error);
      if (cfg.format == Format::json) {
        io::Json e;
        e["seed"] = item.seed;
        e["potential_id"] = item.potential_id;
        e["error"] = item.error;
        potentials.push_back(e);
      }
      return;
    }
    const BoundSuite& s = *item.suite;
    if (s.failed()) any_failure = true;
    const BoundReport& t21 = s.reports.front();
    eligible += t21.eligible_count();
    min_margin = std::min(min_margin, t21.min_margin_eligible);
    if (cfg.format == Format::csv) {
      for (const BoundReport& r : s.reports) {
        for (const PairCheck& c : r.checks) {
          os << (io::CsvRow() << item.seed << item.potential_id << c.n << c.m << c.ratio << c.bound
                              << bound_kind_name(c.bound_kind) << c.eligible << c.margin);
        }
      }
      return;
    }
    io::Json e;
    e["seed"] = item.seed;
    e["potential"] = io::to_json(item.spec);
    e["potential_id"] = item.potential_id;
    e["hypotheses"] = io::to_json(s.hyp);
    std::vector<double> lambdas;
    for (const Eigenvalue& ev : s.eigs) lambdas.push_back(ev.lambda);
    e["lambda"] = lambdas;
    io::Json summaries = io::Json::array();
    for (const BoundReport& r : s.reports) {
      io::Json b;
      b["kind"] = bound_kind_name(r.kind);
      b["applicable"] = r.applicable;
      b["eligible_count"] = r.eligible_count();
      b["all_eligible_pass"] = r.all_eligible_pass;
      b["min_margin_eligible"] = r.min_margin_eligible;
      summaries.push_back(b);
    }
    e["bounds"] = summaries;
    e["pass"] = !s.failed();
    potentials.push_back(e);
  });

  if (cfg.format == Format::json) {
    io::Json j = header(cfg);
    j["seed"] = cfg.seed;
    j["count"] = cfg.count;
    io::Json summary;
    summary["theorem21_eligible_pairs"] = eligible;
    summary["theorem21_min_margin_eligible"] = min_margin;
    summary["errors"] = any_error;
    summary["pass"] = !any_failure && !any_error;
    j["summary"] = summary;
    j["potentials"] = potentials;
    emit(os, j);
  }
  if (any_error) return kExitInputError;
  return any_failure ? kExitCheckFailed : kExitOk;
}

inline int dispatch(const RunConfig& cfg, std::ostream& os) {
  if (cfg.subcommand == Subcommand::sweep) return run_sweep(cfg, os);
  const Potential p = io::load_potential(cfg.potential_file);
  logger()->debug("potential {}", describe(p.spec()));
  switch (cfg.subcommand) {
    case Subcommand::classify: return run_classify(cfg, p, os);
    case Subcommand::spectrum: return run_spectrum(cfg, p, os);
    case Subcommand::check_bounds: return run_check_bounds(cfg, p, os);
    case Subcommand::scan_theta: return run_scan_theta(cfg, p, os);
    case Subcommand::audit_lemmas: return run_audit_lemmas(cfg, p, os);
    case Subcommand::oracle: return run_oracle(cfg, p, os);
    case Subcommand::sweep: break;
  }
  return run_sweep(cfg, os);
}

}  // namespace detail

/// Runs one subcommand, writing the report to `os`. Errors are reported on
/// standard error through the logger and mapped to exit code 2.
inline int run(const RunConfig& cfg, std::ostream& os) {
  try {
    cfg.validate();
    return detail::dispatch(cfg, os);
  } catch (const InputError& e) {
    logger()->error("input error: {}", e.what());
  } catch (const PreconditionError& e) {
    logger()->error("precondition violated: {}", e.what());
  } catch (const DomainError& e) {
    logger()->error("domain error: {}", e.what());
  } catch (const SolverError& e) {
    logger()->error("solver error: {}", e.what());
  } catch (const IntegrationError& e) {
    logger()->error("integration error: {}", e.what());
  }
  return kExitInputError;
}

/// Runs one subcommand and writes the report to cfg.out (standard output when empty).
inline int run(const RunConfig& cfg) {
  if (cfg.out.empty()) return run(cfg, std::cout);
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    logger()->error("cannot open output file '{}'", cfg.out);
    return kExitInputError;
  }
  return run(cfg, file);
}

}  // namespace pruefer::cli
