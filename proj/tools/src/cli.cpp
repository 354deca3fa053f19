#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qlh/certify.hpp"
#include "qlh/error.hpp"
#include "qlh/grothendieck.hpp"
#include "qlh/instance_io.hpp"
#include "qlh/pauli.hpp"
#include "qlh/report_io.hpp"
#include "qlh/rng.hpp"
#include "qlh/rounding.hpp"
#include "qlh/version.hpp"

namespace qlh::cli {

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  double tol = 1e-6;
  int rank = 0;
  int n = 6;
  int edges = 10;
  int grid = hermite::kDefaultGrid;
  int threads = 0;
  int restarts = 0;
  int instances = 3;
  std::string rounder = "krivine";
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
  } else {
    write_text_file(cfg.output, text);
  }
}

void check_output_path(const RunConfig& cfg) {
  if (cfg.output.empty()) return;
  const std::filesystem::path p(cfg.output);
  const auto parent = p.parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw UsageError("output directory does not exist: " + parent.string());
}

Instance load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw UsageError("an instance file is required");
  if (!std::filesystem::is_regular_file(cfg.input))
    throw UsageError("instance file not found: " + cfg.input);
  return read_instance(cfg.input);
}

conic::SolverOptions solver_options(const RunConfig& cfg) {
  conic::SolverOptions s;
  s.tol = cfg.tol;
  return s;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.kind.empty()) throw UsageError("--kind is required");
  if (cfg.n < 2) throw UsageError("--n must be at least 2");
  if (cfg.edges < 0) throw UsageError("--edges must be nonnegative");
  Instance inst;
  const bool needs_rank = cfg.kind == "rank-projector" || cfg.kind == "sq-projector" ||
                          cfg.kind == "gap";
  if (needs_rank && (cfg.rank < 1 || cfg.rank > 3))
    throw UsageError("--rank must be 1, 2 or 3 for --kind " + cfg.kind);
  if (cfg.kind == "rank-projector") {
    inst = pauli::random_projector_instance(cfg.rank, cfg.n, cfg.edges, cfg.seed);
  } else if (cfg.kind == "sq-projector") {
    inst = pauli::random_sq_instance(cfg.rank, cfg.n, cfg.edges, cfg.seed);
  } else if (cfg.kind == "heisenberg") {
    const auto es = pauli::random_edges(cfg.n, cfg.edges, cfg.seed, 1.0, 1.0);
    inst = pauli::encode_heisenberg(es, cfg.n);
  } else if (cfg.kind == "max2sat") {
    const auto clauses = pauli::random_clauses(cfg.n, cfg.edges, cfg.seed);
    inst = pauli::encode_max2sat(clauses, cfg.n);
  } else if (cfg.kind == "ising-bipartite") {
    inst = pauli::random_ising_bipartite(cfg.n, cfg.edges, cfg.seed);
  } else if (cfg.kind == "gap") {
    inst = pauli::gap_instance(cfg.rank);
  } else {
    throw UsageError("unknown --kind " + cfg.kind);
  }
  const pauli::ValidationReport vr = pauli::validate_instance(inst);
  std::ostream& log = cfg.output.empty() ? err : out;
  log << "generated " << cfg.kind << ": n = " << inst.n << ", terms = " << inst.terms.size()
      << ", kind = " << to_string(inst.kind) << "\n"
      << vr.summary() << "\n";
  emit(cfg, instance_to_json(inst), out);
  return vr.ok ? kOk : kUsage;
}

int cmd_ratio(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_input(cfg);
  pauli::require_valid(inst);
  rounding::PipelineOptions po;
  po.solver = solver_options(cfg);
  po.threads = cfg.threads;
  po.product_restarts = cfg.restarts;
  const rounding::RatioReport rep = rounding::ratio_pipeline(inst, cfg.samples, cfg.seed, po);
  emit(cfg, ratio_report_to_json(rep), out);
  std::ostream& log = out;
  if (!cfg.output.empty()) {
    log << std::setprecision(6) << "sdp " << rep.sdp_value << "  mean energy " << rep.mean_energy
        << " +- " << rep.std_error << "  ratio vs sdp " << rep.ratio_vs_sdp;
    if (rep.ratio_vs_exact) log << "  ratio vs exact " << *rep.ratio_vs_exact;
    if (const auto w = rounding::worst_edge(rep))
      log << "  worst edge " << w->term << " ratio " << w->ratio << " +- " << w->ratio_std_error;
    log << "\n";
  }
  if (!rep.converged) {
    std::ostringstream os;
    os << "relaxation did not converge (primal " << rep.primal_residual << ", dual "
       << rep.dual_residual << "); report written with converged = false";
    throw ConvergenceError(os.str(), std::max(rep.primal_residual, rep.dual_residual));
  }
  return kOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  if (cfg.rank < 0 || cfg.rank > 3) throw UsageError("--rank must be 1, 2 or 3 (0 for all)");
  if (cfg.grid < 1) throw UsageError("--grid must be positive");
  std::vector<BoundsEntry> entries;
  const int lo = cfg.rank == 0 ? 1 : cfg.rank;
  const int hi = cfg.rank == 0 ? 3 : cfg.rank;
  std::ostringstream table;
  table << std::fixed << std::setprecision(5);
  for (int k = lo; k <= hi; ++k) {
    BoundsEntry e{hermite::certify_bounds_quadratic(k, cfg.grid, cfg.samples, cfg.seed,
                                                    cfg.threads),
                  hermite::bound_general(k)};
    table << "rank " << k << ": strictly quadratic certified " << e.quadratic.certified_min
          << " (closed form " << hermite::alpha_quadratic_closed(k) << "), observed "
          << e.quadratic.observed_min << " (conjectured " << e.quadratic.conjectured
          << "); general " << e.general.value << " (closed form "
          << hermite::alpha_general_closed(k) << ")\n";
    entries.push_back(std::move(e));
  }
  if (cfg.output.empty()) {
    out << bounds_to_json(entries);
  } else {
    write_text_file(cfg.output, bounds_to_json(entries));
    out << table.str();
  }
  return kOk;
}

int cmd_krivine(const RunConfig& cfg, std::ostream& out) {
  const Instance inst = load_input(cfg);
  grothendieck::Rounder r;
  if (cfg.rounder == "krivine") {
    r = grothendieck::Rounder::krivine;
  } else if (cfg.rounder == "hyperplane") {
    r = grothendieck::Rounder::hyperplane;
  } else {
    throw UsageError("--rounder must be krivine or hyperplane");
  }
  grothendieck::TracelessOptions to;
  to.solver = solver_options(cfg);
  to.threads = cfg.threads;
  const auto rep = grothendieck::generic_traceless_pipeline(inst, r, cfg.samples, cfg.seed, to);
  emit(cfg, traceless_report_to_json(rep), out);
  if (!cfg.output.empty()) {
    out << std::setprecision(6) << "sdp " << rep.sdp_value << "  mean energy " << rep.mean_energy
        << " +- " << rep.std_error;
    if (rep.lambda_max) out << "  lambda_max " << *rep.lambda_max;
    out << "\n";
  }
  if (!rep.converged)
    throw ConvergenceError("relaxation did not converge; report written with converged = false",
                           std::max(rep.primal_residual, rep.dual_residual));
  return kOk;
}

struct Empirical {
  double worst = std::numeric_limits<double>::infinity();
  double worst_se = 0.0;
  double mean_ratio = 0.0;
};

Empirical empirical(int k, bool strictly_quadratic, const RunConfig& cfg) {
  Empirical e;
  rounding::PipelineOptions po;
  po.solver = solver_options(cfg);
  po.threads = cfg.threads;
  po.exact_limit = 0;
  for (int t = 0; t < cfg.instances; ++t) {
    const std::uint64_t s = mix64(cfg.seed ^ (static_cast<std::uint64_t>(k) << 40) ^
                                  (strictly_quadratic ? 1ull << 32 : 0ull) ^
                                  static_cast<std::uint64_t>(t));
    const Instance inst = strictly_quadratic
                              ? pauli::random_sq_instance(k, cfg.n, cfg.edges, s)
                              : pauli::random_projector_instance(k, cfg.n, cfg.edges, s);
    const rounding::RatioReport rep = rounding::ratio_pipeline(inst, cfg.samples, s, po);
    if (!rep.converged)
      throw ConvergenceError("relaxation did not converge during reproduce",
                             std::max(rep.primal_residual, rep.dual_residual));
    if (const auto w = rounding::worst_edge(rep); w && w->ratio < e.worst) {
      e.worst = w->ratio;
      e.worst_se = w->ratio_std_error;
    }
    e.mean_ratio += rep.ratio_vs_sdp / cfg.instances;
  }
  return e;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& out) {
  if (cfg.instances < 1) throw UsageError("--instances must be positive");
  std::ostringstream csv;
  csv << "rank,general_bound,general_closed,quadratic_certified,quadratic_closed,"
         "quadratic_observed,quadratic_conjectured,empirical_general_worst_edge,"
         "empirical_general_worst_edge_se,empirical_general_mean_ratio,empirical_sq_worst_edge,"
         "empirical_sq_worst_edge_se,empirical_sq_mean_ratio,instances,n,edges,samples,seed,"
         "version\n";
  csv << std::fixed << std::setprecision(6);
  for (int k = 1; k <= 3; ++k) {
    const hermite::GeneralBound gb = hermite::bound_general(k);
    const hermite::QuadraticCertificate qc =
        hermite::certify_bounds_quadratic(k, cfg.grid, 0, cfg.seed, cfg.threads);
    const Empirical eg = empirical(k, false, cfg);
    const Empirical es = empirical(k, true, cfg);
    csv << k << ',' << gb.value << ',' << hermite::alpha_general_closed(k) << ','
        << qc.certified_min << ',' << hermite::alpha_quadratic_closed(k) << ','
        << qc.observed_min << ',' << qc.conjectured << ',' << eg.worst << ',' << eg.worst_se
        << ',' << eg.mean_ratio << ',' << es.worst << ',' << es.worst_se << ','
        << es.mean_ratio << ',' << cfg.instances << ',' << cfg.n << ',' << cfg.edges << ','
        << cfg.samples << ',' << cfg.seed << ',' << version_string() << '\n';
  }
  emit(cfg, csv.str(), out);
  if (!cfg.output.empty()) out << csv.str();
  return kOk;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "64-bit seed for every random draw");
  sub->add_option("--threads", cfg.threads,
                  "worker count (0 reads QLH_THREADS, default 1); results do not depend on it");
  sub->add_option("-o,--output", cfg.output, "output file (stdout when omitted)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Product-state approximations for 2-local qubit Hamiltonians"};
  app.set_version_flag("--version", std::string(version_string()));
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write a random or structured instance");
  gen->add_option("--kind", cfg.kind,
                  "rank-projector | sq-projector | heisenberg | max2sat | ising-bipartite | gap")
      ->required();
  gen->add_option("--rank", cfg.rank, "projector rank (1, 2, 3)");
  gen->add_option("--n", cfg.n, "qubits (variables for max2sat)");
  gen->add_option("--edges", cfg.edges, "terms (clauses for max2sat)");
  add_common(gen, cfg);

  auto* ratio = app.add_subcommand("ratio", "relaxation, rounding and per-edge ratios");
  ratio->add_option("input", cfg.input, "instance JSON")->required();
  ratio->add_option("--samples", cfg.samples, "rounding samples");
  ratio->add_option("--tol", cfg.tol, "solver tolerance");
  ratio->add_option("--restarts", cfg.restarts, "product-state ascent restarts (0 skips)");
  add_common(ratio, cfg);

  auto* bounds = app.add_subcommand("bounds", "numerical certification of the ratio constants");
  bounds->add_option("--rank", cfg.rank, "projector rank (0 for all three)")->required();
  bounds->add_option("--grid", cfg.grid, "barycentric grid density over S");
  bounds->add_option("--samples", cfg.samples, "Monte Carlo samples at the observed argmin");
  add_common(bounds, cfg);

  auto* kriv = app.add_subcommand("krivine", "traceless pipeline on the Pauli interaction graph");
  kriv->add_option("input", cfg.input, "instance JSON")->required();
  kriv->add_option("--samples", cfg.samples, "rounding samples");
  kriv->add_option("--tol", cfg.tol, "solver tolerance");
  kriv->add_option("--rounder", cfg.rounder, "krivine | hyperplane");
  add_common(kriv, cfg);

  auto* repro = app.add_subcommand("reproduce", "regenerate the ratio table as CSV");
  repro->add_option("--samples", cfg.samples, "rounding samples per instance");
  repro->add_option("--n", cfg.n, "qubits per random instance");
  repro->add_option("--edges", cfg.edges, "terms per random instance");
  repro->add_option("--instances", cfg.instances, "random instances per rank and family");
  repro->add_option("--grid", cfg.grid, "barycentric grid density over S");
  repro->add_option("--tol", cfg.tol, "solver tolerance");
  add_common(repro, cfg);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (cfg.samples < 1) throw UsageError("--samples must be positive");
    if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
    check_output_path(cfg);
    if (*gen) return cmd_generate(cfg, out, err);
    if (*ratio) return cmd_ratio(cfg, out);
    if (*bounds) return cmd_bounds(cfg, out);
    if (*kriv) return cmd_krivine(cfg, out);
    if (*repro) return cmd_reproduce(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const StructureError& e) {
    err << "structure error: " << e.what() << "\n";
    if (!e.witness().empty()) {
      err << "odd cycle:";
      for (const auto& v : e.witness()) err << ' ' << v;
      err << "\n";
    }
    return kStructure;
  } catch (const ConvergenceError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const InfeasibleError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qlh::cli
