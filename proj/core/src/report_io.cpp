#include "qlh/report_io.hpp"

#include <json.hpp>

#include "qlh/version.hpp"

namespace qlh {

namespace {

using ojson = nlohmann::ordered_json;

ojson vec3(const Vector3d& v) { return ojson::array({v(0), v(1), v(2)}); }

ojson state_json(const ProductState& s) {
  ojson out = ojson::array();
  for (const auto& t : s.thetas) out.push_back(vec3(t));
  return out;
}

ojson optional_number(const std::optional<double>& x) {
  return x ? ojson(*x) : ojson(nullptr);
}

ojson solver_json(double tol, double primal, double dual, double min_eig, int iterations,
                  bool converged) {
  ojson s;
  s["tol"] = tol;
  s["primal_residual"] = primal;
  s["dual_residual"] = dual;
  s["min_eigenvalue"] = min_eig;
  s["iterations"] = iterations;
  s["converged"] = converged;
  return s;
}

std::string dump(const ojson& j, int indent) { return j.dump(indent) + "\n"; }

}  // namespace

std::string solution_to_json(const sdp::MomentSolution& sol, double tol, int indent) {
  ojson j;
  j["version"] = std::string(version_string());
  j["objective"] = sol.objective;
  j["dual_bound"] = sol.dual_bound;
  j["dim"] = sol.M.rows();
  ojson m = ojson::array();
  for (Eigen::Index r = 0; r < sol.M.rows(); ++r)
    for (Eigen::Index c = 0; c < sol.M.cols(); ++c) m.push_back(sol.M(r, c));
  j["M"] = std::move(m);
  ojson rho = ojson::array();
  for (const auto& x : sol.rho) {
    ojson re = ojson::array(), im = ojson::array();
    for (int r = 0; r < 4; ++r) {
      ojson rr = ojson::array(), ir = ojson::array();
      for (int c = 0; c < 4; ++c) {
        rr.push_back(x(r, c).real());
        ir.push_back(x(r, c).imag());
      }
      re.push_back(rr);
      im.push_back(ir);
    }
    rho.push_back({{"re", re}, {"im", im}});
  }
  j["rho"] = std::move(rho);
  j["residuals"] = solver_json(tol, sol.primal_residual, sol.dual_residual, sol.min_eigenvalue,
                               sol.iterations, sol.converged);
  j["iterations"] = sol.iterations;
  return dump(j, indent);
}

std::string ratio_report_to_json(const rounding::RatioReport& r, int indent) {
  ojson j;
  j["version"] = std::string(version_string());
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["n"] = r.n;
  j["kind"] = r.kind;
  j["terms"] = r.terms;
  j["mean_energy"] = r.mean_energy;
  j["std_error"] = r.std_error;
  j["sdp_value"] = r.sdp_value;
  j["sdp_dual_bound"] = r.sdp_dual_bound;
  j["lambda_max"] = optional_number(r.lambda_max);
  j["ratio_vs_sdp"] = r.ratio_vs_sdp;
  j["ratio_vs_exact"] = optional_number(r.ratio_vs_exact);
  j["best_product_found"] = optional_number(r.best_product);
  j["best_sample_energy"] = r.best_sample_energy;
  j["best_sample_state"] = state_json(r.best_sample_state);
  ojson edges = ojson::array();
  for (const auto& e : r.edges) {
    ojson x;
    x["term"] = e.term;
    x["sdp_value"] = e.sdp_value;
    x["mean"] = e.mean;
    x["std_error"] = e.std_error;
    x["skipped"] = e.skipped;
    x["ratio"] = e.skipped ? ojson(nullptr) : ojson(e.ratio);
    x["ratio_std_error"] = e.skipped ? ojson(nullptr) : ojson(e.ratio_std_error);
    edges.push_back(std::move(x));
  }
  j["edges"] = std::move(edges);
  j["clip_tol"] = r.clip_tol;
  j["gram_rank"] = r.gram_rank;
  j["v0_norm_deviation"] = r.v0_norm_deviation;
  j["solver"] = solver_json(r.solver_tol, r.primal_residual, r.dual_residual, r.min_eigenvalue,
                            r.iterations, r.converged);
  return dump(j, indent);
}

std::string traceless_report_to_json(const grothendieck::TracelessReport& r, int indent) {
  ojson j;
  j["version"] = std::string(version_string());
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["n"] = r.n;
  j["kind"] = "traceless";
  j["terms"] = r.terms;
  j["rounder"] = r.rounder;
  j["bipartite"] = r.bipartite;
  j["active_vertices"] = r.active_vertices;
  j["sides"] = ojson::array({r.left, r.right});
  j["mean_energy"] = r.mean_energy;
  j["std_error"] = r.std_error;
  j["classical_objective"] = r.classical_objective;
  j["classical_std_error"] = r.classical_std_error;
  j["sdp_value"] = r.sdp_value;
  j["sdp_dual_bound"] = r.sdp_dual_bound;
  j["lambda_max"] = optional_number(r.lambda_max);
  j["ratio_vs_exact"] = optional_number(r.ratio_vs_exact);
  j["guarantee"] = r.guarantee;
  j["best_sample_energy"] = r.best_energy;
  j["best_sample_state"] = state_json(r.best_state);
  j["solver"] = solver_json(r.solver_tol, r.primal_residual, r.dual_residual, r.min_eigenvalue,
                            r.iterations, r.converged);
  return dump(j, indent);
}

std::string bounds_to_json(const std::vector<BoundsEntry>& entries, int indent) {
  ojson j;
  j["version"] = std::string(version_string());
  j["method"] = "numerical grid search; not a proof";
  if (!entries.empty()) {
    j["grid"] = entries.front().quadratic.grid;
    j["samples"] = entries.front().quadratic.samples;
    j["seed"] = entries.front().quadratic.seed;
  }
  ojson ranks = ojson::array();
  for (const auto& e : entries) {
    const auto& q = e.quadratic;
    ojson x;
    x["k"] = q.k;
    x["certified_min"] = q.certified_min;
    x["certified_argmin"] = vec3(q.certified_argmin);
    x["closed_form_quadratic"] = q.alpha_closed;
    x["certified_ok"] = q.certified_ok;
    x["observed_min"] = q.observed_min;
    x["argmin_point"] = vec3(q.argmin_point);
    x["mc_at_argmin"] = q.mc_at_argmin;
    x["mc_std_error"] = q.mc_std_error;
    x["conjectured"] = q.conjectured;
    x["grid"] = q.grid;
    x["points"] = q.points;
    x["skipped"] = q.skipped;
    x["samples"] = q.samples;
    x["seed"] = q.seed;
    x["general_bound"] = e.general.value;
    x["general_argmin"] = vec3(e.general.argmin);
    x["general_c"] = ojson::array({e.general.c_i, e.general.c_j});
    x["closed_form_general"] = hermite::alpha_general_closed(q.k);
    ranks.push_back(std::move(x));
  }
  j["ranks"] = std::move(ranks);
  return dump(j, indent);
}

}  // namespace qlh
