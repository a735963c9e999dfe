#include "gaplab/reports.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gaplab {

namespace {

using Json = nlohmann::ordered_json;

// NaN marks an inapplicable closed form; JSON has no literal for it
Json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

Json walk_json(const WalkSpec& spec) {
  Json j;
  j["kind"] = walk_kind_name(spec.kind);
  j["n"] = spec.n;
  j["t"] = spec.t;
  j["approx_layers"] = spec.approx_layers;
  return j;
}

std::string finish(Json j) { return j.dump(2) + "\n"; }

}  // namespace

std::string gap_report_json(const GapReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "gap";
  j["walk"] = walk_json(rep.walk);
  j["g_value"] = rep.g_value;
  j["delta_value"] = rep.delta_value;
  j["fixed_space_rank"] = rep.fixed_space_rank;
  j["bound_value"] = rep.bound_value;
  j["satisfied"] = rep.satisfied;
  j["method"] = rep.method;
  j["residual"] = rep.residual;
  j["identity_gap"] = rep.identity_gap;
  return finish(j);
}

std::string convolution_report_json(const ConvolutionReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "convolution";
  j["walk"] = walk_json(rep.walk);
  j["k"] = rep.k;
  j["norm_value"] = rep.norm_value;
  j["g_value"] = rep.g_value;
  j["g_power"] = rep.g_power;
  j["within_power_bound"] = rep.within_power_bound;
  j["equality_gap"] = rep.equality_gap;
  return finish(j);
}

std::string design_report_json(const DesignReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "design";
  j["walk"] = walk_json(rep.walk);
  j["k"] = rep.k;
  j["epsilon"] = rep.epsilon;
  j["mode"] = rep.mode == DesignMode::AdditiveBound ? "additive" : "relative";
  j["g_value"] = rep.g_value;
  j["additive_value"] = rep.additive_value;
  j["additive_ok"] = rep.additive_ok;
  j["sufficient_condition"] = rep.sufficient_condition;
  j["relative_feasible"] = rep.relative_feasible;
  j["relative_ok"] = rep.relative_ok;
  j["upper_branch_min_eig"] = rep.upper_branch_min_eig;
  j["lower_branch_min_eig"] = rep.lower_branch_min_eig;
  return finish(j);
}

std::string detectability_report_json(const DetectabilityReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "detectability";
  j["label"] = rep.label;
  j["delta_value"] = rep.delta_value;
  j["product_norm"] = rep.product_norm;
  j["lower_bound"] = rep.lower_bound;
  j["lower_applicable"] = rep.lower_applicable;
  j["upper_bound"] = rep.upper_bound;
  j["commutation_degree"] = rep.commutation_degree;
  j["sandwich_ok"] = rep.sandwich_ok;
  j["residual"] = rep.residual;
  return finish(j);
}

std::string chain_report_json(const ChainReport& rep) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "chain";
  j["n"] = rep.n;
  j["t"] = rep.t;
  j["k"] = rep.k;
  j["group_walk_gap"] = rep.group_walk_gap;
  j["approx_error_k"] = rep.approx_error_k;
  j["aux_norm"] = rep.aux_norm;
  j["sigma_norm"] = rep.sigma_norm;
  j["delta_htilde"] = rep.delta_htilde;
  j["delta_chain"] = rep.delta_chain;
  j["ground_dim_htilde"] = rep.ground_dim_htilde;
  j["ground_dim_chain"] = rep.ground_dim_chain;
  j["chain_psd_min_eig"] = rep.chain_psd_min_eig;
  Json links = Json::array();
  for (const ChainLink& link : rep.links) {
    Json l;
    l["name"] = link.name;
    l["lhs"] = link.lhs;
    l["rhs"] = link.rhs;
    l["ok"] = link.ok;
    links.push_back(std::move(l));
  }
  j["links"] = std::move(links);
  j["all_ok"] = rep.all_ok;
  return finish(j);
}

std::string coupling_trace_json(const CouplingTrace& trace) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "coupling";
  j["n"] = trace.n;
  j["epsilon"] = trace.epsilon;
  j["samples"] = trace.samples;
  j["seed"] = trace.seed;
  j["mean"] = trace.mean;
  j["stderr_of_mean"] = trace.stderr_of_mean;
  j["mean_identity_v"] = trace.mean_identity_v;
  j["mean_taylor"] = trace.mean_taylor;
  j["contraction_target"] = trace.contraction_target;
  j["advisory_more_samples"] = trace.advisory_more_samples;
  Json twirl;
  twirl["samples"] = trace.twirl.samples;
  twirl["seed"] = trace.twirl.seed;
  twirl["square_coeff_hat"] = trace.twirl.square_coeff_hat;
  twirl["square_coeff_sigma"] = trace.twirl.square_coeff_sigma;
  twirl["square_coeff_exact"] = trace.twirl.square_coeff_exact;
  twirl["trace_coeff_hat"] = trace.twirl.trace_coeff_hat;
  twirl["trace_coeff_sigma"] = trace.twirl.trace_coeff_sigma;
  twirl["trace_coeff_exact"] = trace.twirl.trace_coeff_exact;
  twirl["within_band"] = trace.twirl.within_band;
  j["twirl"] = std::move(twirl);
  j["subseeds"] = trace.subseeds;
  j["ratios"] = trace.ratios;
  return finish(j);
}

std::string bound_sheet_json(const std::vector<BoundSheetRow>& rows) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = "bound_sheet";
  Json out = Json::array();
  for (const BoundSheetRow& r : rows) {
    Json row;
    row["n"] = r.n;
    row["t"] = r.t;
    row["epsilon"] = r.epsilon;
    row["l_improved"] = r.l_improved;
    row["l_legacy"] = r.l_legacy;
    row["reduction_ok_improved"] = r.reduction_ok_improved;
    row["reduction_ok_legacy"] = r.reduction_ok_legacy;
    row["unconditional_g"] = r.unconditional_g;
    row["unconditional_delta"] = r.unconditional_delta;
    row["legacy_delta"] = r.legacy_delta;
    row["local_g"] = number_or_null(r.local_g);
    row["brickwork_g"] = number_or_null(r.brickwork_g);
    row["local_depth"] = number_or_null(r.local_depth);
    row["brickwork_depth"] = number_or_null(r.brickwork_depth);
    row["clifford_walk_bound"] = r.clifford_walk_bound;
    row["k_layers"] = r.k_layers;
    row["sigma_bound"] = r.sigma_bound;
    row["old_exponent"] = r.old_exponent;
    row["new_exponent"] = number_or_null(r.new_exponent);
    out.push_back(std::move(row));
  }
  j["rows"] = std::move(out);
  return finish(j);
}

std::string coupling_trace_csv(const CouplingTrace& trace) {
  std::ostringstream out;
  out << "sample,subseed,ratio\n";
  for (int s = 0; s < trace.samples; ++s) {
    out << s << ',' << trace.subseeds[s] << ','
        << Json(trace.ratios[s]).dump() << '\n';
  }
  return out.str();
}

std::string bound_sheet_csv(const std::vector<BoundSheetRow>& rows) {
  std::ostringstream out;
  out << "n,t,epsilon,l_improved,l_legacy,reduction_ok_improved,"
         "reduction_ok_legacy,unconditional_g,unconditional_delta,"
         "legacy_delta,local_g,brickwork_g,local_depth,brickwork_depth,"
         "clifford_walk_bound,k_layers,sigma_bound,old_exponent,new_exponent\n";
  auto num = [](double v) {
    return std::isnan(v) ? std::string("nan") : Json(v).dump();
  };
  for (const BoundSheetRow& r : rows) {
    out << r.n << ',' << num(r.t) << ',' << num(r.epsilon) << ','
        << r.l_improved << ',' << r.l_legacy << ','
        << (r.reduction_ok_improved ? 1 : 0) << ','
        << (r.reduction_ok_legacy ? 1 : 0) << ',' << num(r.unconditional_g)
        << ',' << num(r.unconditional_delta) << ',' << num(r.legacy_delta)
        << ',' << num(r.local_g) << ',' << num(r.brickwork_g) << ','
        << num(r.local_depth) << ',' << num(r.brickwork_depth) << ','
        << num(r.clifford_walk_bound) << ',' << num(r.k_layers) << ','
        << num(r.sigma_bound) << ',' << num(r.old_exponent) << ','
        << num(r.new_exponent) << '\n';
  }
  return out.str();
}

std::string resolve_output_dir(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("GAPLAB_OUTPUT_DIR")) {
    if (*env) return env;
  }
  return ".";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_text_file: cannot open " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write_text_file: write failed for " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_text_file: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gaplab
