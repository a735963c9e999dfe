#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "gaplab/bounds.hpp"
#include "gaplab/coupling.hpp"
#include "gaplab/dense.hpp"
#include "gaplab/reports.hpp"
#include "gaplab/verify.hpp"
#include "gaplab/walks.hpp"

namespace {

using gaplab::InfeasibleError;
using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailed = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

std::string write_report(const std::string& out_dir, const std::string& name,
                         const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = gaplab::resolve_output_dir(out_dir);
  fs::create_directories(dir);
  const fs::path path = dir / name;
  gaplab::write_text_file(path.string(), content);
  return path.string();
}

struct GapArgs {
  std::string walk = "local";
  int n = 2;
  int t = 2;
  int layers = 0;
  gaplab::Index dense_cap = gaplab::Index(1) << 12;
  bool force_iterative = false;
  double tol = 1e-10;
};

int cmd_gap(const GapArgs& args, const std::string& out_dir,
            const std::string& format) {
  if (format != "json") {
    throw InfeasibleError("gap reports are json only");
  }
  gaplab::WalkSpec spec;
  spec.kind = gaplab::walk_kind_from_name(args.walk);
  spec.n = args.n;
  spec.t = args.t;
  spec.approx_layers = args.layers;
  gaplab::EigOptions opts;
  opts.dense_cap = args.dense_cap;
  opts.force_iterative = args.force_iterative;
  opts.tol = args.tol;
  const gaplab::GapReport rep = gaplab::spectral_gap(spec, opts);
  const std::string name = "gap_" + args.walk + "_n" + std::to_string(args.n) +
                           "_t" + std::to_string(args.t) + ".json";
  const std::string path =
      write_report(out_dir, name, gaplab::gap_report_json(rep));
  std::cout << "g=" << rep.g_value << " delta=" << rep.delta_value
            << " rank=" << rep.fixed_space_rank << " bound=" << rep.bound_value
            << " satisfied=" << (rep.satisfied ? "true" : "false")
            << " method=" << rep.method << "\n";
  std::cout << "wrote " << path << "\n";
  return rep.satisfied ? kExitPass : kExitAssertionFailed;
}

struct CouplingArgs {
  int n = 2;
  double epsilon = 1e-4;
  int samples = 10000;
  std::uint64_t seed = 1;
};

int cmd_coupling(const CouplingArgs& args, const std::string& out_dir,
                 const std::string& format) {
  const gaplab::CouplingTrace trace = gaplab::contraction_estimate(
      args.n, args.epsilon, args.samples, args.seed);
  const double band = 3.0 * trace.stderr_of_mean + 0.02;
  const bool in_band = std::abs(trace.mean - trace.contraction_target) <= band;
  const std::string stem = "coupling_n" + std::to_string(args.n);
  std::string path;
  if (format == "csv") {
    path = write_report(out_dir, stem + ".csv",
                        gaplab::coupling_trace_csv(trace));
  } else {
    path = write_report(out_dir, stem + ".json",
                        gaplab::coupling_trace_json(trace));
  }
  std::cout << "mean=" << trace.mean << " stderr=" << trace.stderr_of_mean
            << " target=" << trace.contraction_target << " band=" << band
            << " in_band=" << (in_band ? "true" : "false") << "\n";
  if (trace.advisory_more_samples) {
    std::cout << "note: sampling band wider than the check band, consider "
                 "more samples\n";
  }
  std::cout << "wrote " << path << "\n";
  return in_band ? kExitPass : kExitAssertionFailed;
}

struct BoundsArgs {
  std::uint64_t t_max = 0;
  std::string decompose;
  bool depth = false;
  int n = 2;
  double t = 2.0;
  double epsilon = 0.01;
};

int cmd_bounds(const BoundsArgs& args, const std::string& out_dir,
               const std::string& format) {
  if (args.t_max > 0) {
    if (format != "json") {
      throw InfeasibleError("reduction sweep reports are json only");
    }
    const gaplab::ReductionSweepResult sweep =
        gaplab::reduction_sweep(args.t_max);
    Json j;
    j["schema"] = gaplab::kSchemaVersion;
    j["kind"] = "reduction_sweep";
    j["t_max"] = sweep.t_max;
    j["improved_ok"] = sweep.improved_ok;
    j["legacy_ok"] = sweep.legacy_ok;
    j["first_shorter_t"] = sweep.first_shorter_t;
    j["strictly_shorter_from"] = sweep.strictly_shorter_from;
    const std::string path =
        write_report(out_dir, "reduction_sweep.json", j.dump(2) + "\n");
    std::cout << "improved_ok=" << (sweep.improved_ok ? "true" : "false")
              << " legacy_ok=" << (sweep.legacy_ok ? "true" : "false")
              << " first_shorter_t=" << sweep.first_shorter_t << "\n";
    std::cout << "wrote " << path << "\n";
    return sweep.improved_ok && sweep.legacy_ok ? kExitPass
                                                : kExitAssertionFailed;
  }
  if (!args.decompose.empty()) {
    if (format != "json") {
      throw InfeasibleError("exponent decompositions are json only");
    }
    const gaplab::ExponentDecomposition dec =
        args.decompose == "old" ? gaplab::exponent_decomposition_old()
                                : gaplab::exponent_decomposition_new(args.t);
    Json j;
    j["schema"] = gaplab::kSchemaVersion;
    j["kind"] = "exponent_decomposition";
    j["which"] = args.decompose;
    if (args.decompose == "new") j["t"] = args.t;
    Json terms = Json::array();
    for (const gaplab::ExponentTerm& term : dec.terms) {
      Json t;
      t["label"] = term.label;
      t["value"] = term.value;
      terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    j["total"] = dec.total;
    const std::string path = write_report(
        out_dir, "exponent_" + args.decompose + ".json", j.dump(2) + "\n");
    std::cout << "total=" << dec.total << "\n";
    std::cout << "wrote " << path << "\n";
    const bool ok =
        args.decompose != "old" || std::abs(dec.total - 10.41) <= 0.01;
    return ok ? kExitPass : kExitAssertionFailed;
  }
  if (args.depth) {
    if (format != "json") {
      throw InfeasibleError("depth reports are json only");
    }
    const gaplab::DesignDepth depth =
        gaplab::design_depth(args.n, args.t, args.epsilon);
    Json j;
    j["schema"] = gaplab::kSchemaVersion;
    j["kind"] = "design_depth";
    j["n"] = depth.n;
    j["t"] = depth.t;
    j["epsilon"] = depth.epsilon;
    j["applicable"] = depth.applicable;
    j["local_depth"] = depth.applicable ? Json(depth.local_depth) : Json();
    j["brickwork_depth"] =
        depth.applicable ? Json(depth.brickwork_depth) : Json();
    j["headline_ratio"] = depth.applicable ? Json(depth.headline_ratio) : Json();
    const std::string path =
        write_report(out_dir, "design_depth.json", j.dump(2) + "\n");
    if (depth.applicable) {
      std::cout << "local_depth=" << depth.local_depth
                << " brickwork_depth=" << depth.brickwork_depth
                << " headline_ratio=" << depth.headline_ratio << "\n";
    } else {
      std::cout << "not applicable: n below the reduction length for this t\n";
    }
    std::cout << "wrote " << path << "\n";
    return kExitPass;
  }
  const std::vector<int> ns = {2, 4, 8, 16, 32};
  const std::vector<double> ts = {2, 4, 16, 256, 65536};
  const std::vector<gaplab::BoundSheetRow> rows =
      gaplab::bound_sheet(ns, ts, args.epsilon);
  std::string path;
  if (format == "csv") {
    path = write_report(out_dir, "bound_sheet.csv",
                        gaplab::bound_sheet_csv(rows));
  } else {
    path = write_report(out_dir, "bound_sheet.json",
                        gaplab::bound_sheet_json(rows));
  }
  bool reductions_ok = true;
  for (const gaplab::BoundSheetRow& row : rows) {
    reductions_ok =
        reductions_ok && row.reduction_ok_improved && row.reduction_ok_legacy;
  }
  std::cout << "rows=" << rows.size()
            << " reductions_ok=" << (reductions_ok ? "true" : "false") << "\n";
  std::cout << "wrote " << path << "\n";
  return reductions_ok ? kExitPass : kExitAssertionFailed;
}

struct VerifyArgs {
  std::string only;
  std::string inject_fault;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyArgs& args, const std::string& out_dir,
               const std::string& format) {
  if (format != "json") {
    throw InfeasibleError("verify summaries are json only");
  }
  gaplab::VerifyOptions opts;
  opts.only = args.only;
  opts.inject_fault = args.inject_fault;
  opts.seed = args.seed;
  const gaplab::VerifySummary summary = gaplab::run_verify(opts);
  if (summary.rows.empty()) {
    throw InfeasibleError("no check id matches filter '" + args.only + "'");
  }
  for (const gaplab::CheckRow& row : summary.rows) {
    std::cout << (row.pass ? "PASS" : "FAIL") << "  " << row.id << "  "
              << row.detail << "\n";
  }
  const std::string path = write_report(out_dir, "verify.json",
                                        gaplab::verify_summary_json(summary));
  std::cout << (summary.all_pass ? "all checks passed" : "checks failed")
            << " (" << summary.rows.size() << " run)\n";
  std::cout << "wrote " << path << "\n";
  return summary.all_pass ? kExitPass : kExitAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral gap laboratory for random circuit walks"};
  app.require_subcommand(1);

  std::string out_dir;
  std::string format = "json";
  int threads = 1;
  app.add_option("--out", out_dir,
                 "output directory; defaults to GAPLAB_OUTPUT_DIR, then the "
                 "current directory");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads,
                 "worker threads; computation is single threaded, 1 is the "
                 "reference mode")
      ->check(CLI::Range(1, 256));

  GapArgs gap_args;
  CLI::App* gap = app.add_subcommand("gap", "spectral gap of a circuit walk");
  gap->add_option("--walk", gap_args.walk, "walk kind")
      ->check(CLI::IsMember(
          {"local", "brickwork", "clifford-brickwork", "sigma"}));
  gap->add_option("--n", gap_args.n, "qubit count");
  gap->add_option("--t", gap_args.t, "moment order");
  gap->add_option("--layers", gap_args.layers,
                  "sigma only: replace the exact group projector by this many "
                  "group walk layers");
  gap->add_option("--dense-cap", gap_args.dense_cap,
                  "largest dimension solved densely")
      ->check(CLI::Range(gaplab::Index(1) << 8, gaplab::Index(1) << 20));
  gap->add_flag("--force-iterative", gap_args.force_iterative,
                "use the matrix-free route even below the dense cap");
  gap->add_option("--tol", gap_args.tol, "iterative solver tolerance");

  CouplingArgs coupling_args;
  CLI::App* coupling = app.add_subcommand(
      "coupling", "mean contraction of coupled circuit trajectories");
  coupling->add_option("--n", coupling_args.n, "qubit count");
  coupling->add_option("--eps", coupling_args.epsilon,
                       "initial trajectory distance scale");
  coupling->add_option("--samples", coupling_args.samples,
                       "Monte Carlo sample count");
  coupling->add_option("--seed", coupling_args.seed, "master seed");

  BoundsArgs bounds_args;
  CLI::App* bounds =
      app.add_subcommand("bounds", "closed form bound sheet and sweeps");
  bounds->add_option("--t-max", bounds_args.t_max,
                     "sweep the reduction inequality up to this order");
  bounds->add_option("--decompose", bounds_args.decompose,
                     "print an exponent decomposition")
      ->check(CLI::IsMember({"old", "new"}));
  bounds->add_flag("--depth", bounds_args.depth,
                   "evaluate design depths at --n --t --eps");
  bounds->add_option("--n", bounds_args.n, "qubit count");
  bounds->add_option("--t", bounds_args.t, "moment order");
  bounds->add_option("--eps", bounds_args.epsilon, "design accuracy");

  VerifyArgs verify_args;
  CLI::App* verify =
      app.add_subcommand("verify", "run the full cross check battery");
  verify->add_option("--only", verify_args.only,
                     "run only checks whose id contains this substring");
  verify->add_option("--inject-fault", verify_args.inject_fault,
                     "run one check against a perturbed expectation");
  verify->add_option("--seed", verify_args.seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gap->parsed()) return cmd_gap(gap_args, out_dir, format);
    if (coupling->parsed()) return cmd_coupling(coupling_args, out_dir, format);
    if (bounds->parsed()) return cmd_bounds(bounds_args, out_dir, format);
    if (verify->parsed()) return cmd_verify(verify_args, out_dir, format);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
