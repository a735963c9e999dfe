#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gaplab {

struct CheckRow {
  std::string id;
  std::string description;
  bool pass = false;
  std::string detail;  // key quantities, deterministically formatted
};

struct VerifyOptions {
  std::string only;          // substring filter on check ids, empty runs all
  std::string inject_fault;  // id of one check to run against a perturbed
                             // expectation, forcing a genuine failure
  std::uint64_t seed = 1;    // master seed for the sampled checks
};

struct VerifySummary {
  std::uint64_t seed = 1;
  std::string filter;
  std::string injected_fault;
  std::vector<CheckRow> rows;
  bool all_pass = true;
};

// Runs the full battery of cross checks in a fixed order. Each check
// recomputes its subject from scratch; a thrown exception fails that row
// without aborting the rest.
VerifySummary run_verify(const VerifyOptions& opts = {});

std::string verify_summary_json(const VerifySummary& summary);

}  // namespace gaplab
