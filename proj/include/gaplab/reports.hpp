#pragma once

#include <string>
#include <vector>

#include "gaplab/bounds.hpp"
#include "gaplab/coupling.hpp"
#include "gaplab/walks.hpp"

namespace gaplab {

inline constexpr int kSchemaVersion = 1;

// JSON serializers. Output is deterministic: fixed key order, no wall-clock
// fields, shortest round-trip number formatting. Identical inputs give
// byte-identical strings.
std::string gap_report_json(const GapReport& rep);
std::string convolution_report_json(const ConvolutionReport& rep);
std::string design_report_json(const DesignReport& rep);
std::string detectability_report_json(const DetectabilityReport& rep);
std::string chain_report_json(const ChainReport& rep);
std::string coupling_trace_json(const CouplingTrace& trace);
std::string bound_sheet_json(const std::vector<BoundSheetRow>& rows);

// CSV exports with frozen column order, one header line first.
// coupling: sample,subseed,ratio
std::string coupling_trace_csv(const CouplingTrace& trace);
// bound sheet: one row per grid point in struct field order
std::string bound_sheet_csv(const std::vector<BoundSheetRow>& rows);

// Output directory resolution: the explicit request wins, then the
// GAPLAB_OUTPUT_DIR environment variable, then the current directory.
std::string resolve_output_dir(const std::string& requested);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gaplab
