#ifndef BELLTEST_EXPERIMENT_IO_HPP
#define BELLTEST_EXPERIMENT_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "belltest/anomaly_report.hpp"
#include "belltest/count_pipeline.hpp"
#include "belltest/experiment_sim.hpp"

// JSON ingestion/serialization of experiment records and simulator
// configurations, plus report rendering. Parsing is strict: unknown fields
// are rejected and every error message names the offending field.

namespace belltest {

// Parses and fully validates an experiment document. Throws ParseError on
// malformed JSON (with line/column), SchemaError on missing/unknown/
// mistyped fields, ValidationError on invariant violations. Setting entries
// may appear in any order in the document; the record is canonicalized.
ExperimentRecord parse_experiment_file(const std::string& document);

// Serialization inverse of parse_experiment_file: parse(serialize(r)) == r
// field for field. reference_trials is always written, even when it is the
// default.
std::string serialize_experiment_record(const ExperimentRecord& record);

ExperimentRecord load_experiment_file(const std::filesystem::path& path);
void save_experiment_file(const ExperimentRecord& record,
                          const std::filesystem::path& path);

// Simulator configuration document. Required keys: model, angles_deg,
// trials_per_setting, pair_probability, eta1, eta2. Optional:
// anomaly_multiplier (default 1), seed (default 0), reference_trials
// (default 28000000).
SimConfig parse_sim_config(const std::string& document);
SimConfig load_sim_config(const std::filesystem::path& path);

enum class ReportFormat { text, csv, json };

// Throws std::invalid_argument on anything but "text", "csv", "json".
ReportFormat parse_report_format(std::string_view name);

// Deterministic, byte-stable rendering. The text format mirrors the
// four-column comparison layout (Settings / Experiment / Exper.corrected /
// Quantum) with z-score and ratio rows appended; counts are displayed
// rounded half-up, z and ratio with two decimals, undefined diagnostics as
// "n/a". CSV and JSON carry the same values at full precision.
std::string render_report(const ComparisonTable& table, ReportFormat format);

}  // namespace belltest

#endif  // BELLTEST_EXPERIMENT_IO_HPP
