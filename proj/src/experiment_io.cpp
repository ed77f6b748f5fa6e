#include "belltest/experiment_io.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

namespace belltest {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[256];
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

// Half-up integer rounding for count display.
long long display_count(double value) {
  return static_cast<long long>(std::floor(value + 0.5));
}

[[noreturn]] void throw_parse_error(const std::string& document,
                                    const json::parse_error& e) {
  // e.byte is the 1-based offset of the failure.
  std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
  if (offset > document.size()) {
    offset = document.size();
  }
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (document[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  throw ParseError(fmt("parse error at line %zu, column %zu: %s", line, column,
                       e.what()));
}

const json& require_field(const json& obj, const char* key,
                          const std::string& context) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError("missing field '" + context + key + "'");
  }
  return *it;
}

void reject_unknown(const json& obj,
                    std::initializer_list<const char*> allowed,
                    const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw SchemaError("unknown field '" + context + item.key() + "'");
    }
  }
}

const json& require_object(const json& value, const std::string& context) {
  if (!value.is_object()) {
    throw SchemaError("field '" + context + "' must be an object");
  }
  return value;
}

double require_real(const json& value, const std::string& context) {
  if (!value.is_number()) {
    throw SchemaError("field '" + context + "' must be a number");
  }
  return value.get<double>();
}

std::int64_t require_integer(const json& value, const std::string& context) {
  if (!value.is_number_integer()) {
    throw SchemaError("field '" + context + "' must be an integer");
  }
  if (value.is_number_unsigned() &&
      value.get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw SchemaError("field '" + context + "' is out of range");
  }
  return value.get<std::int64_t>();
}

std::string require_string(const json& value, const std::string& context) {
  if (!value.is_string()) {
    throw SchemaError("field '" + context + "' must be a string");
  }
  return value.get<std::string>();
}

AliceSetting parse_alice_label(const json& value, const std::string& context) {
  const std::string label = require_string(value, context);
  if (label == "a") return AliceSetting::a;
  if (label == "a_prime") return AliceSetting::a_prime;
  throw SchemaError("field '" + context + "' must be \"a\" or \"a_prime\"");
}

BobSetting parse_bob_label(const json& value, const std::string& context) {
  const std::string label = require_string(value, context);
  if (label == "b") return BobSetting::b;
  if (label == "b_prime") return BobSetting::b_prime;
  throw SchemaError("field '" + context + "' must be \"b\" or \"b_prime\"");
}

PairSource<double> parse_model(const json& value, const std::string& context) {
  require_object(value, context);
  reject_unknown(value, {"r"}, context + ".");
  PairSource<double> model;
  model.r = require_real(require_field(value, "r", context + "."),
                         context + ".r");
  return model;
}

SettingsQuad<double> parse_angles(const json& value,
                                  const std::string& context) {
  require_object(value, context);
  reject_unknown(value, {"a", "a_prime", "b", "b_prime"}, context + ".");
  SettingsQuad<double> angles;
  angles.a.degrees =
      require_real(require_field(value, "a", context + "."), context + ".a");
  angles.a_prime.degrees = require_real(
      require_field(value, "a_prime", context + "."), context + ".a_prime");
  angles.b.degrees =
      require_real(require_field(value, "b", context + "."), context + ".b");
  angles.b_prime.degrees = require_real(
      require_field(value, "b_prime", context + "."), context + ".b_prime");
  return angles;
}

json parse_document(const std::string& document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    throw_parse_error(document, e);
  }
}

ordered_json model_to_json(const PairSource<double>& model) {
  return ordered_json{{"r", model.r}};
}

ordered_json angles_to_json(const SettingsQuad<double>& angles) {
  return ordered_json{{"a", angles.a.degrees},
                      {"a_prime", angles.a_prime.degrees},
                      {"b", angles.b.degrees},
                      {"b_prime", angles.b_prime.degrees}};
}

}  // namespace

ExperimentRecord parse_experiment_file(const std::string& document) {
  const json j = parse_document(document);
  if (!j.is_object()) {
    throw SchemaError("top-level document must be an object");
  }
  reject_unknown(
      j, {"reference_trials", "model", "angles_deg", "settings", "singles"},
      "");

  ExperimentRecord record;
  if (j.contains("reference_trials")) {
    record.reference_trials =
        require_integer(j.at("reference_trials"), "reference_trials");
  }
  if (j.contains("model")) {
    record.model = parse_model(j.at("model"), "model");
  }
  record.angles = parse_angles(require_field(j, "angles_deg", ""), "angles_deg");

  const json& settings = require_field(j, "settings", "");
  if (!settings.is_array()) {
    throw SchemaError("field 'settings' must be an array");
  }
  if (settings.size() != kNumSettings) {
    throw SchemaError("field 'settings' must contain exactly four entries");
  }
  std::array<bool, kNumSettings> seen{};
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const std::string context = "settings[" + std::to_string(i) + "]";
    const json& entry = require_object(settings[i], context);
    reject_unknown(entry, {"alice", "bob", "trials", "coincidences"},
                   context + ".");
    SettingData data;
    data.alice = parse_alice_label(require_field(entry, "alice", context + "."),
                                   context + ".alice");
    data.bob = parse_bob_label(require_field(entry, "bob", context + "."),
                               context + ".bob");
    data.trials = require_integer(require_field(entry, "trials", context + "."),
                                  context + ".trials");
    data.coincidences =
        require_integer(require_field(entry, "coincidences", context + "."),
                        context + ".coincidences");
    const int slot = setting_index(data.alice, data.bob);
    if (seen[static_cast<std::size_t>(slot)]) {
      throw ValidationError(
          context + ": duplicate setting pair (" +
          std::string(to_string(data.alice)) + ", " +
          std::string(to_string(data.bob)) + ")");
    }
    seen[static_cast<std::size_t>(slot)] = true;
    record.settings[static_cast<std::size_t>(slot)] = data;
  }

  if (j.contains("singles")) {
    const std::string context = "singles";
    const json& s = require_object(j.at("singles"), context);
    reject_unknown(s, {"alice", "bob"}, context + ".");
    const json& alice =
        require_object(require_field(s, "alice", context + "."), "singles.alice");
    reject_unknown(alice, {"label", "count"}, "singles.alice.");
    const json& bob =
        require_object(require_field(s, "bob", context + "."), "singles.bob");
    reject_unknown(bob, {"label", "count"}, "singles.bob.");
    SinglesCounts singles;
    singles.alice_label = parse_alice_label(
        require_field(alice, "label", "singles.alice."), "singles.alice.label");
    singles.alice_count = require_integer(
        require_field(alice, "count", "singles.alice."), "singles.alice.count");
    singles.bob_label = parse_bob_label(
        require_field(bob, "label", "singles.bob."), "singles.bob.label");
    singles.bob_count = require_integer(
        require_field(bob, "count", "singles.bob."), "singles.bob.count");
    record.singles = singles;
  }

  record.validate();
  return record;
}

std::string serialize_experiment_record(const ExperimentRecord& record) {
  record.validate();
  ordered_json j;
  j["reference_trials"] = record.reference_trials;
  if (record.model) {
    j["model"] = model_to_json(*record.model);
  }
  j["angles_deg"] = angles_to_json(record.angles);
  j["settings"] = ordered_json::array();
  for (const SettingData& s : record.settings) {
    j["settings"].push_back(ordered_json{{"alice", to_string(s.alice)},
                                         {"bob", to_string(s.bob)},
                                         {"trials", s.trials},
                                         {"coincidences", s.coincidences}});
  }
  if (record.singles) {
    j["singles"] = ordered_json{
        {"alice",
         ordered_json{{"label", to_string(record.singles->alice_label)},
                      {"count", record.singles->alice_count}}},
        {"bob", ordered_json{{"label", to_string(record.singles->bob_label)},
                             {"count", record.singles->bob_count}}}};
  }
  return j.dump(2) + "\n";
}

ExperimentRecord load_experiment_file(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_experiment_file(buffer.str());
}

void save_experiment_file(const ExperimentRecord& record,
                          const std::filesystem::path& path) {
  std::ofstream output(path, std::ios::binary);
  if (!output) {
    throw std::runtime_error("cannot open file for writing: " + path.string());
  }
  output << serialize_experiment_record(record);
  if (!output) {
    throw std::runtime_error("failed writing file: " + path.string());
  }
}

SimConfig parse_sim_config(const std::string& document) {
  const json j = parse_document(document);
  if (!j.is_object()) {
    throw SchemaError("top-level document must be an object");
  }
  reject_unknown(j,
                 {"model", "angles_deg", "trials_per_setting",
                  "pair_probability", "eta1", "eta2", "anomaly_multiplier",
                  "seed", "reference_trials"},
                 "");

  SimConfig config;
  config.model = parse_model(require_field(j, "model", ""), "model");
  config.angles = parse_angles(require_field(j, "angles_deg", ""), "angles_deg");

  const json& trials = require_field(j, "trials_per_setting", "");
  if (!trials.is_array() || trials.size() != kNumSettings) {
    throw SchemaError(
        "field 'trials_per_setting' must be an array of four integers");
  }
  for (std::size_t i = 0; i < trials.size(); ++i) {
    config.trials_per_setting[i] = require_integer(
        trials[i], "trials_per_setting[" + std::to_string(i) + "]");
  }

  config.pair_probability = require_real(
      require_field(j, "pair_probability", ""), "pair_probability");
  config.eta1 = require_real(require_field(j, "eta1", ""), "eta1");
  config.eta2 = require_real(require_field(j, "eta2", ""), "eta2");
  if (j.contains("anomaly_multiplier")) {
    config.anomaly_multiplier =
        require_real(j.at("anomaly_multiplier"), "anomaly_multiplier");
  }
  if (j.contains("seed")) {
    const json& seed = j.at("seed");
    if (!seed.is_number_integer()) {
      throw SchemaError("field 'seed' must be an integer");
    }
    if (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0) {
      throw SchemaError("field 'seed' must be nonnegative");
    }
    config.seed = seed.get<std::uint64_t>();
  }
  if (j.contains("reference_trials")) {
    config.reference_trials =
        require_integer(j.at("reference_trials"), "reference_trials");
  }

  config.validate();
  return config;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return parse_sim_config(buffer.str());
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::text;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw std::invalid_argument("unknown report format '" + std::string(name) +
                              "' (expected text, csv or json)");
}

namespace {

std::string render_text(const ComparisonTable& table) {
  const int label_width = 16;
  const int column_width = 12;

  auto pad = [](std::string cell, int width) {
    if (static_cast<int>(cell.size()) < width) {
      cell.append(static_cast<std::size_t>(width) - cell.size(), ' ');
    }
    return cell;
  };
  auto finish_row = [&](std::string& row) {
    while (!row.empty() && row.back() == ' ') {
      row.pop_back();
    }
    row.push_back('\n');
  };
  auto make_row = [&](const std::string& label, auto&& cell_of) {
    std::string row = pad(label, label_width);
    for (const ComparisonRow& r : table.rows) {
      row += pad(cell_of(r), column_width);
    }
    finish_row(row);
    return row;
  };

  std::string out;
  out += make_row("Settings", [](const ComparisonRow& r) { return r.label; });
  out += make_row("Experiment", [](const ComparisonRow& r) {
    return fmt("%lld", static_cast<long long>(r.raw));
  });
  out += make_row("Exper.corrected", [](const ComparisonRow& r) {
    return fmt("%lld", display_count(r.corrected));
  });
  out += make_row("Quantum", [](const ComparisonRow& r) {
    return fmt("%lld", display_count(r.predicted));
  });
  out += make_row("z-score", [](const ComparisonRow& r) {
    return r.z_score ? fmt("%.2f", *r.z_score) : std::string("n/a");
  });
  out += make_row("Ratio", [](const ComparisonRow& r) {
    return r.ratio ? fmt("%.2f", *r.ratio) : std::string("n/a");
  });

  out += "\n";
  out += fmt("N*eta1*eta2 = %.6f\n", table.scale);
  out += fmt("r = %.6g\n", table.model.r);
  out += fmt("angles_deg: a = %.6g, a' = %.6g, b = %.6g, b' = %.6g\n",
             table.angles.a.degrees, table.angles.a_prime.degrees,
             table.angles.b.degrees, table.angles.b_prime.degrees);
  out += fmt("reference_trials = %lld\n",
             static_cast<long long>(table.reference_trials));
  return out;
}

std::string render_csv(const ComparisonTable& table) {
  std::string out =
      "label,alice,bob,alpha_deg,beta_deg,trials,raw,corrected,probability,"
      "predicted,z_score,ratio,scale,r\n";
  for (const ComparisonRow& row : table.rows) {
    out += "\"" + row.label + "\"";
    out += fmt(",%s,%s", std::string(to_string(row.alice)).c_str(),
               std::string(to_string(row.bob)).c_str());
    out += fmt(",%.17g,%.17g", table.angles.alice_angle(row.alice).degrees,
               table.angles.bob_angle(row.bob).degrees);
    out += fmt(",%lld,%lld", static_cast<long long>(row.trials),
               static_cast<long long>(row.raw));
    out += fmt(",%.17g,%.17g,%.17g", row.corrected, row.probability,
               row.predicted);
    out += row.z_score ? fmt(",%.17g", *row.z_score) : std::string(",");
    out += row.ratio ? fmt(",%.17g", *row.ratio) : std::string(",");
    out += fmt(",%.17g,%.17g\n", table.scale, table.model.r);
  }
  return out;
}

std::string render_json(const ComparisonTable& table) {
  ordered_json j;
  j["scale"] = table.scale;
  j["model"] = model_to_json(table.model);
  j["angles_deg"] = angles_to_json(table.angles);
  j["reference_trials"] = table.reference_trials;
  j["rows"] = ordered_json::array();
  for (const ComparisonRow& row : table.rows) {
    ordered_json r;
    r["label"] = row.label;
    r["alice"] = to_string(row.alice);
    r["bob"] = to_string(row.bob);
    r["trials"] = row.trials;
    r["raw"] = row.raw;
    r["corrected"] = row.corrected;
    r["probability"] = row.probability;
    r["predicted"] = row.predicted;
    r["z_score"] = row.z_score ? ordered_json(*row.z_score) : ordered_json();
    r["ratio"] = row.ratio ? ordered_json(*row.ratio) : ordered_json();
    j["rows"].push_back(r);
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ComparisonTable& table, ReportFormat format) {
  switch (format) {
    case ReportFormat::text:
      return render_text(table);
    case ReportFormat::csv:
      return render_csv(table);
    case ReportFormat::json:
      return render_json(table);
  }
  throw std::invalid_argument("unknown report format");
}

}  // namespace belltest
