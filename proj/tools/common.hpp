#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dapkit/materials.hpp"
#include "json.hpp"

namespace dapkit::cli {

using ordered_json = nlohmann::ordered_json;

/// Options shared by every subcommand.
struct GlobalOptions {
  std::string config_path;  ///< materials database (--config / DAPKIT_CONFIG)
  std::string out_path;     ///< empty: stdout, no manifest sidecar
  std::string format = "csv";
  int threads = 1;
};

/// Provenance sidecar written next to every file output.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::map<std::string, std::string> input_digests;  ///< path -> fnv1a-64 hex

  ordered_json to_json() const;
};

/// 9 significant digits, '.' decimal separator, locale independent.
std::string format_number(double v);

/// Rounds through the 9-digit text form so JSON payloads match CSV precision.
double round_for_output(double v);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::string& path);

/// Tabular payload: schema tag, comment lines, header, string cells.
/// Rendered as CSV (default) or as a JSON rows object under --format json.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::string schema) : schema_(std::move(schema)) {}
  void comment(const std::string& line) { comments_.push_back(line); }
  void header(const std::vector<std::string>& names) { header_ = names; }
  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }
  std::string str() const;          ///< CSV rendering
  ordered_json to_json() const;     ///< {schema, notes, columns, rows}

 private:
  std::string schema_;
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes the payload to --out (with `<out>.manifest.json` sidecar) or to
/// stdout (payload only).
void emit_output(const GlobalOptions& opts, const RunManifest& manifest,
                 const std::string& payload);

/// Renders `table` per opts.format and hands it to emit_output/emit_json.
void emit_table(const GlobalOptions& opts, const RunManifest& manifest,
                const CsvBuilder& table);

/// JSON payload variant; the manifest is embedded under "manifest" for file
/// outputs and omitted on stdout.
void emit_json(const GlobalOptions& opts, const RunManifest& manifest, ordered_json body);

/// Loads the database from --config / DAPKIT_CONFIG, recording its digest.
MaterialsDatabase load_database(const GlobalOptions& opts, RunManifest& manifest);

/// Parses "120", "3.5nm", "0.2um", "15A" into Angstrom (bare numbers are nm).
double parse_length_to_angstrom(const std::string& text);

/// Runs fn(i) for i in [0, n) on `threads` workers; results must be written
/// to pre-sized slots so the output order stays deterministic.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace dapkit::cli
