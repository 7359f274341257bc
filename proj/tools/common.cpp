#include "common.hpp"

#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <stdexcept>

#include "dapkit/errors.hpp"
#include "dapkit/keyvalue.hpp"
#include "version.hpp"

namespace dapkit::cli {

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

double round_for_output(double v) {
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["schema"] = "dapkit.manifest.v1";
  j["tool"] = std::string("dapkit ") + kVersion;
  j["subcommand"] = subcommand;
  j["parameters"] = parameters;
  j["inputs"] = input_digests;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  j["timestamp"] = stamp;
  return j;
}

std::string CsvBuilder::str() const {
  std::string out = "# schema: " + schema_ + "\n";
  for (const auto& c : comments_) out += "# " + c + "\n";
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_line(header_);
  for (const auto& r : rows_) append_line(r);
  return out;
}

ordered_json CsvBuilder::to_json() const {
  ordered_json j;
  j["schema"] = schema_;
  if (!comments_.empty()) j["notes"] = comments_;
  j["columns"] = header_;
  auto rows = ordered_json::array();
  for (const auto& r : rows_) {
    auto row = ordered_json::array();
    for (const auto& cell : r) {
      // numeric cells stay numbers in the JSON rendering
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() && *end == '\0' && !cell.empty()) {
        row.push_back(v);
      } else {
        row.push_back(cell);
      }
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
}

}  // namespace

void emit_output(const GlobalOptions& opts, const RunManifest& manifest,
                 const std::string& payload) {
  if (opts.out_path.empty()) {
    std::fputs(payload.c_str(), stdout);
    return;
  }
  write_file(opts.out_path, payload);
  write_file(opts.out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

void emit_json(const GlobalOptions& opts, const RunManifest& manifest, ordered_json body) {
  if (opts.out_path.empty()) {
    std::fputs((body.dump(2) + "\n").c_str(), stdout);
    return;
  }
  body["manifest"] = manifest.to_json();
  write_file(opts.out_path, body.dump(2) + "\n");
}

void emit_table(const GlobalOptions& opts, const RunManifest& manifest,
                const CsvBuilder& table) {
  if (opts.format == "json") {
    emit_json(opts, manifest, table.to_json());
  } else {
    emit_output(opts, manifest, table.str());
  }
}

MaterialsDatabase load_database(const GlobalOptions& opts, RunManifest& manifest) {
  if (opts.config_path.empty()) {
    throw IoError("no materials database: pass --config or set DAPKIT_CONFIG");
  }
  manifest.input_digests[opts.config_path] = file_digest(opts.config_path);
  return MaterialsDatabase::load_file(opts.config_path);
}

double parse_length_to_angstrom(const std::string& text) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse length '" + text + "'");
  }
  std::string unit = text.substr(used);
  while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
  if (unit.empty() || unit == "nm") return v * 10.0;
  if (unit == "um") return v * 1e4;
  if (unit == "A" || unit == "angstrom") return v;
  throw DomainError("unknown length unit '" + unit + "' (use nm, um, or A)");
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  const int workers = std::min(threads, n);
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace dapkit::cli
