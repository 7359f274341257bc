#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dapkit/errors.hpp"

namespace dapkit {

/// One `[section]` table of an INI-style document.  Keys are unique within a
/// table; duplicate section headers open independent tables (the materials
/// format relies on this for same-named defects in different hosts).
class KvTable {
 public:
  KvTable(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  /// Raw string access; marks the key as consumed.
  const std::string& get_string(const std::string& key) const;
  double get_double(const std::string& key) const;

  /// Optional variants return the fallback when the key is absent.
  std::string get_string_or(const std::string& key, std::string fallback) const;
  double get_double_or(const std::string& key, double fallback) const;

  /// Throws ParseError listing any key never consumed by a getter.
  void reject_unknown_keys() const;

  void insert(const std::string& key, const std::string& value, int line);
  const std::map<std::string, std::string>& entries() const { return values_; }
  int key_line(const std::string& key) const;

 private:
  std::string name_;
  int line_;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> key_lines_;
  mutable std::set<std::string> consumed_;
};

/// Parsed key-value document: ordered list of tables.
struct KvDocument {
  std::vector<KvTable> tables;

  /// All tables whose name starts with `prefix.` (e.g. "host", "defect").
  std::vector<const KvTable*> tables_with_prefix(const std::string& prefix) const;
};

/// Parses `[section]` headers, `key = value` lines and `#` comments.
/// Blank lines are ignored; keys outside any section are an error.
KvDocument parse_keyvalue(std::string_view text);

/// Reads a file and parses it; throws Error when the file cannot be read.
KvDocument parse_keyvalue_file(const std::string& path);

/// Reads an entire file into a string (shared by the snapshot/CSV loaders).
std::string read_text_file(const std::string& path);

}  // namespace dapkit
