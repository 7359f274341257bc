#include "dapkit/keyvalue.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dapkit {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::string& KvTable::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ParseError("[" + name_ + "] missing required key '" + key + "'", line_);
  }
  consumed_.insert(key);
  return it->second;
}

double KvTable::get_double(const std::string& key) const {
  const std::string& raw = get_string(key);
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || !trim(std::string_view(end)).empty()) {
    throw ParseError(
        "[" + name_ + "] key '" + key + "': '" + raw + "' is not a number",
        key_line(key));
  }
  return v;
}

std::string KvTable::get_string_or(const std::string& key, std::string fallback) const {
  if (!has(key)) return fallback;
  return get_string(key);
}

double KvTable::get_double_or(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return get_double(key);
}

void KvTable::reject_unknown_keys() const {
  for (const auto& [key, value] : values_) {
    if (consumed_.count(key) == 0) {
      throw ParseError("[" + name_ + "] unknown key '" + key + "'", key_line(key));
    }
  }
}

void KvTable::insert(const std::string& key, const std::string& value, int line) {
  if (values_.count(key) != 0) {
    throw ParseError("[" + name_ + "] duplicate key '" + key + "'", line);
  }
  values_[key] = value;
  key_lines_[key] = line;
}

int KvTable::key_line(const std::string& key) const {
  auto it = key_lines_.find(key);
  return it == key_lines_.end() ? line_ : it->second;
}

std::vector<const KvTable*> KvDocument::tables_with_prefix(const std::string& prefix) const {
  std::vector<const KvTable*> out;
  const std::string want = prefix + ".";
  for (const auto& t : tables) {
    if (t.name().rfind(want, 0) == 0) out.push_back(&t);
  }
  return out;
}

KvDocument parse_keyvalue(std::string_view text) {
  KvDocument doc;
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError("empty section name", lineno);
      doc.tables.emplace_back(std::string(name), lineno);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("expected 'key = value' or '[section]'", lineno);
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (doc.tables.empty()) {
      throw ParseError("key '" + std::string(key) + "' outside any [section]", lineno);
    }
    doc.tables.back().insert(std::string(key), std::string(value), lineno);
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KvDocument parse_keyvalue_file(const std::string& path) {
  return parse_keyvalue(read_text_file(path));
}

}  // namespace dapkit
