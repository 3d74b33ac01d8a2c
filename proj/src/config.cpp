#include "fdkp/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fdkp/error.hpp"

namespace fdkp {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "config line " + std::to_string(line) + ": " + what);
}

// Drops a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Config::Scalar parse_scalar(const std::string& text, int line) {
  if (text.empty()) fail(line, "missing value");
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') fail(line, "unterminated string");
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) fail(line, "bad value '" + text + "'");
  return value;
}

std::vector<std::string> split_array(const std::string& body, int line) {
  std::vector<std::string> parts;
  std::string current;
  bool in_string = false;
  for (char ch : body) {
    if (ch == '"') in_string = !in_string;
    if (ch == ',' && !in_string) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  if (in_string) fail(line, "unterminated string in array");
  const std::string last = trim(current);
  if (!last.empty()) parts.push_back(last);
  else if (!parts.empty()) fail(line, "empty array element");
  return parts;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  cfg.source_ = text;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string rhs = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    for (char ch : key) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-')) {
        fail(line_no, "bad key '" + key + "'");
      }
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full) != 0) fail(line_no, "duplicate key '" + full + "'");
    if (!rhs.empty() && rhs.front() == '[') {
      if (rhs.back() != ']') fail(line_no, "unterminated array");
      std::vector<Scalar> items;
      for (const auto& part : split_array(rhs.substr(1, rhs.size() - 2), line_no)) {
        items.push_back(parse_scalar(part, line_no));
      }
      for (const auto& item : items) {
        if (item.index() != items.front().index()) fail(line_no, "mixed types in array");
      }
      cfg.entries_[full] = std::move(items);
    } else {
      std::visit([&](auto&& v) { cfg.entries_[full] = v; }, parse_scalar(rhs, line_no));
    }
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

double Config::get_double(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::InvalidConfig, "missing key '" + key + "'");
  if (const double* v = std::get_if<double>(&it->second)) return *v;
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must be a number");
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const std::string* v = std::get_if<std::string>(&it->second)) return *v;
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must be a string");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const bool* v = std::get_if<bool>(&it->second)) return *v;
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must be true or false");
}

std::vector<double> Config::get_double_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const double* v = std::get_if<double>(&it->second)) return {*v};
  if (const auto* list = std::get_if<std::vector<Scalar>>(&it->second)) {
    std::vector<double> out;
    for (const auto& item : *list) {
      const double* d = std::get_if<double>(&item);
      if (d == nullptr) throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must hold numbers");
      out.push_back(*d);
    }
    return out;
  }
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "' must be a list of numbers");
}

void Config::set(const std::string& key, Value value) { entries_[key] = std::move(value); }

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace fdkp
