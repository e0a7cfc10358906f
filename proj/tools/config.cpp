#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "relmech/error.hpp"

namespace relmech::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
    return s.substr(1, s.size() - 2);
  return s;
}

// Line of every section header and key, for diagnostics.
std::map<std::pair<std::string, std::string>, int> key_lines(const std::string& text) {
  std::map<std::pair<std::string, std::string>, int> lines;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == ';' || s[0] == '#') continue;
    if (s.front() == '[' && s.back() == ']') {
      section = trim(s.substr(1, s.size() - 2));
      lines.emplace(std::make_pair(section, std::string()), line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq != std::string::npos) lines.emplace(std::make_pair(section, trim(s.substr(0, eq))), line);
  }
  return lines;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorKind::Config, origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  const auto lines = key_lines(text);
  RunConfig cfg;
  cfg.origin_ = origin;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      const auto it = lines.find({"", section});
      fail(ErrorKind::Config, origin + ":" + std::to_string(it == lines.end() ? 0 : it->second) + ": key '" +
                                  section + "' must appear inside a [section]");
    }
    auto& out = cfg.sections_[section];
    for (const auto& [key, value] : body) {
      const auto it = lines.find({section, key});
      out[key] = {unquote(trim(value.data())), it == lines.end() ? 0 : it->second};
    }
  }
  return cfg;
}

void RunConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    fail(ErrorKind::Config, "override '" + assignment + "' must look like section.key=value");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  if (section.empty() || key.empty()) fail(ErrorKind::Config, "override '" + assignment + "' names no key");
  sections_[section][key] = {unquote(trim(assignment.substr(eq + 1))), 0};
}

void RunConfig::check(const Schema& schema) const {
  for (const auto& [section, body] : sections_) {
    const auto allowed = schema.find(section);
    for (const auto& [key, value] : body) {
      if (allowed == schema.end()) bad(section, key, "unknown section [" + section + "]");
      if (!allowed->second.count(key)) bad(section, key, "unknown key '" + key + "'");
    }
  }
}

const ConfigValue* RunConfig::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool RunConfig::has(const std::string& section, const std::string& key) const { return find(section, key); }

std::string RunConfig::where(const std::string& section, const std::string& key) const {
  const ConfigValue* v = find(section, key);
  const std::string field = "[" + section + "] " + key;
  if (!v || v->line == 0) return "override " + field;
  return origin_ + ":" + std::to_string(v->line) + " " + field;
}

void RunConfig::bad(const std::string& section, const std::string& key, const std::string& what) const {
  fail(ErrorKind::Config, where(section, key) + ": " + what);
}

std::string RunConfig::text(const std::string& section, const std::string& key,
                            const std::optional<std::string>& fallback) const {
  if (const ConfigValue* v = find(section, key)) return v->value;
  if (fallback) return *fallback;
  fail(ErrorKind::Config, "missing required key [" + section + "] " + key);
}

double RunConfig::number(const std::string& section, const std::string& key,
                         const std::optional<double>& fallback) const {
  const ConfigValue* v = find(section, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(ErrorKind::Config, "missing required key [" + section + "] " + key);
  }
  const char* begin = v->value.c_str();
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) bad(section, key, "'" + v->value + "' is not a number");
  return x;
}

long RunConfig::integer(const std::string& section, const std::string& key, const std::optional<long>& fallback) const {
  const ConfigValue* v = find(section, key);
  if (!v) {
    if (fallback) return *fallback;
    fail(ErrorKind::Config, "missing required key [" + section + "] " + key);
  }
  const char* begin = v->value.c_str();
  char* end = nullptr;
  errno = 0;
  const long x = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) bad(section, key, "'" + v->value + "' is not an integer");
  return x;
}

std::vector<double> RunConfig::numbers(const std::string& section, const std::string& key) const {
  std::string raw = text(section, key);
  for (char& ch : raw)
    if (ch == ',') ch = ' ';
  std::istringstream in(raw);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    char* end = nullptr;
    const double x = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') bad(section, key, "'" + token + "' is not a number");
    out.push_back(x);
  }
  if (out.empty()) bad(section, key, "expected a list of numbers");
  return out;
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [section, body] : sections_)
    for (const auto& [key, value] : body) out[section][key] = value.value;
  return out;
}

}  // namespace relmech::cli
