#include "lossest/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lossest/errors.hpp"

namespace lossest {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

long parse_long(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const long out = std::strtol(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("bad integer for '" + key + "': " + v);
  return out;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("bad seed for '" + key + "': " + v);
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size() || v.empty())
    throw ConfigError("bad number for '" + key + "': " + v);
  return out;
}

}  // namespace

VerifyJob parse_verify_config(const std::string& text) {
  VerifyJob job;
  CheckRequest* current = nullptr;
  std::istringstream in(text);
  std::string raw;
  long line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section at line " +
                          std::to_string(line_no));
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError("empty section name at line " +
                          std::to_string(line_no));
      job.checks.push_back({name, std::nullopt, std::nullopt});
      current = &job.checks.back();
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value' at line " +
                        std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (current == nullptr) {
      if (key == "replications")
        job.replications = parse_long(value, key);
      else if (key == "seed")
        job.seed = parse_u64(value, key);
      else if (key == "z_threshold")
        job.z_threshold = parse_double(value, key);
      else if (key == "min_replications")
        job.min_replications = parse_long(value, key);
      else
        throw ConfigError("unknown key '" + key + "' at line " +
                          std::to_string(line_no));
    } else {
      if (key == "replications")
        current->replications = parse_long(value, key);
      else if (key == "seed")
        current->seed = parse_u64(value, key);
      else
        throw ConfigError("unknown key '" + key + "' in section [" +
                          current->name + "] at line " +
                          std::to_string(line_no));
    }
  }
  return job;
}

VerifyJob read_verify_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_verify_config(buf.str());
}

}  // namespace lossest
