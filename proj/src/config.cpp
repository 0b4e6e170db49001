#include "scatter1d/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "scatter1d/error.hpp"

namespace scatter1d {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::config_error, key + ": expected a number, got '" + v + "'");
  }
}

long to_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::config_error, key + ": expected an integer, got '" + v + "'");
  }
}

}  // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void RunConfig::apply(const std::map<std::string, std::string>& values) {
  for (const auto& [key, v] : values) {
    if (key == "hbar") constants.hbar = to_double(key, v);
    else if (key == "mass") constants.mass = to_double(key, v);
    else if (key == "potential.name") potential.name = v;
    else if (key == "potential.file") potential.file = v;
    else if (key == "potential.range_threshold") potential.range_threshold = to_double(key, v);
    else if (key == "potential.scale") potential.scale = to_double(key, v);
    else if (key == "fd.dx") fd.dx = to_double(key, v);
    else if (key == "fd.pad_wavelengths") fd.pad_wavelengths = to_double(key, v);
    else if (key == "scan.emin") emin = to_double(key, v);
    else if (key == "scan.emax") emax = to_double(key, v);
    else if (key == "scan.points") points = static_cast<std::size_t>(to_long(key, v));
    else if (key == "siegert.n") siegert_n = static_cast<int>(to_long(key, v));
    else if (key == "siegert.box_a") box_a = to_double(key, v);
    else if (key == "siegert.basis") basis = basis_kind_from_string(v);
    else if (key == "siegert.box_tolerance") box_tolerance = to_double(key, v);
    else if (key == "wavepacket.k0") k0 = to_double(key, v);
    else if (key == "wavepacket.sigma") sigma = to_double(key, v);
    else if (key == "wavepacket.nodes") packet_nodes = static_cast<int>(to_long(key, v));
    else if (key == "threads") threads = static_cast<int>(to_long(key, v));
    else throw Error(ErrorKind::config_error, "unknown key '" + key + "'");
  }
}

void RunConfig::validate() const {
  constants.validate();
  if (!(potential.range_threshold > 0.0)) throw Error(ErrorKind::config_error, "potential.range_threshold must be positive");
  if (!(fd.dx > 0.0)) throw Error(ErrorKind::config_error, "fd.dx must be positive");
  if (!(fd.pad_wavelengths >= 0.0)) throw Error(ErrorKind::config_error, "fd.pad_wavelengths must be non-negative");
  if (!(emin > 0.0) || !(emax > emin)) throw Error(ErrorKind::config_error, "need 0 < scan.emin < scan.emax");
  if (points < 2) throw Error(ErrorKind::config_error, "scan.points must be at least 2");
  if (siegert_n < 2) throw Error(ErrorKind::config_error, "siegert.n must be at least 2");
  if (box_a && !(*box_a > 0.0)) throw Error(ErrorKind::config_error, "siegert.box_a must be positive");
  if (!(sigma > 0.0) || !(k0 > 0.0)) throw Error(ErrorKind::config_error, "wavepacket k0 and sigma must be positive");
  if (packet_nodes < 2) throw Error(ErrorKind::config_error, "wavepacket.nodes must be at least 2");
  if (threads < 0) throw Error(ErrorKind::config_error, "threads must be non-negative");
}

Potential RunConfig::make_potential() const {
  Potential p = potential.name == "table"
                    ? (potential.file.empty()
                           ? throw Error(ErrorKind::config_error, "potential.file is required for a table")
                           : load_tabulated_potential(potential.file, potential.range_threshold))
                    : potential_by_name(potential.name, potential.range_threshold);
  if (potential.scale != 1.0) p = p.scaled(potential.scale);
  return p;
}

double RunConfig::siegert_box(const Potential& p) const {
  if (box_a) return *box_a;
  if (potential.name == "jolanta") return std::max(p.half_range(), 15.0);
  return p.half_range() > 0.0 ? p.half_range() : 1.0;
}

int resolve_threads(int configured) {
  if (const char* env = std::getenv("SCATTER1D_THREADS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw Error(ErrorKind::config_error, "SCATTER1D_THREADS must be a positive integer");
    return static_cast<int>(n);
  }
  return configured;
}

}  // namespace scatter1d
