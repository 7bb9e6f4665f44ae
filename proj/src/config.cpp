#include "gsq/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gsq/errors.hpp"
#include "gsq/units.hpp"

namespace gsq::config {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Comments run from an unquoted # or ; at line start or after whitespace.
std::string strip_comment(const std::string& s) {
  for (size_t i = 0; i < s.size(); ++i) {
    if ((s[i] == '#' || s[i] == ';') &&
        (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t'))
      return s.substr(0, i);
  }
  return s;
}

bool valid_key_part(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return true;
}

[[noreturn]] void fail(const std::string& name, int line,
                       const std::string& what) {
  throw InputError(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "cavity.kappa_hz", "cavity.omega_z_hz", "cavity.delta_c_hz",
      "cavity.omega_hz", "cavity.omega_peak_hz", "cavity.eta_peak",
      "cavity.nbar", "cavity.atom_number",
      "dynamics.chi_hz", "dynamics.derive_chi", "dynamics.q_hz",
      "dynamics.tau_s", "dynamics.modes",
      "noise.unitary_min_variance", "noise.photon_shot",
      "noise.interaction_strength", "noise.coupling_variation",
      "noise.cavity_photon_loss", "noise.free_space_scattering",
      "noise.contrast", "noise.beta", "noise.chi_fluctuation",
      "noise.dissipation",
      "graph.file", "graph.name", "graph.sites",
      "sampling.n_trials", "sampling.seed",
      "imaging.r", "imaging.g", "imaging.a0", "imaging.a2",
      "imaging.atom_numbers", "imaging.n_trials",
      "imaging.rabi_omega_hz", "imaging.rabi_gamma",
      "imaging.rabi_amplitude", "imaging.rabi_offset", "imaging.rabi_sigma",
      "imaging.rabi_points", "imaging.rabi_t_max_s",
      "oracle.atom_numbers", "oracle.lambda_t",
  };
  return keys;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& name) {
  Config cfg;
  cfg.name_ = name;

  const auto& known = known_keys();
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        fail(name, line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key_part(section))
        fail(name, line_no, "invalid section name '" + section + "'");
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(name, line_no, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail(name, line_no, "empty value for '" + key + "'");

    if (key.find('.') == std::string::npos) {
      if (section.empty())
        fail(name, line_no, "key '" + key + "' outside any section");
      key = section + "." + key;
    }
    const size_t dot = key.find('.');
    if (!valid_key_part(key.substr(0, dot)) ||
        !valid_key_part(key.substr(dot + 1)))
      fail(name, line_no, "invalid key '" + key + "'");

    if (std::find(known.begin(), known.end(), key) == known.end())
      fail(name, line_no, "unknown key '" + key + "'");
    if (cfg.entries_.count(key))
      fail(name, line_no,
           "duplicate key '" + key + "' (first set on line " +
               std::to_string(cfg.entries_[key].line) + ")");
    cfg.entries_[key] = Entry{value, line_no};
    cfg.flat_[key] = value;
  }
  return cfg;
}

const Config::Entry& Config::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw InputError("missing config key '" + key + "'");
  return it->second;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

double Config::number(const std::string& key) const {
  const Entry& e = lookup(key);
  try {
    size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(name_, e.line, "key '" + key + "' is not a number: '" + e.value +
                            "'");
  }
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

double Config::hz(const std::string& key) const {
  return from_hz(number(key));
}

double Config::hz_or(const std::string& key, double fallback_rad) const {
  return has(key) ? hz(key) : fallback_rad;
}

std::uint64_t Config::integer(const std::string& key) const {
  const Entry& e = lookup(key);
  try {
    size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size() || v < 0 || v != std::floor(v) || v > 1.8e19)
      throw std::invalid_argument("not integral");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    fail(name_, e.line,
         "key '" + key + "' is not a non-negative integer: '" + e.value +
             "'");
  }
}

std::uint64_t Config::integer_or(const std::string& key,
                                 std::uint64_t fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::flag(const std::string& key) const {
  const Entry& e = lookup(key);
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(name_, e.line, "key '" + key + "' is not a boolean: '" + e.value +
                          "'");
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  return has(key) ? flag(key) : fallback;
}

std::string Config::text(const std::string& key) const {
  return lookup(key).value;
}

std::string Config::text_or(const std::string& key,
                            const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Config::list(const std::string& key) const {
  const Entry& e = lookup(key);
  std::string v = e.value;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(name_, e.line,
           "key '" + key + "' has a non-numeric element '" + tok + "'");
    }
  }
  if (out.empty())
    fail(name_, e.line, "key '" + key + "' lists no values");
  return out;
}

std::string Config::dump() const {
  std::ostringstream out;
  for (const auto& [key, entry] : entries_)
    out << key << " = " << entry.value << "\n";
  return out.str();
}

const std::map<std::string, std::string>& Config::entries() const {
  return flat_;
}

}  // namespace gsq::config
