#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gsq::config {

// Flat INI-style run configuration. Keys live in dotted sections, either
// via a [section] header or written out in full (section.key = value).
// Frequencies are given in Hz and converted to rad/s by the hz getters.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& name = "<config>");

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  double hz(const std::string& key) const;  // Hz in the file, rad/s out
  double hz_or(const std::string& key, double fallback_rad) const;
  std::uint64_t integer(const std::string& key) const;
  std::uint64_t integer_or(const std::string& key,
                           std::uint64_t fallback) const;
  bool flag(const std::string& key) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key,
                      const std::string& fallback) const;
  std::vector<double> list(const std::string& key) const;

  // Canonical form: sorted "key = value" lines; parsing it back yields the
  // same configuration.
  std::string dump() const;

  const std::map<std::string, std::string>& entries() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::map<std::string, Entry> entries_;
  std::map<std::string, std::string> flat_;
  std::string name_;

  const Entry& lookup(const std::string& key) const;
};

// All keys the tools understand; parsing rejects anything else, naming the
// offending file and line.
const std::vector<std::string>& known_keys();

}  // namespace gsq::config
