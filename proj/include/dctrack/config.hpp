#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dctrack {

/// Flat "key = value" configuration file. Lines starting with '#' are
/// comments; keys are dotted lowercase strings.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig fromFile(const std::string& path);
  static KeyValueConfig fromString(const std::string& text);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string getString(const std::string& key, const std::string& def) const;
  std::string requireString(const std::string& key) const;
  double getDouble(const std::string& key, double def) const;
  long getLong(const std::string& key, long def) const;
  std::vector<double> getDoubleList(const std::string& key,
                                    const std::vector<double>& def) const;

  void set(const std::string& key, const std::string& value);

  /// Canonical "key = value\n" rendering, keys sorted. Used for manifests.
  std::string serialize() const;

  /// FNV-1a hash of the canonical serialization.
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> parseDoubleList(const std::string& text);

}  // namespace dctrack
