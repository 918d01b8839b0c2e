#ifndef SCRIPTFORGE_CONFIG_FILE_H_
#define SCRIPTFORGE_CONFIG_FILE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace scriptforge {

// Flat `key = value` files with '#' comments. Every accessor reports the
// offending line number in its Error(kInvalidConfig) message.
class ConfigFile {
 public:
  static ConfigFile Parse(std::string_view text, std::string source = "<text>");
  static ConfigFile Load(const std::filesystem::path& path);

  bool Has(std::string_view key) const;
  std::string GetString(std::string_view key, std::string fallback) const;
  double GetDouble(std::string_view key, double fallback) const;
  long long GetInt(std::string_view key, long long fallback) const;
  bool GetBool(std::string_view key, bool fallback) const;
  // Comma-separated list.
  std::vector<std::string> GetList(std::string_view key) const;
  std::optional<std::string> Find(std::string_view key) const;

  // Throws for any key outside `known`.
  void RequireKnown(const std::set<std::string>& known) const;

  void Set(std::string key, std::string value);
  const std::string& source() const { return source_; }
  // Canonical `key = value` listing, sorted by key.
  std::string Dump() const;
  std::map<std::string, std::string> Entries() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  [[noreturn]] void Fail(const std::string& key, const std::string& why) const;

  std::string source_;
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace scriptforge

#endif  // SCRIPTFORGE_CONFIG_FILE_H_
