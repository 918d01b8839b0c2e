#include "scriptforge/config_file.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "scriptforge/errors.h"

namespace scriptforge {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ConfigFile ConfigFile::Parse(std::string_view text, std::string source) {
  ConfigFile config;
  config.source_ = std::move(source);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = config.source_ + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  where + ": expected `key = value`");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw Error(ErrorCode::kInvalidConfig, where + ": empty key");
    }
    if (config.entries_.contains(key)) {
      throw Error(ErrorCode::kInvalidConfig,
                  where + ": duplicate key `" + key + "`");
    }
    config.entries_.emplace(key, Entry{value, line_no});
  }
  return config;
}

ConfigFile ConfigFile::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), path.string());
}

void ConfigFile::Fail(const std::string& key, const std::string& why) const {
  auto it = entries_.find(key);
  const std::string where =
      it == entries_.end() ? source_
                           : source_ + ":" + std::to_string(it->second.line);
  throw Error(ErrorCode::kInvalidConfig, where + ": `" + key + "` " + why);
}

bool ConfigFile::Has(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> ConfigFile::Find(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string ConfigFile::GetString(std::string_view key,
                                  std::string fallback) const {
  return Find(key).value_or(std::move(fallback));
}

double ConfigFile::GetDouble(std::string_view key, double fallback) const {
  auto value = Find(key);
  if (!value) return fallback;
  double out = 0.0;
  const char* begin = value->data();
  const char* end = begin + value->size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    Fail(std::string(key), "is not a number: " + *value);
  }
  return out;
}

long long ConfigFile::GetInt(std::string_view key, long long fallback) const {
  auto value = Find(key);
  if (!value) return fallback;
  long long out = 0;
  const char* begin = value->data();
  const char* end = begin + value->size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    Fail(std::string(key), "is not an integer: " + *value);
  }
  return out;
}

bool ConfigFile::GetBool(std::string_view key, bool fallback) const {
  auto value = Find(key);
  if (!value) return fallback;
  if (*value == "true" || *value == "1" || *value == "yes") return true;
  if (*value == "false" || *value == "0" || *value == "no") return false;
  Fail(std::string(key), "is not a boolean: " + *value);
}

std::vector<std::string> ConfigFile::GetList(std::string_view key) const {
  std::vector<std::string> out;
  auto value = Find(key);
  if (!value) return out;
  std::string_view rest = *value;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = Trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

void ConfigFile::RequireKnown(const std::set<std::string>& known) const {
  for (const auto& [key, entry] : entries_) {
    if (!known.contains(key)) Fail(key, "is not a recognized key");
  }
}

void ConfigFile::Set(std::string key, std::string value) {
  entries_[std::move(key)] = Entry{std::move(value), 0};
}

std::string ConfigFile::Dump() const {
  std::string out;
  for (const auto& [key, entry] : entries_) {
    out += key + " = " + entry.value + "\n";
  }
  return out;
}

std::map<std::string, std::string> ConfigFile::Entries() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : entries_) out.emplace(key, entry.value);
  return out;
}

}  // namespace scriptforge
