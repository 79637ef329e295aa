#pragma once

// Config-driven front end shared by the coklab executable and its tests.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace coklab {

/// Flat "key = value" lines grouped under "[section]" headers. Keys before the
/// first header belong to the top-level section "". '#' starts a comment.
class RunConfig {
 public:
  static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);
  bool has_section(const std::string& section) const { return values_.contains(section); }
  /// Throws InvalidArgument on any key outside `allowed`.
  void require_known(const std::string& section, const std::set<std::string>& allowed) const;

  /// Relative paths in the config are resolved against this directory.
  std::filesystem::path resolve(const std::string& path) const;

  /// Sorted rendering of the top-level section (without `workers`) and `section`.
  /// Running this text again reproduces the run.
  std::string canonical(const std::string& section) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::filesystem::path base_dir_;
};

std::string sha256_hex(std::string_view data);

/// Runs one subcommand. Returns 0 when every verdict passes, 1 when a verdict
/// fails, 2 on configuration or input errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coklab
