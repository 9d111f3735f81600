#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace pervascan {

/// Computation server settings. JSON keys match the member names; the
/// environment variables PERVASCAN_<UPPER_NAME> (e.g. PERVASCAN_LISTEN,
/// PERVASCAN_CATALOG_PATH, PERVASCAN_WORKER_COUNT) override the file, and
/// command-line flags override both.
struct ServerConfig {
  std::string listen = "127.0.0.1:8080";
  std::string catalog_path;
  /// Exactly one of store_dir / store_url is used; store_dir wins if both are set.
  std::string store_dir;
  std::string store_url;
  std::string inbox_path = "inbox.jsonl";
  std::string journal_path;
  std::size_t worker_count = 2;
  std::size_t queue_capacity = 64;
  std::size_t scanlines = 7;
  std::optional<std::uint64_t> seed;
};

/// Throws Error(invalid_argument) on malformed JSON or mistyped values.
ServerConfig parse_config(std::string_view json_text);
/// Throws Error(file_unreadable) when the file cannot be read.
ServerConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
/// Applies PERVASCAN_* overrides. `env` defaults to std::getenv.
void apply_env_overrides(ServerConfig& config, const EnvLookup& env = {});

struct HostPort {
  std::string host;
  int port = 0;
};
/// "host:port", ":port" (all interfaces) or "port". Throws Error(invalid_argument).
HostPort parse_listen(std::string_view listen);

}  // namespace pervascan
