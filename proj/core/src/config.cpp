#include "pervascan/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& why) { throw Error(Errc::invalid_argument, "config: " + why); }

std::uint64_t parse_unsigned(std::string_view text, const std::string& key) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) bad(key + " must be a non-negative integer");
  return value;
}

void read_string(const json& doc, const char* key, std::string& out) {
  if (!doc.contains(key)) return;
  if (!doc[key].is_string()) bad(std::string(key) + " must be a string");
  out = doc[key].get<std::string>();
}

void read_count(const json& doc, const char* key, std::size_t& out) {
  if (!doc.contains(key)) return;
  if (!doc[key].is_number_unsigned()) bad(std::string(key) + " must be a non-negative integer");
  out = doc[key].get<std::size_t>();
}

}  // namespace

ServerConfig parse_config(std::string_view json_text) {
  const json doc = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) bad("not a JSON object");
  ServerConfig config;
  read_string(doc, "listen", config.listen);
  read_string(doc, "catalog_path", config.catalog_path);
  read_string(doc, "store_dir", config.store_dir);
  read_string(doc, "store_url", config.store_url);
  read_string(doc, "inbox_path", config.inbox_path);
  read_string(doc, "journal_path", config.journal_path);
  read_count(doc, "worker_count", config.worker_count);
  read_count(doc, "queue_capacity", config.queue_capacity);
  read_count(doc, "scanlines", config.scanlines);
  if (doc.contains("seed") && !doc["seed"].is_null()) {
    if (!doc["seed"].is_number_unsigned()) bad("seed must be a non-negative integer");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  return config;
}

ServerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_unreadable, "cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_env_overrides(ServerConfig& config, const EnvLookup& env) {
  auto lookup = [&](const std::string& name) -> std::optional<std::string> {
    if (env) return env(name);
    const char* value = std::getenv(name.c_str());
    if (!value) return std::nullopt;
    return std::string(value);
  };
  auto text = [&](const char* name, std::string& out) {
    if (auto value = lookup(name)) out = *value;
  };
  auto count = [&](const char* name, std::size_t& out) {
    if (auto value = lookup(name)) out = parse_unsigned(*value, name);
  };
  text("PERVASCAN_LISTEN", config.listen);
  text("PERVASCAN_CATALOG_PATH", config.catalog_path);
  text("PERVASCAN_STORE_DIR", config.store_dir);
  text("PERVASCAN_STORE_URL", config.store_url);
  text("PERVASCAN_INBOX_PATH", config.inbox_path);
  text("PERVASCAN_JOURNAL_PATH", config.journal_path);
  count("PERVASCAN_WORKER_COUNT", config.worker_count);
  count("PERVASCAN_QUEUE_CAPACITY", config.queue_capacity);
  count("PERVASCAN_SCANLINES", config.scanlines);
  if (auto seed = lookup("PERVASCAN_SEED")) config.seed = parse_unsigned(*seed, "PERVASCAN_SEED");
}

HostPort parse_listen(std::string_view listen) {
  const auto colon = listen.rfind(':');
  HostPort out;
  std::string_view port_text = listen;
  if (colon != std::string_view::npos) {
    out.host = std::string(listen.substr(0, colon));
    port_text = listen.substr(colon + 1);
  }
  if (out.host.empty()) out.host = "0.0.0.0";
  const auto port = parse_unsigned(port_text, "listen port");
  if (port > 65535) bad("listen port out of range");
  out.port = static_cast<int>(port);
  return out;
}

}  // namespace pervascan
