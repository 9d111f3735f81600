#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"
#include "pervascan/photo_store.hpp"
#include "pervascan/server_client.hpp"

namespace pervascan {

namespace {

std::unique_ptr<httplib::Client> make_client(const std::string& base_url) {
  auto client = std::make_unique<httplib::Client>(base_url);
  if (!client->is_valid()) throw Error(Errc::transport_error, "invalid server URL " + base_url);
  client->set_connection_timeout(5);
  client->set_read_timeout(30);
  client->set_write_timeout(30);
  return client;
}

[[noreturn]] void transport_failure(const std::string& what, httplib::Error error) {
  throw Error(Errc::transport_error, what + ": " + httplib::to_string(error));
}

Errc errc_or(std::string_view name, Errc fallback) { return errc_from_name(name).value_or(fallback); }

// Turns an error body into an Error; decode_failed keeps the decoder code as message.
[[noreturn]] void throw_error(const ErrorResponse& body) {
  const Errc code = errc_or(body.error, Errc::transport_error);
  throw Error(code, body.detail ? *body.detail : body.error);
}

[[noreturn]] void throw_json_error(const httplib::Result& result) {
  ErrorResponse body;
  try {
    body = decode_json<ErrorResponse>(result->body);
  } catch (const Error&) {
    throw Error(Errc::transport_error, "HTTP " + std::to_string(result->status));
  }
  throw_error(body);
}

std::string path_segment(const std::string& id) {
  return httplib::detail::encode_url(id);
}

}  // namespace

// --- HttpPhotoStore -----------------------------------------------------------

struct HttpPhotoStore::Impl {
  std::unique_ptr<httplib::Client> client;
  std::mutex mutex;
};

HttpPhotoStore::HttpPhotoStore(std::string base_url) : impl_(std::make_unique<Impl>()) {
  impl_->client = make_client(base_url);
}

HttpPhotoStore::~HttpPhotoStore() = default;

namespace {

std::vector<std::string> parse_tags(const std::string& body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (!doc.is_object() || !doc.contains("tags") || !doc["tags"].is_array()) {
    throw Error(Errc::store_unavailable, "malformed tag response");
  }
  std::vector<std::string> tags;
  for (const auto& tag : doc["tags"]) {
    if (tag.is_string()) tags.push_back(tag.get<std::string>());
  }
  return tags;
}

}  // namespace

std::string HttpPhotoStore::upload(std::span<const std::uint8_t> image_bytes) {
  std::lock_guard lock(impl_->mutex);
  auto result = impl_->client->Post("/store/photos", reinterpret_cast<const char*>(image_bytes.data()),
                                    image_bytes.size(), "image/x-portable-graymap");
  if (!result) transport_failure("upload", result.error());
  if (result->status != 201) throw_json_error(result);
  const auto doc = nlohmann::json::parse(result->body, nullptr, false);
  if (!doc.is_object() || !doc.contains("photo_id") || !doc["photo_id"].is_string()) {
    throw Error(Errc::store_unavailable, "malformed upload response");
  }
  return doc["photo_id"].get<std::string>();
}

Bytes HttpPhotoStore::fetch(const std::string& id) {
  std::lock_guard lock(impl_->mutex);
  auto result = impl_->client->Get("/store/photos/" + path_segment(id));
  if (!result) transport_failure("fetch", result.error());
  if (result->status != 200) throw_json_error(result);
  return Bytes(result->body.begin(), result->body.end());
}

std::vector<std::string> HttpPhotoStore::add_tags(const std::string& id, const std::vector<std::string>& tags) {
  std::lock_guard lock(impl_->mutex);
  auto result = impl_->client->Post("/store/photos/" + path_segment(id) + "/tags",
                                    nlohmann::json{{"tags", tags}}.dump(), "application/json");
  if (!result) transport_failure("add_tags", result.error());
  if (result->status != 200) throw_json_error(result);
  return parse_tags(result->body);
}

std::vector<std::string> HttpPhotoStore::get_tags(const std::string& id) {
  std::lock_guard lock(impl_->mutex);
  auto result = impl_->client->Get("/store/photos/" + path_segment(id) + "/tags");
  if (!result) transport_failure("get_tags", result.error());
  if (result->status != 200) throw_json_error(result);
  return parse_tags(result->body);
}

// --- ServerClient -------------------------------------------------------------

std::string_view encoding_name(Encoding encoding) noexcept { return encoding == Encoding::rest ? "rest" : "soap"; }

struct ServerClient::Impl {
  std::unique_ptr<httplib::Client> client;
  Encoding encoding;
  std::string last_body;
  std::string last_error_json;

  // Sends an XML envelope; returns the decoded reply or throws its ErrorResponse.
  WireMessage soap(const WireMessage& request) {
    auto result = client->Post("/v1/soap", encode_xml(request), "application/xml");
    if (!result) transport_failure("soap", result.error());
    last_body = result->body;
    WireMessage reply = decode_xml(result->body);
    if (const auto* error = std::get_if<ErrorResponse>(&reply)) {
      last_error_json = encode_json(*error);
      throw_error(*error);
    }
    return reply;
  }

  const std::string& rest_checked(const httplib::Result& result, int expected, const char* what) {
    if (!result) transport_failure(what, result.error());
    last_body = result->body;
    if (result->status != expected) {
      last_error_json = result->body;
      throw_json_error(result);
    }
    return last_body;
  }

  template <typename Record>
  static Record expect(WireMessage reply) {
    if (auto* record = std::get_if<Record>(&reply)) return std::move(*record);
    throw Error(Errc::malformed_body, "unexpected reply record");
  }
};

ServerClient::ServerClient(std::string base_url, Encoding encoding) : impl_(std::make_unique<Impl>()) {
  impl_->client = make_client(base_url);
  impl_->encoding = encoding;
}

ServerClient::~ServerClient() = default;

LookupResponse ServerClient::lookup(std::span<const std::uint8_t> image) {
  if (impl_->encoding == Encoding::soap) {
    return Impl::expect<LookupResponse>(impl_->soap(LookupRequest{Bytes(image.begin(), image.end())}));
  }
  auto result = impl_->client->Post("/v1/rest/lookup", reinterpret_cast<const char*>(image.data()), image.size(),
                                    "image/x-portable-graymap");
  return decode_json<LookupResponse>(impl_->rest_checked(result, 200, "lookup"));
}

std::string ServerClient::submit_job(const SubmitJobRequest& request) {
  if (impl_->encoding == Encoding::soap) return Impl::expect<SubmitJobResponse>(impl_->soap(request)).job_id;
  auto result = impl_->client->Post("/v1/rest/jobs", encode_json(request), "application/json");
  return decode_json<SubmitJobResponse>(impl_->rest_checked(result, 202, "submit_job")).job_id;
}

JobStatusResponse ServerClient::job_status(const std::string& job_id) {
  if (impl_->encoding == Encoding::soap) {
    return Impl::expect<JobStatusResponse>(impl_->soap(JobStatusRequest{job_id}));
  }
  auto result = impl_->client->Get("/v1/rest/jobs/" + path_segment(job_id));
  return decode_json<JobStatusResponse>(impl_->rest_checked(result, 200, "job_status"));
}

WireMetrics ServerClient::metrics() {
  auto result = impl_->client->Get("/v1/metrics");
  return decode_json<WireMetrics>(impl_->rest_checked(result, 200, "metrics"));
}

const std::string& ServerClient::last_body() const noexcept { return impl_->last_body; }

const std::string& ServerClient::last_error_json() const noexcept { return impl_->last_error_json; }

}  // namespace pervascan
