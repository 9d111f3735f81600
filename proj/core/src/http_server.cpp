#include "pervascan/http_server.hpp"

#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"

namespace pervascan {

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kXml = "application/xml";
constexpr const char* kPgm = "image/x-portable-graymap";

std::span<const std::uint8_t> body_bytes(const httplib::Request& req) {
  return {reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()};
}

// Decoder failures travel as decode_failed with the decoder code as detail.
ErrorResponse error_body(const Error& e) {
  if (is_decoder_error(e.code())) return {"decode_failed", std::string(e.name())};
  return {std::string(e.name()), std::nullopt};
}

int status_for(const Error& e) {
  return is_decoder_error(e.code()) ? 422 : http_status_for(e.code());
}

void reply_json_error(httplib::Response& res, const Error& e) {
  res.status = status_for(e);
  res.set_content(encode_json(error_body(e)), kJson);
}

void reply_xml_error(httplib::Response& res, const Error& e) {
  res.status = status_for(e);
  res.set_content(encode_xml(error_body(e)), kXml);
}

template <typename Handler>
void guarded_json(httplib::Response& res, Handler&& handler) {
  try {
    handler();
  } catch (const Error& e) {
    reply_json_error(res, e);
  } catch (const std::exception& e) {
    reply_json_error(res, Error(Errc::transport_error, e.what()));
  }
}

std::string tags_json(const std::vector<std::string>& tags) { return nlohmann::json{{"tags", tags}}.dump(); }

void mount_store_routes(httplib::Server& server, PhotoStore& store) {
  server.Post("/store/photos", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      const std::string id = store.upload(body_bytes(req));
      res.status = 201;
      res.set_content(nlohmann::json{{"photo_id", id}}.dump(), kJson);
    });
  });
  server.Get(R"(/store/photos/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      const Bytes bytes = store.fetch(req.matches[1]);
      res.set_content(std::string(bytes.begin(), bytes.end()), kPgm);
    });
  });
  server.Get(R"(/store/photos/([^/]+)/tags)", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] { res.set_content(tags_json(store.get_tags(req.matches[1])), kJson); });
  });
  server.Post(R"(/store/photos/([^/]+)/tags)", [&store](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      const auto doc = nlohmann::json::parse(req.body, nullptr, false);
      if (!doc.is_object() || !doc.contains("tags") || !doc["tags"].is_array()) {
        throw Error(Errc::malformed_body, "expected {\"tags\":[...]}");
      }
      std::vector<std::string> tags;
      for (const auto& tag : doc["tags"]) {
        if (!tag.is_string()) throw Error(Errc::malformed_body, "tags must be strings");
        tags.push_back(tag.get<std::string>());
      }
      res.set_content(tags_json(store.add_tags(req.matches[1], tags)), kJson);
    });
  });
}

void mount_computation_routes(httplib::Server& server, ComputationService& service) {
  server.Post("/v1/rest/lookup", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      const LookupResponse response = service.handle_online(body_bytes(req), req.body.size());
      res.set_content(encode_json(response), kJson);
    });
  });
  server.Post("/v1/rest/jobs", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      SubmitJobRequest request;
      try {
        request = decode_json<SubmitJobRequest>(req.body);
      } catch (const Error&) {
        // Left empty: submit_job counts the bytes and rejects it as invalid_request.
      }
      const std::string job_id = service.submit_job(request, req.body.size());
      res.status = 202;
      res.set_content(encode_json(SubmitJobResponse{job_id}), kJson);
    });
  });
  server.Get(R"(/v1/rest/jobs/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded_json(res, [&] {
      res.set_content(encode_json(JobStatusResponse::from_job(service.job_status(req.matches[1]))), kJson);
    });
  });
  server.Get("/v1/metrics", [&service](const httplib::Request&, httplib::Response& res) {
    res.set_content(encode_json(service.metrics()), kJson);
  });
  server.Post("/v1/soap", [&service](const httplib::Request& req, httplib::Response& res) {
    try {
      const WireMessage message = decode_xml(req.body);
      if (const auto* lookup = std::get_if<LookupRequest>(&message)) {
        res.set_content(encode_xml(service.handle_online(lookup->image, req.body.size())), kXml);
      } else if (const auto* submit = std::get_if<SubmitJobRequest>(&message)) {
        res.status = 202;
        res.set_content(encode_xml(SubmitJobResponse{service.submit_job(*submit, req.body.size())}), kXml);
      } else if (const auto* status = std::get_if<JobStatusRequest>(&message)) {
        res.set_content(encode_xml(JobStatusResponse::from_job(service.job_status(status->job_id))), kXml);
      } else {
        throw Error(Errc::invalid_request, "envelope does not hold a request record");
      }
    } catch (const Error& e) {
      reply_xml_error(res, e);
    } catch (const std::exception& e) {
      reply_xml_error(res, Error(Errc::transport_error, e.what()));
    }
  });
}

}  // namespace

int http_status_for(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_image:
    case Errc::invalid_request:
    case Errc::malformed_body:
    case Errc::invalid_tag:
      return 400;
    case Errc::decode_failed:
      return 422;
    case Errc::product_not_found:
    case Errc::photo_not_found:
    case Errc::job_not_found:
      return 404;
    case Errc::queue_full:
    case Errc::store_unavailable:
      return 503;
    default:
      return 500;
  }
}

HttpServer::HttpServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    if (impl_->port < 0) impl_->port = 0;
  } else if (impl_->server.bind_to_port(host, port)) {
    impl_->port = port;
  }
  if (impl_->port <= 0) {
    throw Error(Errc::transport_error, "cannot bind " + host + ":" + std::to_string(port));
  }
  return impl_->port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const noexcept { return impl_->port; }

std::unique_ptr<HttpServer> make_store_server(PhotoStore& store) {
  auto impl = std::make_unique<HttpServer::Impl>();
  mount_store_routes(impl->server, store);
  return std::make_unique<HttpServer>(std::move(impl));
}

std::unique_ptr<HttpServer> make_computation_server(ComputationService& service, PhotoStore* store) {
  auto impl = std::make_unique<HttpServer::Impl>();
  mount_computation_routes(impl->server, service);
  if (store) mount_store_routes(impl->server, *store);
  return std::make_unique<HttpServer>(std::move(impl));
}

}  // namespace pervascan
