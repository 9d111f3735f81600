#pragma once

#include <memory>
#include <string>

#include "pervascan/photo_store.hpp"
#include "pervascan/service.hpp"

namespace pervascan {

/// An HTTP listener with a fixed route table. Create with one of the
/// make_*_server factories below.
class HttpServer {
public:
  struct Impl;
  explicit HttpServer(std::unique_ptr<Impl> impl);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 binds an ephemeral port. Returns the bound port; throws
  /// Error(transport_error) when the address is unavailable.
  int bind(const std::string& host, int port);
  /// Serves until stop(); requires a prior bind().
  void run();
  /// run() on a background thread.
  void start();
  void stop();

  int port() const noexcept;

private:
  std::unique_ptr<Impl> impl_;
};

/// Image store mock:
///   POST /store/photos              raw PGM          -> 201 {"photo_id"}
///   GET  /store/photos/{id}                          -> 200 raw PGM
///   POST /store/photos/{id}/tags    {"tags":[...]}   -> 200 {"tags":[...]}
///   GET  /store/photos/{id}/tags                     -> 200 {"tags":[...]}
/// Errors are {"error":"<code>"} with 400/404.
std::unique_ptr<HttpServer> make_store_server(PhotoStore& store);

/// Computation server:
///   POST /v1/rest/lookup     raw PGM                       -> 200 lookup JSON
///   POST /v1/rest/jobs       {"photo_id","msisdn"}         -> 202 {"job_id"}
///   GET  /v1/rest/jobs/{id}                                -> 200 job JSON
///   GET  /v1/metrics                                       -> 200 metrics JSON
///   POST /v1/soap            XML envelope (any request)    -> XML envelope
/// When `store` is given the store routes are mounted on the same listener.
std::unique_ptr<HttpServer> make_computation_server(ComputationService& service, PhotoStore* store = nullptr);

/// HTTP status used for an error code on both encodings.
int http_status_for(Errc code) noexcept;

}  // namespace pervascan
