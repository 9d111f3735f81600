#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "pervascan/wire.hpp"

namespace pervascan {

enum class Encoding { rest, soap };

std::string_view encoding_name(Encoding encoding) noexcept;

/// Client for the computation server, speaking either the REST/JSON or the
/// XML-envelope encoding. Server errors are rethrown as Error with the wire
/// code; decode_failed carries the decoder code as its message. Connection
/// failures raise Error(transport_error).
class ServerClient {
public:
  ServerClient(std::string base_url, Encoding encoding);
  ~ServerClient();

  LookupResponse lookup(std::span<const std::uint8_t> image);
  std::string submit_job(const SubmitJobRequest& request);
  JobStatusResponse job_status(const std::string& job_id);
  /// Always REST.
  WireMetrics metrics();

  /// Raw body of the most recent response, as received.
  const std::string& last_body() const noexcept;
  /// The last error response, re-encoded as the REST JSON body.
  const std::string& last_error_json() const noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pervascan
