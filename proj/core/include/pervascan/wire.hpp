#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pervascan/catalog.hpp"
#include "pervascan/job.hpp"

namespace pervascan {

// Request/response records shared by the REST/JSON and XML-envelope
// encodings. Both codecs map every record bijectively onto its wire form.

struct LookupRequest {
  std::vector<std::uint8_t> image;

  friend bool operator==(const LookupRequest&, const LookupRequest&) = default;
};

struct CheapestOffer {
  std::string seller;
  std::int64_t price_cents = 0;

  friend bool operator==(const CheapestOffer&, const CheapestOffer&) = default;
};

struct LookupResponse {
  std::string barcode;
  std::string title;
  std::vector<std::string> authors;
  std::int64_t list_price_cents = 0;
  std::string currency;
  std::optional<CheapestOffer> cheapest;

  static LookupResponse from_book(const BookInfo& book);

  friend bool operator==(const LookupResponse&, const LookupResponse&) = default;
};

struct SubmitJobRequest {
  std::string photo_id;
  std::string msisdn;

  friend bool operator==(const SubmitJobRequest&, const SubmitJobRequest&) = default;
};

struct SubmitJobResponse {
  std::string job_id;

  friend bool operator==(const SubmitJobResponse&, const SubmitJobResponse&) = default;
};

struct JobStatusRequest {
  std::string job_id;

  friend bool operator==(const JobStatusRequest&, const JobStatusRequest&) = default;
};

struct JobStatusResponse {
  std::string job_id;
  std::string photo_id;
  JobState state = JobState::received;
  std::optional<JobState> failed_stage;
  std::optional<std::string> error_code;
  std::optional<std::string> barcode;
  std::string created_at;
  std::string updated_at;

  static JobStatusResponse from_job(const OfflineJob& job);

  friend bool operator==(const JobStatusResponse&, const JobStatusResponse&) = default;
};

struct ErrorResponse {
  std::string error;
  std::optional<std::string> detail;

  friend bool operator==(const ErrorResponse&, const ErrorResponse&) = default;
};

struct WireMetrics {
  std::uint64_t online_requests = 0;
  std::uint64_t online_bytes_in = 0;
  std::uint64_t offline_requests = 0;
  std::uint64_t offline_bytes_in = 0;

  friend bool operator==(const WireMetrics&, const WireMetrics&) = default;
};

using WireMessage = std::variant<LookupRequest, LookupResponse, SubmitJobRequest, SubmitJobResponse,
                                 JobStatusRequest, JobStatusResponse, ErrorResponse>;

// JSON. Decoders throw Error(malformed_body) on syntax errors, missing or
// mistyped fields.
std::string encode_json(const WireMessage& message);
std::string encode_json(const WireMetrics& metrics);

template <typename Record>
Record decode_json(std::string_view body);

// XML envelope: <Envelope><Body><Record>...</Record></Body></Envelope>, one
// record per envelope, element names fixed. decode_xml throws
// Error(malformed_body).
std::string encode_xml(const WireMessage& message);
WireMessage decode_xml(std::string_view body);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
/// Whitespace is ignored. Throws Error(malformed_body) on invalid input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace pervascan
