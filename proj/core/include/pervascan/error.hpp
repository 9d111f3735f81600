#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pervascan {

/// Every failure the library can report. The snake_case name of each value
/// (see errc_name) is the wire vocabulary used in HTTP bodies, job records,
/// SMS text and CLI output.
enum class Errc {
  // imagekit
  bad_magic,
  bad_header,
  unsupported_maxval,
  truncated_payload,
  invalid_code,
  invalid_argument,
  // barcode
  bad_length,
  no_contrast,
  no_barcode_found,
  digit_unreadable,
  unknown_parity_pattern,
  checksum_mismatch,
  // imagestore
  invalid_image,
  photo_not_found,
  invalid_tag,
  store_unavailable,
  // catalog
  file_unreadable,
  malformed_record,
  duplicate_barcode,
  invalid_barcode,
  product_not_found,
  // notifier
  invalid_recipient,
  empty_body,
  // server
  invalid_request,
  malformed_body,
  job_not_found,
  queue_full,
  decode_failed,
  transport_error,
};

std::string_view errc_name(Errc code) noexcept;
/// Inverse of errc_name, for decoding error bodies received over the wire.
std::optional<Errc> errc_from_name(std::string_view name) noexcept;

class Error : public std::runtime_error {
public:
  explicit Error(Errc code) : Error(code, std::string(errc_name(code))) {}
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

private:
  Errc code_;
};

}  // namespace pervascan
