#include "pervascan/error.hpp"

namespace pervascan {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_header: return "bad_header";
    case Errc::unsupported_maxval: return "unsupported_maxval";
    case Errc::truncated_payload: return "truncated_payload";
    case Errc::invalid_code: return "invalid_code";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::bad_length: return "bad_length";
    case Errc::no_contrast: return "no_contrast";
    case Errc::no_barcode_found: return "no_barcode_found";
    case Errc::digit_unreadable: return "digit_unreadable";
    case Errc::unknown_parity_pattern: return "unknown_parity_pattern";
    case Errc::checksum_mismatch: return "checksum_mismatch";
    case Errc::invalid_image: return "invalid_image";
    case Errc::photo_not_found: return "photo_not_found";
    case Errc::invalid_tag: return "invalid_tag";
    case Errc::store_unavailable: return "store_unavailable";
    case Errc::file_unreadable: return "file_unreadable";
    case Errc::malformed_record: return "malformed_record";
    case Errc::duplicate_barcode: return "duplicate_barcode";
    case Errc::invalid_barcode: return "invalid_barcode";
    case Errc::product_not_found: return "product_not_found";
    case Errc::invalid_recipient: return "invalid_recipient";
    case Errc::empty_body: return "empty_body";
    case Errc::invalid_request: return "invalid_request";
    case Errc::malformed_body: return "malformed_body";
    case Errc::job_not_found: return "job_not_found";
    case Errc::queue_full: return "queue_full";
    case Errc::decode_failed: return "decode_failed";
    case Errc::transport_error: return "transport_error";
  }
  return "unknown";
}

std::optional<Errc> errc_from_name(std::string_view name) noexcept {
  for (int i = 0; i <= static_cast<int>(Errc::transport_error); ++i) {
    const auto code = static_cast<Errc>(i);
    if (errc_name(code) == name) return code;
  }
  return std::nullopt;
}

}  // namespace pervascan
