#include "pervascan/wire.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

using ordered_json = nlohmann::ordered_json;
using nlohmann::json;
namespace pt = boost::property_tree;

template <typename... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

[[noreturn]] void malformed(const std::string& why) { throw Error(Errc::malformed_body, why); }

// --- JSON helpers -----------------------------------------------------------

json parse_object(std::string_view body) {
  json doc = json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed("body is not a JSON object");
  return doc;
}

std::string get_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) malformed(std::string("missing string field ") + key);
  return it->get<std::string>();
}

std::optional<std::string> get_optional_string(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) malformed(std::string("field ") + key + " is not a string");
  return it->get<std::string>();
}

std::int64_t get_int(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number_integer()) malformed(std::string("missing integer field ") + key);
  return it->get<std::int64_t>();
}

std::uint64_t get_uint(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number_unsigned()) malformed(std::string("missing counter field ") + key);
  return it->get<std::uint64_t>();
}

JobState parse_state(const std::string& name) {
  auto state = job_state_from_name(name);
  if (!state) malformed("unknown job state " + name);
  return *state;
}

ordered_json optional_json(const std::optional<std::string>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

ordered_json to_json_value(const WireMessage& message) {
  return std::visit(
      overloaded{
          [](const LookupRequest& m) { return ordered_json{{"image_base64", base64_encode(m.image)}}; },
          [](const LookupResponse& m) {
            ordered_json out{{"barcode", m.barcode},
                             {"title", m.title},
                             {"authors", m.authors},
                             {"list_price_cents", m.list_price_cents},
                             {"currency", m.currency}};
            out["cheapest"] = m.cheapest ? ordered_json{{"seller", m.cheapest->seller},
                                                        {"price_cents", m.cheapest->price_cents}}
                                         : ordered_json(nullptr);
            return out;
          },
          [](const SubmitJobRequest& m) { return ordered_json{{"photo_id", m.photo_id}, {"msisdn", m.msisdn}}; },
          [](const SubmitJobResponse& m) { return ordered_json{{"job_id", m.job_id}}; },
          [](const JobStatusRequest& m) { return ordered_json{{"job_id", m.job_id}}; },
          [](const JobStatusResponse& m) {
            ordered_json out{{"job_id", m.job_id}, {"photo_id", m.photo_id}, {"state", job_state_name(m.state)}};
            out["failed_stage"] =
                m.failed_stage ? ordered_json(job_state_name(*m.failed_stage)) : ordered_json(nullptr);
            out["error_code"] = optional_json(m.error_code);
            out["barcode"] = optional_json(m.barcode);
            out["created_at"] = m.created_at;
            out["updated_at"] = m.updated_at;
            return out;
          },
          [](const ErrorResponse& m) {
            ordered_json out{{"error", m.error}};
            if (m.detail) out["detail"] = *m.detail;
            return out;
          },
      },
      message);
}

// --- XML helpers ------------------------------------------------------------

const pt::ptree& require_child(const pt::ptree& node, const char* name) {
  auto child = node.get_child_optional(name);
  if (!child) malformed(std::string("missing element ") + name);
  return *child;
}

std::string text_of(const pt::ptree& node, const char* name) { return require_child(node, name).data(); }

std::optional<std::string> optional_text(const pt::ptree& node, const char* name) {
  auto child = node.get_child_optional(name);
  if (!child) return std::nullopt;
  return child->data();
}

std::int64_t int_of(const pt::ptree& node, const char* name) {
  const std::string text = text_of(node, name);
  std::size_t used = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    malformed(std::string("element ") + name + " is not an integer");
  }
  if (used != text.size()) malformed(std::string("element ") + name + " is not an integer");
  return value;
}

pt::ptree to_xml_body(const WireMessage& message) {
  pt::ptree body;
  std::visit(overloaded{
                 [&](const LookupRequest& m) { body.put("LookupRequest.ImageBase64", base64_encode(m.image)); },
                 [&](const LookupResponse& m) {
                   pt::ptree& r = body.put_child("LookupResponse", {});
                   r.put("Barcode", m.barcode);
                   r.put("Title", m.title);
                   pt::ptree& authors = r.put_child("Authors", {});
                   for (const auto& author : m.authors) authors.add("Author", author);
                   r.put("ListPriceCents", m.list_price_cents);
                   r.put("Currency", m.currency);
                   if (m.cheapest) {
                     r.put("CheapestSeller", m.cheapest->seller);
                     r.put("CheapestPriceCents", m.cheapest->price_cents);
                   }
                 },
                 [&](const SubmitJobRequest& m) {
                   pt::ptree& r = body.put_child("SubmitJobRequest", {});
                   r.put("PhotoId", m.photo_id);
                   r.put("Msisdn", m.msisdn);
                 },
                 [&](const SubmitJobResponse& m) { body.put("SubmitJobResponse.JobId", m.job_id); },
                 [&](const JobStatusRequest& m) { body.put("JobStatusRequest.JobId", m.job_id); },
                 [&](const JobStatusResponse& m) {
                   pt::ptree& r = body.put_child("JobStatusResponse", {});
                   r.put("JobId", m.job_id);
                   r.put("PhotoId", m.photo_id);
                   r.put("State", std::string(job_state_name(m.state)));
                   if (m.failed_stage) r.put("FailedStage", std::string(job_state_name(*m.failed_stage)));
                   if (m.error_code) r.put("ErrorCode", *m.error_code);
                   if (m.barcode) r.put("Barcode", *m.barcode);
                   r.put("CreatedAt", m.created_at);
                   r.put("UpdatedAt", m.updated_at);
                 },
                 [&](const ErrorResponse& m) {
                   pt::ptree& r = body.put_child("ErrorResponse", {});
                   r.put("Code", m.error);
                   if (m.detail) r.put("Detail", *m.detail);
                 },
             },
             message);
  return body;
}

WireMessage from_xml_record(const std::string& name, const pt::ptree& r) {
  if (name == "LookupRequest") return LookupRequest{base64_decode(text_of(r, "ImageBase64"))};
  if (name == "LookupResponse") {
    LookupResponse m;
    m.barcode = text_of(r, "Barcode");
    m.title = text_of(r, "Title");
    for (const auto& [key, child] : require_child(r, "Authors")) {
      if (key == "Author") m.authors.push_back(child.data());
    }
    m.list_price_cents = int_of(r, "ListPriceCents");
    m.currency = text_of(r, "Currency");
    const bool has_seller = r.get_child_optional("CheapestSeller").has_value();
    const bool has_price = r.get_child_optional("CheapestPriceCents").has_value();
    if (has_seller != has_price) malformed("CheapestSeller and CheapestPriceCents must appear together");
    if (has_seller) m.cheapest = CheapestOffer{text_of(r, "CheapestSeller"), int_of(r, "CheapestPriceCents")};
    return m;
  }
  if (name == "SubmitJobRequest") return SubmitJobRequest{text_of(r, "PhotoId"), text_of(r, "Msisdn")};
  if (name == "SubmitJobResponse") return SubmitJobResponse{text_of(r, "JobId")};
  if (name == "JobStatusRequest") return JobStatusRequest{text_of(r, "JobId")};
  if (name == "JobStatusResponse") {
    JobStatusResponse m;
    m.job_id = text_of(r, "JobId");
    m.photo_id = text_of(r, "PhotoId");
    m.state = parse_state(text_of(r, "State"));
    if (auto stage = optional_text(r, "FailedStage")) m.failed_stage = parse_state(*stage);
    m.error_code = optional_text(r, "ErrorCode");
    m.barcode = optional_text(r, "Barcode");
    m.created_at = text_of(r, "CreatedAt");
    m.updated_at = text_of(r, "UpdatedAt");
    return m;
  }
  if (name == "ErrorResponse") return ErrorResponse{text_of(r, "Code"), optional_text(r, "Detail")};
  malformed("unknown record element " + name);
}

}  // namespace

LookupResponse LookupResponse::from_book(const BookInfo& book) {
  LookupResponse response{book.barcode, book.title, book.authors, book.list_price.price_cents, book.currency(), {}};
  if (auto offer = cheapest_offer(book)) response.cheapest = CheapestOffer{offer->seller, offer->price_cents};
  return response;
}

JobStatusResponse JobStatusResponse::from_job(const OfflineJob& job) {
  return {job.job_id,  job.photo_id,   job.state,     job.failed_stage,
          job.error_code, job.barcode, job.created_at, job.updated_at};
}

std::string encode_json(const WireMessage& message) { return to_json_value(message).dump(); }

std::string encode_json(const WireMetrics& metrics) {
  return ordered_json{{"online_requests", metrics.online_requests},
                      {"online_bytes_in", metrics.online_bytes_in},
                      {"offline_requests", metrics.offline_requests},
                      {"offline_bytes_in", metrics.offline_bytes_in}}
      .dump();
}

template <>
LookupRequest decode_json<LookupRequest>(std::string_view body) {
  return {base64_decode(get_string(parse_object(body), "image_base64"))};
}

template <>
LookupResponse decode_json<LookupResponse>(std::string_view body) {
  const json doc = parse_object(body);
  LookupResponse m;
  m.barcode = get_string(doc, "barcode");
  m.title = get_string(doc, "title");
  auto authors = doc.find("authors");
  if (authors == doc.end() || !authors->is_array()) malformed("missing authors array");
  for (const auto& author : *authors) {
    if (!author.is_string()) malformed("author is not a string");
    m.authors.push_back(author.get<std::string>());
  }
  m.list_price_cents = get_int(doc, "list_price_cents");
  m.currency = get_string(doc, "currency");
  auto cheapest = doc.find("cheapest");
  if (cheapest != doc.end() && !cheapest->is_null()) {
    if (!cheapest->is_object()) malformed("cheapest is not an object");
    m.cheapest = CheapestOffer{get_string(*cheapest, "seller"), get_int(*cheapest, "price_cents")};
  }
  return m;
}

template <>
SubmitJobRequest decode_json<SubmitJobRequest>(std::string_view body) {
  const json doc = parse_object(body);
  return {get_string(doc, "photo_id"), get_string(doc, "msisdn")};
}

template <>
SubmitJobResponse decode_json<SubmitJobResponse>(std::string_view body) {
  return {get_string(parse_object(body), "job_id")};
}

template <>
JobStatusRequest decode_json<JobStatusRequest>(std::string_view body) {
  return {get_string(parse_object(body), "job_id")};
}

template <>
JobStatusResponse decode_json<JobStatusResponse>(std::string_view body) {
  const json doc = parse_object(body);
  JobStatusResponse m;
  m.job_id = get_string(doc, "job_id");
  m.photo_id = get_string(doc, "photo_id");
  m.state = parse_state(get_string(doc, "state"));
  if (auto stage = get_optional_string(doc, "failed_stage")) m.failed_stage = parse_state(*stage);
  m.error_code = get_optional_string(doc, "error_code");
  m.barcode = get_optional_string(doc, "barcode");
  m.created_at = get_string(doc, "created_at");
  m.updated_at = get_string(doc, "updated_at");
  return m;
}

template <>
ErrorResponse decode_json<ErrorResponse>(std::string_view body) {
  const json doc = parse_object(body);
  return {get_string(doc, "error"), get_optional_string(doc, "detail")};
}

template <>
WireMetrics decode_json<WireMetrics>(std::string_view body) {
  const json doc = parse_object(body);
  return {get_uint(doc, "online_requests"), get_uint(doc, "online_bytes_in"), get_uint(doc, "offline_requests"),
          get_uint(doc, "offline_bytes_in")};
}

std::string encode_xml(const WireMessage& message) {
  pt::ptree doc;
  doc.put_child("Envelope.Body", to_xml_body(message));
  std::ostringstream out;
  pt::write_xml(out, doc);
  return out.str();
}

WireMessage decode_xml(std::string_view body) {
  pt::ptree doc;
  try {
    std::istringstream in{std::string(body)};
    pt::read_xml(in, doc);
  } catch (const pt::xml_parser_error& e) {
    malformed(std::string("malformed XML: ") + e.what());
  }
  const pt::ptree& envelope = require_child(doc, "Envelope");
  const pt::ptree& envelope_body = require_child(envelope, "Body");

  std::optional<WireMessage> message;
  for (const auto& [name, child] : envelope_body) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (message) malformed("envelope body holds more than one record");
    message = from_xml_record(name, child);
  }
  if (!message) malformed("empty envelope body");
  return *message;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                      static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  std::string compact;
  compact.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
  }
  if (compact.size() % 4 != 0) malformed("base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(compact.size() / 4 * 3);
  const int written = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(compact.data()),
                                      static_cast<int>(compact.size()));
  if (written < 0) malformed("invalid base64");
  std::size_t padding = 0;
  if (!compact.empty() && compact.back() == '=') ++padding;
  if (compact.size() > 1 && compact[compact.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(written) - padding);
  return out;
}

}  // namespace pervascan
