#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"
#include "pervascan/wire.hpp"

namespace pervascan {
namespace {

LookupResponse sample_lookup() {
  return {"9780131103627", "The C Programming Language & <friends>", {"Brian W. Kernighan", "Dennis M. Ritchie"},
          6799, "USD", CheapestOffer{"bargain-shelf", 3899}};
}

JobStatusResponse sample_status() {
  JobStatusResponse status;
  status.job_id = "0123456789abcdef";
  status.photo_id = "fedcba9876543210";
  status.state = JobState::failed;
  status.failed_stage = JobState::decoding;
  status.error_code = "no_contrast";
  status.created_at = "2026-01-02T03:04:05.006Z";
  status.updated_at = "2026-01-02T03:04:05.100Z";
  return status;
}

std::vector<WireMessage> samples() {
  LookupResponse bare = sample_lookup();
  bare.cheapest.reset();
  bare.authors.clear();
  JobStatusResponse done = sample_status();
  done.state = JobState::done;
  done.failed_stage.reset();
  done.error_code.reset();
  done.barcode = "9780131103627";
  return {LookupRequest{{'P', '5', 0, 255, '\n'}},
          LookupRequest{{}},
          sample_lookup(),
          bare,
          SubmitJobRequest{"fedcba9876543210", "+15551234567"},
          SubmitJobResponse{"0123456789abcdef"},
          JobStatusRequest{"0123456789abcdef"},
          sample_status(),
          done,
          ErrorResponse{"decode_failed", "no_contrast"},
          ErrorResponse{"job_not_found", std::nullopt}};
}

template <typename Record>
WireMessage json_round_trip(const Record& record) {
  return decode_json<Record>(encode_json(record));
}

TEST(WireJson, RoundTripsEveryRecord) {
  for (const auto& message : samples()) {
    const WireMessage back = std::visit([](const auto& r) { return json_round_trip(r); }, message);
    EXPECT_EQ(back, message) << encode_json(message);
  }
}

TEST(WireXml, RoundTripsEveryRecord) {
  for (const auto& message : samples()) EXPECT_EQ(decode_xml(encode_xml(message)), message) << encode_xml(message);
}

TEST(WireJson, LookupFieldNames) {
  const auto doc = nlohmann::json::parse(encode_json(sample_lookup()));
  EXPECT_EQ(doc["barcode"], "9780131103627");
  EXPECT_EQ(doc["list_price_cents"], 6799);
  EXPECT_EQ(doc["currency"], "USD");
  EXPECT_EQ(doc["cheapest"]["seller"], "bargain-shelf");
  EXPECT_EQ(doc["cheapest"]["price_cents"], 3899);
  EXPECT_EQ(doc["authors"].size(), 2u);
}

TEST(WireJson, JobStatusUsesUpperCaseStates) {
  const auto doc = nlohmann::json::parse(encode_json(sample_status()));
  EXPECT_EQ(doc["state"], "FAILED");
  EXPECT_EQ(doc["failed_stage"], "DECODING");
  EXPECT_EQ(doc["error_code"], "no_contrast");
}

TEST(WireJson, MalformedBodies) {
  for (const char* body : {"", "{", "[]", R"({"photo_id":"x"})", R"({"photo_id":1,"msisdn":"+15551234567"})"}) {
    try {
      decode_json<SubmitJobRequest>(body);
      ADD_FAILURE() << body;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::malformed_body) << body;
    }
  }
  EXPECT_THROW(decode_json<JobStatusResponse>(R"({"job_id":"a","photo_id":"b","state":"SLEEPING","created_at":"","updated_at":""})"),
               Error);
}

TEST(WireJson, MetricsRoundTrip) {
  const WireMetrics metrics{3, 30123, 2, 96};
  EXPECT_EQ(decode_json<WireMetrics>(encode_json(metrics)), metrics);
}

TEST(WireXml, EnvelopeShape) {
  const std::string xml = encode_xml(SubmitJobRequest{"abc", "+15551234567"});
  EXPECT_NE(xml.find("<Envelope>"), std::string::npos);
  EXPECT_NE(xml.find("<Body>"), std::string::npos);
  EXPECT_NE(xml.find("<SubmitJobRequest>"), std::string::npos);
  EXPECT_NE(xml.find("<PhotoId>abc</PhotoId>"), std::string::npos);
}

TEST(WireXml, MalformedBodies) {
  const std::string good = encode_xml(sample_lookup());
  for (const std::string& body : {std::string(), good.substr(0, good.size() / 2), std::string("<Envelope/>"),
                                  std::string("<Envelope><Body><Nonsense/></Body></Envelope>"),
                                  std::string("<Envelope><Body><SubmitJobRequest><PhotoId>x</PhotoId>"
                                              "</SubmitJobRequest></Body></Envelope>")}) {
    try {
      decode_xml(body);
      ADD_FAILURE() << body;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::malformed_body) << body;
    }
  }
}

TEST(WireXml, SameRecordAsJson) {
  for (const auto& message : samples()) {
    const WireMessage via_xml = decode_xml(encode_xml(message));
    const WireMessage via_json = std::visit([](const auto& r) { return json_round_trip(r); }, message);
    EXPECT_EQ(via_xml, via_json);
  }
}

TEST(Base64, KnownVectors) {
  EXPECT_EQ(base64_encode({}), "");
  EXPECT_EQ(base64_encode({'f'}), "Zg==");
  EXPECT_EQ(base64_encode({'f', 'o', 'o', 'b', 'a', 'r'}), "Zm9vYmFy");
  EXPECT_EQ(base64_decode("Zm9v\nYmE="), (std::vector<std::uint8_t>{'f', 'o', 'o', 'b', 'a'}));
  EXPECT_THROW(base64_decode("Zm9"), Error);
  EXPECT_THROW(base64_decode("Zm9v!!!!"), Error);
}

TEST(Base64, RandomRoundTrips) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> bytes(rng() % 300);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
  }
}

TEST(LookupResponse, FromBook) {
  BookInfo book{"9780201633610", "Design Patterns", {"Gamma"}, {"list", 5499, "USD"}, {{"beta", 950, "USD"}, {"alpha", 950, "USD"}}};
  const auto view = LookupResponse::from_book(book);
  EXPECT_EQ(view.list_price_cents, 5499);
  ASSERT_TRUE(view.cheapest);
  EXPECT_EQ(view.cheapest->seller, "alpha");
  book.offers.clear();
  EXPECT_FALSE(LookupResponse::from_book(book).cheapest);
}

}  // namespace
}  // namespace pervascan
