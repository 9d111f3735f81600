#include <gtest/gtest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"
#include "pervascan/http_server.hpp"
#include "pervascan/pgm.hpp"
#include "pervascan/render.hpp"
#include "pervascan/server_client.hpp"
#include "pervascan/service.hpp"
#include "test_support.hpp"

namespace pervascan {
namespace {

const std::string kMsisdn = "+15551234567";

std::string photo_body(const std::string& code) {
  const Bytes bytes = save_pgm(render_ean13(Ean13::parse(code), {}));
  return {bytes.begin(), bytes.end()};
}

class HttpTest : public ::testing::Test {
protected:
  void SetUp() override {
    port = server->bind("127.0.0.1", 0);
    server->start();
  }
  void TearDown() override { server->stop(); }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }

  testing::TempDir dir;
  FixtureCatalog catalog = FixtureCatalog::load(PERVASCAN_FIXTURE_DIR "/catalog.jsonl");
  MemoryPhotoStore store{2};
  InboxNotifier sms{dir.path() / "inbox.jsonl"};
  ComputationService service{store, catalog, sms, {.seed = 4}};
  std::unique_ptr<HttpServer> server = make_computation_server(service, &store);
  int port = 0;
};

httplib::Result post(int port, const std::string& path, const std::string& body, const char* type) {
  httplib::Client client("127.0.0.1", port);
  return client.Post(path, body, type);
}

httplib::Result get(int port, const std::string& path) {
  httplib::Client client("127.0.0.1", port);
  return client.Get(path);
}

TEST_F(HttpTest, RestLookup) {
  const auto res = post(port, "/v1/rest/lookup", photo_body("9780131103627"), "image/x-portable-graymap");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto body = decode_json<LookupResponse>(res->body);
  EXPECT_EQ(body.title, "The C Programming Language");
  EXPECT_EQ(body.cheapest->price_cents, 3899);
}

TEST_F(HttpTest, RestLookupErrors) {
  auto res = post(port, "/v1/rest/lookup", "garbage", "image/x-portable-graymap");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(decode_json<ErrorResponse>(res->body).error, "invalid_image");

  const Bytes blank = save_pgm(GrayImage(120, 30, 200));
  res = post(port, "/v1/rest/lookup", std::string(blank.begin(), blank.end()), "image/x-portable-graymap");
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(decode_json<ErrorResponse>(res->body), (ErrorResponse{"decode_failed", "no_contrast"}));

  res = post(port, "/v1/rest/lookup", photo_body("4006381333931"), "image/x-portable-graymap");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(decode_json<ErrorResponse>(res->body).error, "product_not_found");
}

TEST_F(HttpTest, RestJobs) {
  const std::string body = photo_body("9780131103627");
  const std::string photo = store.upload(std::vector<std::uint8_t>(body.begin(), body.end()));
  auto res = post(port, "/v1/rest/jobs", encode_json(SubmitJobRequest{photo, kMsisdn}), "application/json");
  ASSERT_EQ(res->status, 202);
  const std::string job_id = decode_json<SubmitJobResponse>(res->body).job_id;
  EXPECT_EQ(job_id.size(), 16u);
  service.drain();
  res = get(port, "/v1/rest/jobs/" + job_id);
  ASSERT_EQ(res->status, 200);
  const auto status = decode_json<JobStatusResponse>(res->body);
  EXPECT_EQ(status.state, JobState::done);
  EXPECT_EQ(status.barcode, "9780131103627");

  EXPECT_EQ(get(port, "/v1/rest/jobs/ffffffffffffffff")->status, 404);
  EXPECT_EQ(post(port, "/v1/rest/jobs", "{oops", "application/json")->status, 400);
  res = post(port, "/v1/rest/jobs", R"({"photo_id":"x","msisdn":"abc"})", "application/json");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(decode_json<ErrorResponse>(res->body).error, "invalid_request");
}

TEST_F(HttpTest, SoapEnvelope) {
  const Bytes image = save_pgm(render_ean13(Ean13::parse("9780131103627"), {}));
  auto res = post(port, "/v1/soap", encode_xml(LookupRequest{image}), "text/xml");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(std::get<LookupResponse>(decode_xml(res->body)).barcode, "9780131103627");

  res = post(port, "/v1/soap", encode_xml(JobStatusRequest{"ffffffffffffffff"}), "text/xml");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(std::get<ErrorResponse>(decode_xml(res->body)).error, "job_not_found");

  res = post(port, "/v1/soap", "<Envelope><Body>", "text/xml");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(std::get<ErrorResponse>(decode_xml(res->body)).error, "malformed_body");

  // Responses are not requests.
  res = post(port, "/v1/soap", encode_xml(SubmitJobResponse{"x"}), "text/xml");
  EXPECT_EQ(res->status, 400);
}

TEST_F(HttpTest, ClientsAgreeAcrossEncodings) {
  ServerClient rest(url(), Encoding::rest);
  ServerClient soap(url(), Encoding::soap);
  const Bytes image = save_pgm(render_ean13(Ean13::parse("9780201633610"), {}));
  EXPECT_EQ(rest.lookup(image), soap.lookup(image));
  EXPECT_EQ(rest.lookup(image).cheapest->seller, "alpha");

  const std::string photo = store.upload(image);
  const std::string a = rest.submit_job({photo, kMsisdn});
  const std::string b = soap.submit_job({photo, kMsisdn});
  service.drain();
  EXPECT_EQ(rest.job_status(a).state, JobState::done);
  EXPECT_EQ(soap.job_status(b).state, JobState::done);
  EXPECT_EQ(rest.job_status(b), soap.job_status(b));
}

TEST_F(HttpTest, ClientErrorsCarryWireCodes) {
  for (Encoding encoding : {Encoding::rest, Encoding::soap}) {
    ServerClient client(url(), encoding);
    try {
      client.lookup(save_pgm(GrayImage(120, 30, 200)));
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::decode_failed);
      EXPECT_STREQ(e.what(), "no_contrast");
    }
    EXPECT_EQ(nlohmann::json::parse(client.last_error_json()),
              nlohmann::json::parse(R"({"error":"decode_failed","detail":"no_contrast"})"));
    try {
      client.job_status("ffffffffffffffff");
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::job_not_found);
    }
  }
}

TEST_F(HttpTest, MetricsReflectRequestBodies) {
  ServerClient client(url(), Encoding::rest);
  const Bytes image = save_pgm(render_ean13(Ean13::parse("9780131103627"), {}));
  client.lookup(image);
  const std::string photo = store.upload(image);
  client.submit_job({photo, kMsisdn});
  service.drain();
  const WireMetrics metrics = client.metrics();
  EXPECT_EQ(metrics.online_requests, 1u);
  EXPECT_EQ(metrics.online_bytes_in, image.size());
  EXPECT_EQ(metrics.offline_requests, 1u);
  EXPECT_EQ(metrics.offline_bytes_in, encode_json(SubmitJobRequest{photo, kMsisdn}).size());
}

TEST_F(HttpTest, StoreRoutesMounted) {
  const std::string body = photo_body("9780131103627");
  auto res = post(port, "/store/photos", body, "image/x-portable-graymap");
  ASSERT_EQ(res->status, 201);
  const std::string id = nlohmann::json::parse(res->body)["photo_id"];
  res = get(port, "/store/photos/" + id);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, body);
  EXPECT_EQ(get(port, "/store/photos/nope")->status, 404);
  EXPECT_EQ(post(port, "/store/photos", "junk", "image/x-portable-graymap")->status, 400);
}

TEST(HttpStatus, Mapping) {
  EXPECT_EQ(http_status_for(Errc::invalid_image), 400);
  EXPECT_EQ(http_status_for(Errc::invalid_request), 400);
  EXPECT_EQ(http_status_for(Errc::malformed_body), 400);
  EXPECT_EQ(http_status_for(Errc::decode_failed), 422);
  EXPECT_EQ(http_status_for(Errc::product_not_found), 404);
  EXPECT_EQ(http_status_for(Errc::job_not_found), 404);
  EXPECT_EQ(http_status_for(Errc::queue_full), 503);
  EXPECT_EQ(http_status_for(Errc::transport_error), 500);
}

TEST(HttpClient, UnreachableServerIsTransportError) {
  ServerClient client("http://127.0.0.1:1", Encoding::rest);
  try {
    client.metrics();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::transport_error);
  }
}

}  // namespace
}  // namespace pervascan
