#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"
#include "pervascan/http_server.hpp"
#include "pervascan/pgm.hpp"
#include "pervascan/photo_store.hpp"
#include "test_support.hpp"

namespace pervascan {
namespace {

Bytes small_pgm(std::uint8_t fill = 7) { return save_pgm(GrayImage(3, 2, fill)); }

template <typename Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return Errc::invalid_argument;
}

// Each fixture exposes the same PhotoStore contract through a different backend.
struct MemoryBackend {
  MemoryPhotoStore store{1};
  PhotoStore& get() { return store; }
};

struct DirectoryBackend {
  testing::TempDir dir;
  DirectoryPhotoStore store{dir.path(), 1};
  PhotoStore& get() { return store; }
};

struct HttpBackend {
  MemoryPhotoStore backing{1};
  std::unique_ptr<HttpServer> server = make_store_server(backing);
  std::unique_ptr<HttpPhotoStore> client;
  HttpBackend() {
    const int port = server->bind("127.0.0.1", 0);
    server->start();
    client = std::make_unique<HttpPhotoStore>("http://127.0.0.1:" + std::to_string(port));
  }
  PhotoStore& get() { return *client; }
};

template <typename Backend>
class PhotoStoreContract : public ::testing::Test {
protected:
  Backend backend;
  PhotoStore& store() { return backend.get(); }
};

using Backends = ::testing::Types<MemoryBackend, DirectoryBackend, HttpBackend>;
TYPED_TEST_SUITE(PhotoStoreContract, Backends);

TYPED_TEST(PhotoStoreContract, UploadThenFetchIsBitExact) {
  const Bytes bytes = small_pgm();
  const std::string id = this->store().upload(bytes);
  EXPECT_TRUE(is_valid_photo_id(id));
  EXPECT_EQ(id.size(), 16u);
  EXPECT_EQ(this->store().fetch(id), bytes);
}

TYPED_TEST(PhotoStoreContract, IdenticalUploadsGetDistinctIds) {
  const Bytes bytes = small_pgm();
  EXPECT_NE(this->store().upload(bytes), this->store().upload(bytes));
}

TYPED_TEST(PhotoStoreContract, RejectsNonPgmUpload) {
  const Bytes garbage{'h', 'e', 'l', 'l', 'o'};
  EXPECT_EQ(error_of([&] { this->store().upload(garbage); }), Errc::invalid_image);
}

TYPED_TEST(PhotoStoreContract, UnknownIdIsNotFound) {
  EXPECT_EQ(error_of([&] { this->store().fetch("0123456789abcdef"); }), Errc::photo_not_found);
  EXPECT_EQ(error_of([&] { this->store().get_tags("0123456789abcdef"); }), Errc::photo_not_found);
  EXPECT_EQ(error_of([&] { this->store().add_tags("0123456789abcdef", {"x"}); }), Errc::photo_not_found);
}

TYPED_TEST(PhotoStoreContract, TagsKeepInsertionOrderWithoutDuplicates) {
  const std::string id = this->store().upload(small_pgm());
  EXPECT_TRUE(this->store().get_tags(id).empty());
  EXPECT_EQ(this->store().add_tags(id, {"a", "b"}), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(this->store().add_tags(id, {"b", "title:C Programming Language", "a"}),
            (std::vector<std::string>{"a", "b", "title:C Programming Language"}));
  EXPECT_EQ(this->store().add_tags(id, {"b", "title:C Programming Language", "a"}),
            (std::vector<std::string>{"a", "b", "title:C Programming Language"}));
  EXPECT_EQ(this->store().get_tags(id), (std::vector<std::string>{"a", "b", "title:C Programming Language"}));
}

TYPED_TEST(PhotoStoreContract, InvalidTagRejectsWholeCall) {
  const std::string id = this->store().upload(small_pgm());
  EXPECT_EQ(error_of([&] { this->store().add_tags(id, {"ok", ""}); }), Errc::invalid_tag);
  EXPECT_EQ(error_of([&] { this->store().add_tags(id, {"line\nbreak"}); }), Errc::invalid_tag);
  EXPECT_EQ(error_of([&] { this->store().add_tags(id, {std::string(129, 'x')}); }), Errc::invalid_tag);
  EXPECT_TRUE(this->store().get_tags(id).empty());
}

TYPED_TEST(PhotoStoreContract, TagWritesNeverTouchImageBytes) {
  const Bytes bytes = small_pgm(200);
  const std::string id = this->store().upload(bytes);
  for (int i = 0; i < 5; ++i) this->store().add_tags(id, {"tag" + std::to_string(i)});
  EXPECT_EQ(this->store().fetch(id), bytes);
}

TYPED_TEST(PhotoStoreContract, ConcurrentTagWritersLoseNothing) {
  const std::string id = this->store().upload(small_pgm());
  std::vector<std::thread> writers;
  for (int w = 0; w < 4; ++w) {
    writers.emplace_back([&, w] {
      for (int i = 0; i < 10; ++i) this->store().add_tags(id, {"w" + std::to_string(w) + "-" + std::to_string(i)});
    });
  }
  for (auto& t : writers) t.join();
  EXPECT_EQ(this->store().get_tags(id).size(), 40u);
}

TEST(PhotoStore, TagValidation) {
  EXPECT_TRUE(is_valid_tag("title:Caf\xc3\xa9"));
  EXPECT_TRUE(is_valid_tag(std::string(128, 'x')));
  // 128 two-byte characters are still 128 characters.
  std::string accented;
  for (int i = 0; i < 128; ++i) accented += "\xc3\xa9";
  EXPECT_TRUE(is_valid_tag(accented));
  EXPECT_FALSE(is_valid_tag(std::string(129, 'x')));
  EXPECT_FALSE(is_valid_tag("tab\there"));
  EXPECT_FALSE(is_valid_tag("del\x7f"));
}

TEST(PhotoStore, PhotoIdShape) {
  EXPECT_TRUE(is_valid_photo_id("0123456789abcdef"));
  EXPECT_TRUE(is_valid_photo_id("A-b_c.d~e"));
  EXPECT_FALSE(is_valid_photo_id(""));
  EXPECT_FALSE(is_valid_photo_id("../etc/passwd"));
  EXPECT_FALSE(is_valid_photo_id("has space"));
}

TEST(PhotoStore, SeededIdsAreReproducible) {
  MemoryPhotoStore a(42), b(42);
  EXPECT_EQ(a.upload(small_pgm()), b.upload(small_pgm()));
}

TEST(DirectoryPhotoStore, LayoutIsInspectable) {
  testing::TempDir dir;
  DirectoryPhotoStore store(dir.path(), 3);
  const Bytes bytes = small_pgm();
  const std::string id = store.upload(bytes);
  store.add_tags(id, {"barcode:9780131103627"});
  EXPECT_TRUE(std::filesystem::exists(dir.path() / (id + ".pgm")));
  std::ifstream tags(dir.path() / (id + ".tags.json"));
  EXPECT_EQ(nlohmann::json::parse(tags), nlohmann::json::array({"barcode:9780131103627"}));

  // A second instance over the same directory sees the same photos.
  DirectoryPhotoStore reopened(dir.path());
  EXPECT_EQ(reopened.fetch(id), bytes);
  EXPECT_EQ(reopened.get_tags(id), (std::vector<std::string>{"barcode:9780131103627"}));
}

TEST(HttpPhotoStore, UnreachableServerIsTransportError) {
  HttpPhotoStore client("http://127.0.0.1:1");
  EXPECT_EQ(error_of([&] { client.fetch("0123456789abcdef"); }), Errc::transport_error);
}

}  // namespace
}  // namespace pervascan
