#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pervascan/token.hpp"

namespace pervascan {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kMaxTagLength = 128;
inline constexpr std::size_t kMaxPhotoIdLength = 128;

/// Non-empty, at most kMaxPhotoIdLength, characters from [A-Za-z0-9._~-].
bool is_valid_photo_id(std::string_view id) noexcept;
/// Non-empty, at most kMaxTagLength characters (UTF-8 code points), no
/// control characters.
bool is_valid_tag(std::string_view tag) noexcept;

struct PhotoRecord {
  std::string id;
  Bytes image_bytes;
  std::vector<std::string> tags;
  std::string uploaded_at;
};

/// The public image database of the offline flow: write-once photos with
/// an ordered, duplicate-free tag list.
///
/// Errors: invalid_image (upload of non-PGM bytes), photo_not_found,
/// invalid_tag, store_unavailable (remote stores only).
class PhotoStore {
public:
  virtual ~PhotoStore() = default;

  virtual std::string upload(std::span<const std::uint8_t> image_bytes) = 0;
  virtual Bytes fetch(const std::string& id) = 0;
  /// Appends tags not already present, in order; returns the full tag list.
  virtual std::vector<std::string> add_tags(const std::string& id, const std::vector<std::string>& tags) = 0;
  virtual std::vector<std::string> get_tags(const std::string& id) = 0;
};

/// Volatile store for tests and embedding.
class MemoryPhotoStore final : public PhotoStore {
public:
  explicit MemoryPhotoStore(std::optional<std::uint64_t> seed = std::nullopt) : ids_(seed) {}

  std::string upload(std::span<const std::uint8_t> image_bytes) override;
  Bytes fetch(const std::string& id) override;
  std::vector<std::string> add_tags(const std::string& id, const std::vector<std::string>& tags) override;
  std::vector<std::string> get_tags(const std::string& id) override;

  std::optional<PhotoRecord> record(const std::string& id) const;

private:
  mutable std::mutex mutex_;
  TokenGenerator ids_;
  std::map<std::string, PhotoRecord> photos_;
};

/// Persists each photo as <dir>/<id>.pgm and its tags as <dir>/<id>.tags.json
/// (a JSON array of strings). Reads go to disk, so several processes may
/// share a directory; writes within one process are serialized.
class DirectoryPhotoStore final : public PhotoStore {
public:
  explicit DirectoryPhotoStore(std::filesystem::path dir, std::optional<std::uint64_t> seed = std::nullopt);

  std::string upload(std::span<const std::uint8_t> image_bytes) override;
  Bytes fetch(const std::string& id) override;
  std::vector<std::string> add_tags(const std::string& id, const std::vector<std::string>& tags) override;
  std::vector<std::string> get_tags(const std::string& id) override;

  const std::filesystem::path& directory() const noexcept { return dir_; }

private:
  std::filesystem::path image_path(const std::string& id) const;
  std::filesystem::path tags_path(const std::string& id) const;
  std::vector<std::string> read_tags(const std::string& id) const;

  std::filesystem::path dir_;
  std::mutex mutex_;
  TokenGenerator ids_;
};

/// Client for the store's HTTP/JSON interface (see StoreHttpServer).
class HttpPhotoStore final : public PhotoStore {
public:
  explicit HttpPhotoStore(std::string base_url);
  ~HttpPhotoStore() override;

  std::string upload(std::span<const std::uint8_t> image_bytes) override;
  Bytes fetch(const std::string& id) override;
  std::vector<std::string> add_tags(const std::string& id, const std::vector<std::string>& tags) override;
  std::vector<std::string> get_tags(const std::string& id) override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// "http://..." or "https://..." selects HttpPhotoStore, anything else is a
/// directory for DirectoryPhotoStore.
std::unique_ptr<PhotoStore> open_photo_store(const std::string& url_or_dir,
                                             std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace pervascan
