#include "pervascan/photo_store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "pervascan/clock.hpp"
#include "pervascan/error.hpp"
#include "pervascan/pgm.hpp"

namespace pervascan {

namespace fs = std::filesystem;

namespace {

void require_pgm(std::span<const std::uint8_t> bytes) {
  try {
    (void)load_pgm(bytes);
  } catch (const Error& e) {
    throw Error(Errc::invalid_image, std::string("upload is not a valid PGM: ") + e.what());
  }
}

void require_tags(const std::vector<std::string>& tags) {
  for (const auto& tag : tags) {
    if (!is_valid_tag(tag)) throw Error(Errc::invalid_tag, "invalid tag \"" + tag + "\"");
  }
}

[[noreturn]] void not_found(const std::string& id) { throw Error(Errc::photo_not_found, "no photo " + id); }

void merge_tags(std::vector<std::string>& current, const std::vector<std::string>& incoming) {
  for (const auto& tag : incoming) {
    if (std::find(current.begin(), current.end(), tag) == current.end()) current.push_back(tag);
  }
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_unreadable, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Write-then-rename so readers never observe a partial file.
void write_file_atomically(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::store_unavailable, "cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

bool is_valid_photo_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > kMaxPhotoIdLength) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.' || c == '~';
  });
}

bool is_valid_tag(std::string_view tag) noexcept {
  if (tag.empty()) return false;
  std::size_t code_points = 0;
  for (char ch : tag) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x20 || c == 0x7F) return false;
    if ((c & 0xC0) != 0x80) ++code_points;
  }
  return code_points <= kMaxTagLength;
}

// --- MemoryPhotoStore -------------------------------------------------------

std::string MemoryPhotoStore::upload(std::span<const std::uint8_t> image_bytes) {
  require_pgm(image_bytes);
  std::lock_guard lock(mutex_);
  std::string id = ids_.next();
  while (photos_.count(id)) id = ids_.next();
  photos_[id] = PhotoRecord{id, Bytes(image_bytes.begin(), image_bytes.end()), {}, now_rfc3339()};
  return id;
}

Bytes MemoryPhotoStore::fetch(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = photos_.find(id);
  if (it == photos_.end()) not_found(id);
  return it->second.image_bytes;
}

std::vector<std::string> MemoryPhotoStore::add_tags(const std::string& id, const std::vector<std::string>& tags) {
  require_tags(tags);
  std::lock_guard lock(mutex_);
  auto it = photos_.find(id);
  if (it == photos_.end()) not_found(id);
  merge_tags(it->second.tags, tags);
  return it->second.tags;
}

std::vector<std::string> MemoryPhotoStore::get_tags(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = photos_.find(id);
  if (it == photos_.end()) not_found(id);
  return it->second.tags;
}

std::optional<PhotoRecord> MemoryPhotoStore::record(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = photos_.find(id);
  if (it == photos_.end()) return std::nullopt;
  return it->second;
}

// --- DirectoryPhotoStore ----------------------------------------------------

DirectoryPhotoStore::DirectoryPhotoStore(fs::path dir, std::optional<std::uint64_t> seed)
    : dir_(std::move(dir)), ids_(seed) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (!fs::is_directory(dir_)) throw Error(Errc::store_unavailable, "cannot use store directory " + dir_.string());
}

fs::path DirectoryPhotoStore::image_path(const std::string& id) const { return dir_ / (id + ".pgm"); }

fs::path DirectoryPhotoStore::tags_path(const std::string& id) const { return dir_ / (id + ".tags.json"); }

std::vector<std::string> DirectoryPhotoStore::read_tags(const std::string& id) const {
  if (!is_valid_photo_id(id) || !fs::exists(image_path(id))) not_found(id);
  const fs::path path = tags_path(id);
  if (!fs::exists(path)) return {};
  const Bytes raw = read_file(path);
  const auto doc = nlohmann::json::parse(raw.begin(), raw.end(), nullptr, false);
  if (!doc.is_array()) throw Error(Errc::store_unavailable, "corrupt tag file " + path.string());
  std::vector<std::string> tags;
  for (const auto& item : doc) {
    if (item.is_string()) tags.push_back(item.get<std::string>());
  }
  return tags;
}

std::string DirectoryPhotoStore::upload(std::span<const std::uint8_t> image_bytes) {
  require_pgm(image_bytes);
  std::lock_guard lock(mutex_);
  std::string id = ids_.next();
  while (fs::exists(image_path(id))) id = ids_.next();
  const std::string empty = "[]";
  write_file_atomically(tags_path(id), std::span(reinterpret_cast<const std::uint8_t*>(empty.data()), empty.size()));
  write_file_atomically(image_path(id), image_bytes);
  return id;
}

Bytes DirectoryPhotoStore::fetch(const std::string& id) {
  if (!is_valid_photo_id(id)) not_found(id);
  const fs::path path = image_path(id);
  if (!fs::exists(path)) not_found(id);
  return read_file(path);
}

std::vector<std::string> DirectoryPhotoStore::add_tags(const std::string& id, const std::vector<std::string>& tags) {
  require_tags(tags);
  std::lock_guard lock(mutex_);
  std::vector<std::string> current = read_tags(id);
  merge_tags(current, tags);
  const std::string text = nlohmann::json(current).dump();
  write_file_atomically(tags_path(id), std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return current;
}

std::vector<std::string> DirectoryPhotoStore::get_tags(const std::string& id) {
  std::lock_guard lock(mutex_);
  return read_tags(id);
}

std::unique_ptr<PhotoStore> open_photo_store(const std::string& url_or_dir, std::optional<std::uint64_t> seed) {
  if (url_or_dir.rfind("http://", 0) == 0 || url_or_dir.rfind("https://", 0) == 0) {
    return std::make_unique<HttpPhotoStore>(url_or_dir);
  }
  return std::make_unique<DirectoryPhotoStore>(url_or_dir, seed);
}

}  // namespace pervascan
