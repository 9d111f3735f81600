#include "pervascan/notifier.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pervascan/clock.hpp"
#include "pervascan/error.hpp"

namespace pervascan {

namespace {

std::size_t utf8_length(std::string_view text) {
  return static_cast<std::size_t>(
      std::count_if(text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

bool is_valid_msisdn(std::string_view msisdn) noexcept {
  if (!msisdn.empty() && msisdn.front() == '+') msisdn.remove_prefix(1);
  if (msisdn.size() < 7 || msisdn.size() > 15) return false;
  return std::all_of(msisdn.begin(), msisdn.end(), [](char c) { return c >= '0' && c <= '9'; });
}

InboxNotifier::InboxNotifier(std::filesystem::path inbox_file) : path_(std::move(inbox_file)) {
  if (path_.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
  }
}

SmsMessage InboxNotifier::send(const std::string& to, const std::string& body) {
  if (!is_valid_msisdn(to)) throw Error(Errc::invalid_recipient, "invalid recipient \"" + to + "\"");
  if (body.empty()) throw Error(Errc::empty_body, "message body is empty");
  if (utf8_length(body) > kMaxSmsBody) throw Error(Errc::invalid_argument, "message body exceeds 480 characters");

  SmsMessage message{to, body, now_rfc3339()};
  const std::string line =
      nlohmann::json{{"to", message.to}, {"body", message.body}, {"sent_at", message.sent_at}}.dump() + "\n";

  std::lock_guard lock(mutex_);
  const int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(Errc::file_unreadable, "cannot open inbox " + path_.string() + ": " + std::strerror(errno));
  const ssize_t written = ::write(fd, line.data(), line.size());
  ::close(fd);
  if (written != static_cast<ssize_t>(line.size())) {
    throw Error(Errc::file_unreadable, "short write to inbox " + path_.string());
  }
  return message;
}

std::vector<SmsMessage> InboxNotifier::inbox(const std::string& to) const { return read_inbox(path_, to); }

std::vector<SmsMessage> read_inbox(const std::filesystem::path& inbox_file, const std::string& to) {
  std::vector<SmsMessage> messages;
  std::ifstream in(inbox_file);
  std::string line;
  while (std::getline(in, line)) {
    const auto doc = nlohmann::json::parse(line, nullptr, false);
    if (!doc.is_object() || !doc.contains("to") || !doc["to"].is_string()) continue;
    if (doc["to"].get<std::string>() != to) continue;
    messages.push_back({to, doc.value("body", ""), doc.value("sent_at", "")});
  }
  return messages;
}

}  // namespace pervascan
