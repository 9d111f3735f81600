#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace pervascan {

inline constexpr std::size_t kMaxSmsBody = 480;

/// Digits only, 7 to 15 of them, with an optional leading '+'.
bool is_valid_msisdn(std::string_view msisdn) noexcept;

struct SmsMessage {
  std::string to;
  std::string body;
  /// RFC 3339 UTC.
  std::string sent_at;

  friend bool operator==(const SmsMessage&, const SmsMessage&) = default;
};

/// Outbound SMS. Errors: invalid_recipient, empty_body, invalid_argument
/// (body longer than kMaxSmsBody characters).
class SmsGateway {
public:
  virtual ~SmsGateway() = default;
  virtual SmsMessage send(const std::string& to, const std::string& body) = 0;
  /// Messages to `to`, in send order.
  virtual std::vector<SmsMessage> inbox(const std::string& to) const = 0;
};

/// Records every message as one JSON line {"to","body","sent_at"} appended to
/// an inbox file; inbox() replays the file. Each message is a single write(2)
/// of a complete line on an O_APPEND descriptor, so concurrent senders (also
/// across processes) never interleave partial lines.
class InboxNotifier final : public SmsGateway {
public:
  explicit InboxNotifier(std::filesystem::path inbox_file);

  SmsMessage send(const std::string& to, const std::string& body) override;
  std::vector<SmsMessage> inbox(const std::string& to) const override;

  const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  std::mutex mutex_;
};

/// Reads an inbox file without a notifier instance (CLI `inbox`). A missing
/// file is an empty inbox.
std::vector<SmsMessage> read_inbox(const std::filesystem::path& inbox_file, const std::string& to);

}  // namespace pervascan
