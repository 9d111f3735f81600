#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pervascan/catalog.hpp"

namespace pervascan {

/// Offline pipeline stages in execution order. DONE and FAILED are terminal.
enum class JobState : std::uint8_t {
  received,
  fetching,
  decoding,
  looking_up,
  tagging,
  notifying,
  done,
  failed,
};

/// Upper-case wire name, e.g. "LOOKING_UP".
std::string_view job_state_name(JobState state) noexcept;
std::optional<JobState> job_state_from_name(std::string_view name) noexcept;

constexpr bool is_terminal(JobState state) noexcept { return state == JobState::done || state == JobState::failed; }

/// Forward moves along the stage order, or to FAILED from any non-terminal
/// state.
constexpr bool is_valid_transition(JobState from, JobState to) noexcept {
  if (is_terminal(from)) return false;
  if (to == JobState::failed) return true;
  return static_cast<int>(to) > static_cast<int>(from);
}

struct OfflineJob {
  std::string job_id;
  std::string photo_id;
  std::string msisdn;
  JobState state = JobState::received;
  std::optional<JobState> failed_stage;
  std::optional<std::string> error_code;
  std::string created_at;
  std::string updated_at;
  std::optional<std::string> barcode;
  std::optional<BookInfo> book;

  friend bool operator==(const OfflineJob&, const OfflineJob&) = default;
};

}  // namespace pervascan
