#include "pervascan/job.hpp"

#include <array>

namespace pervascan {

namespace {

constexpr std::array<std::string_view, 8> kStateNames = {
    "RECEIVED", "FETCHING", "DECODING", "LOOKING_UP", "TAGGING", "NOTIFYING", "DONE", "FAILED",
};

}  // namespace

std::string_view job_state_name(JobState state) noexcept { return kStateNames[static_cast<std::size_t>(state)]; }

std::optional<JobState> job_state_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == name) return static_cast<JobState>(i);
  }
  return std::nullopt;
}

}  // namespace pervascan
