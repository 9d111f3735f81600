#pragma once

#include <chrono>
#include <string>

namespace pervascan {

/// RFC 3339 UTC with millisecond precision, e.g. "2026-10-17T08:30:00.125Z".
std::string format_rfc3339(std::chrono::system_clock::time_point when);
std::string now_rfc3339();

}  // namespace pervascan
