#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pervascan/catalog.hpp"
#include "pervascan/decoder.hpp"
#include "pervascan/error.hpp"
#include "pervascan/job.hpp"
#include "pervascan/notifier.hpp"
#include "pervascan/photo_store.hpp"
#include "pervascan/token.hpp"
#include "pervascan/wire.hpp"

namespace pervascan {

struct ServiceOptions {
  std::size_t worker_count = 2;
  std::size_t queue_capacity = 64;
  std::size_t scanlines = kDefaultScanlines;
  std::optional<std::uint64_t> seed;
  /// When set, every job transition is appended here as one JSON line.
  std::optional<std::filesystem::path> journal_path;
};

/// True for the errors produced by decode_image; the HTTP layer reports them
/// as decode_failed with the decoder code as detail.
bool is_decoder_error(Errc code) noexcept;

/// The image computation server, independent of transport.
///
/// Online: handle_online decodes, looks up and answers synchronously.
/// Offline: submit_job records a job and queues it; a worker pool runs
/// fetch -> decode -> lookup -> tag -> notify, one SMS per job on success or
/// failure. Every job runs at most once per service lifetime.
class ComputationService {
public:
  ComputationService(PhotoStore& store, const CatalogClient& catalog, SmsGateway& sms, ServiceOptions options = {});
  ~ComputationService();

  ComputationService(const ComputationService&) = delete;
  ComputationService& operator=(const ComputationService&) = delete;

  /// Errors: invalid_image, decoder errors (see is_decoder_error),
  /// product_not_found. `wire_bytes` is the request body size as received;
  /// it defaults to the image size.
  LookupResponse handle_online(std::span<const std::uint8_t> image, std::optional<std::size_t> wire_bytes = {});

  /// Returns the job id without waiting for any pipeline step. Errors:
  /// invalid_request, queue_full. `wire_bytes` defaults to the size of the
  /// JSON encoding of the request.
  std::string submit_job(const SubmitJobRequest& request, std::optional<std::size_t> wire_bytes = {});

  /// Errors: job_not_found.
  OfflineJob job_status(const std::string& job_id) const;
  /// Every state the job has entered, in order.
  std::vector<JobState> job_history(const std::string& job_id) const;

  WireMetrics metrics() const;

  /// Blocks until the queue is empty and no worker is running a job.
  void drain();

  /// Runs the pipeline for a RECEIVED job on the calling thread. Workers
  /// call this; it is public so tests can drive a job deterministically.
  OfflineJob run_job(const std::string& job_id);

private:
  struct JobEntry {
    OfflineJob job;
    std::vector<JobState> history;
    bool claimed = false;
  };

  void worker_loop();
  void transition(const std::string& job_id, JobState next);
  void fail(const std::string& job_id, JobState stage, std::string_view error_code);
  void update(const std::string& job_id, const std::function<void(OfflineJob&)>& mutate);
  void journal(const OfflineJob& job);

  PhotoStore& store_;
  const CatalogClient& catalog_;
  SmsGateway& sms_;
  ServiceOptions options_;
  TokenGenerator job_ids_;

  mutable std::mutex jobs_mutex_;
  std::map<std::string, JobEntry> jobs_;

  std::mutex queue_mutex_;
  std::condition_variable queue_ready_;
  std::condition_variable queue_idle_;
  std::deque<std::string> queue_;
  std::size_t running_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;

  std::mutex journal_mutex_;

  std::atomic<std::uint64_t> online_requests_{0};
  std::atomic<std::uint64_t> online_bytes_in_{0};
  std::atomic<std::uint64_t> offline_requests_{0};
  std::atomic<std::uint64_t> offline_bytes_in_{0};
};

}  // namespace pervascan
