#include "pervascan/service.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "pervascan/clock.hpp"
#include "pervascan/error.hpp"
#include "pervascan/pgm.hpp"
#include "pervascan/tags.hpp"

namespace pervascan {

namespace {

GrayImage parse_image(std::span<const std::uint8_t> bytes) {
  try {
    return load_pgm(bytes);
  } catch (const Error& e) {
    throw Error(Errc::invalid_image, std::string("not a binary PGM: ") + e.what());
  }
}

}  // namespace

bool is_decoder_error(Errc code) noexcept {
  switch (code) {
    case Errc::no_contrast:
    case Errc::no_barcode_found:
    case Errc::digit_unreadable:
    case Errc::unknown_parity_pattern:
    case Errc::checksum_mismatch:
      return true;
    default:
      return false;
  }
}

ComputationService::ComputationService(PhotoStore& store, const CatalogClient& catalog, SmsGateway& sms,
                                       ServiceOptions options)
    : store_(store), catalog_(catalog), sms_(sms), options_(std::move(options)), job_ids_(options_.seed) {
  if (options_.worker_count == 0) throw Error(Errc::invalid_argument, "worker_count must be at least 1");
  if (options_.queue_capacity == 0) throw Error(Errc::invalid_argument, "queue_capacity must be at least 1");
  if (options_.scanlines == 0) throw Error(Errc::invalid_argument, "scanlines must be at least 1");
  workers_.reserve(options_.worker_count);
  for (std::size_t i = 0; i < options_.worker_count; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ComputationService::~ComputationService() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_ready_.notify_all();
  for (auto& worker : workers_) worker.join();
}

LookupResponse ComputationService::handle_online(std::span<const std::uint8_t> image,
                                                 std::optional<std::size_t> wire_bytes) {
  online_requests_.fetch_add(1);
  online_bytes_in_.fetch_add(wire_bytes.value_or(image.size()));

  const GrayImage picture = parse_image(image);
  const DecodeReport report = decode_image(picture, options_.scanlines);
  return LookupResponse::from_book(catalog_.lookup(report.code));
}

std::string ComputationService::submit_job(const SubmitJobRequest& request, std::optional<std::size_t> wire_bytes) {
  offline_requests_.fetch_add(1);
  offline_bytes_in_.fetch_add(wire_bytes.value_or(encode_json(request).size()));

  if (!is_valid_photo_id(request.photo_id)) throw Error(Errc::invalid_request, "malformed photo_id");
  if (!is_valid_msisdn(request.msisdn)) throw Error(Errc::invalid_request, "malformed msisdn");

  OfflineJob job;
  {
    std::lock_guard queue_lock(queue_mutex_);
    if (queue_.size() >= options_.queue_capacity) throw Error(Errc::queue_full, "job queue is full");
    job.photo_id = request.photo_id;
    job.msisdn = request.msisdn;
    job.created_at = job.updated_at = now_rfc3339();
    {
      std::lock_guard jobs_lock(jobs_mutex_);
      do {
        job.job_id = job_ids_.next();
      } while (jobs_.count(job.job_id));
      jobs_.emplace(job.job_id, JobEntry{job, {JobState::received}, false});
    }
    queue_.push_back(job.job_id);
  }
  queue_ready_.notify_one();
  journal(job);
  return job.job_id;
}

OfflineJob ComputationService::job_status(const std::string& job_id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error(Errc::job_not_found, "no job " + job_id);
  return it->second.job;
}

std::vector<JobState> ComputationService::job_history(const std::string& job_id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error(Errc::job_not_found, "no job " + job_id);
  return it->second.history;
}

WireMetrics ComputationService::metrics() const {
  return {online_requests_.load(), online_bytes_in_.load(), offline_requests_.load(), offline_bytes_in_.load()};
}

void ComputationService::drain() {
  std::unique_lock lock(queue_mutex_);
  queue_idle_.wait(lock, [this] { return queue_.empty() && running_ == 0; });
}

void ComputationService::worker_loop() {
  for (;;) {
    std::string job_id;
    {
      std::unique_lock lock(queue_mutex_);
      queue_ready_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job_id = std::move(queue_.front());
      queue_.pop_front();
      ++running_;
    }
    run_job(job_id);
    {
      std::lock_guard lock(queue_mutex_);
      --running_;
    }
    queue_idle_.notify_all();
  }
}

OfflineJob ComputationService::run_job(const std::string& job_id) {
  std::string photo_id;
  std::string msisdn;
  {
    std::lock_guard lock(jobs_mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) throw Error(Errc::job_not_found, "no job " + job_id);
    if (it->second.claimed || it->second.job.state != JobState::received) return it->second.job;
    it->second.claimed = true;
    photo_id = it->second.job.photo_id;
    msisdn = it->second.job.msisdn;
  }

  JobState stage = JobState::fetching;
  try {
    transition(job_id, stage);
    const Bytes bytes = store_.fetch(photo_id);

    transition(job_id, stage = JobState::decoding);
    const DecodeReport report = decode_image(parse_image(bytes), options_.scanlines);
    update(job_id, [&](OfflineJob& job) { job.barcode = report.code.str(); });

    transition(job_id, stage = JobState::looking_up);
    const BookInfo book = catalog_.lookup(report.code);
    update(job_id, [&](OfflineJob& job) { job.book = book; });

    transition(job_id, stage = JobState::tagging);
    store_.add_tags(photo_id, book_tags(book));

    transition(job_id, stage = JobState::notifying);
    sms_.send(msisdn, "pervascan: info ready for photo " + photo_id);

    transition(job_id, JobState::done);
  } catch (const Error& e) {
    fail(job_id, stage, e.name());
  } catch (const std::exception&) {
    fail(job_id, stage, "internal_error");
  }
  return job_status(job_id);
}

void ComputationService::transition(const std::string& job_id, JobState next) {
  OfflineJob snapshot;
  {
    std::lock_guard lock(jobs_mutex_);
    JobEntry& entry = jobs_.at(job_id);
    if (!is_valid_transition(entry.job.state, next)) {
      throw Error(Errc::invalid_argument, std::string("illegal job transition to ") +
                                              std::string(job_state_name(next)));
    }
    entry.job.state = next;
    entry.job.updated_at = now_rfc3339();
    entry.history.push_back(next);
    snapshot = entry.job;
  }
  journal(snapshot);
}

void ComputationService::fail(const std::string& job_id, JobState stage, std::string_view error_code) {
  const OfflineJob job = job_status(job_id);
  const std::string& photo_id = job.photo_id;
  try {
    sms_.send(job.msisdn,
              "pervascan: lookup failed for photo " + photo_id + " (" + std::string(error_code) + ")");
  } catch (const Error&) {
    // The recipient was validated at submit; a failing gateway leaves the
    // job record as the only signal.
  }
  OfflineJob snapshot;
  {
    std::lock_guard lock(jobs_mutex_);
    JobEntry& entry = jobs_.at(job_id);
    entry.job.state = JobState::failed;
    entry.job.failed_stage = stage;
    entry.job.error_code = std::string(error_code);
    entry.job.updated_at = now_rfc3339();
    entry.history.push_back(JobState::failed);
    snapshot = entry.job;
  }
  journal(snapshot);
}

void ComputationService::update(const std::string& job_id, const std::function<void(OfflineJob&)>& mutate) {
  std::lock_guard lock(jobs_mutex_);
  mutate(jobs_.at(job_id).job);
}

void ComputationService::journal(const OfflineJob& job) {
  if (!options_.journal_path) return;
  auto record = nlohmann::ordered_json::parse(encode_json(JobStatusResponse::from_job(job)));
  record["msisdn"] = job.msisdn;
  const std::string line = record.dump() + "\n";
  std::lock_guard lock(journal_mutex_);
  std::ofstream out(*options_.journal_path, std::ios::app);
  out << line;
}

}  // namespace pervascan
