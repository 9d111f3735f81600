// pervascan command-line client: renders test barcodes, decodes images,
// drives the online and offline lookup flows, and runs the servers.
//
// Exit codes: 0 ok, 1 I/O, 2 invalid input, 3 decode failure,
// 4 product not found, 5 timeout, 6 job failed.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pervascan/config.hpp"
#include "pervascan/decoder.hpp"
#include "pervascan/degrade.hpp"
#include "pervascan/error.hpp"
#include "pervascan/http_server.hpp"
#include "pervascan/notifier.hpp"
#include "pervascan/pgm.hpp"
#include "pervascan/render.hpp"
#include "pervascan/server_app.hpp"
#include "pervascan/server_client.hpp"

namespace {

using namespace pervascan;

enum Exit : int {
  kOk = 0,
  kIo = 1,
  kInvalidInput = 2,
  kDecodeFailure = 3,
  kProductNotFound = 4,
  kTimeout = 5,
  kJobFailed = 6,
};

/// Thrown by the commands to leave main() with a specific status.
struct ExitWith {
  int status;
};

int exit_for(Errc code) {
  if (is_decoder_error(code) || code == Errc::decode_failed) return kDecodeFailure;
  switch (code) {
    case Errc::product_not_found: return kProductNotFound;
    case Errc::bad_magic:
    case Errc::bad_header:
    case Errc::unsupported_maxval:
    case Errc::truncated_payload:
    case Errc::invalid_code:
    case Errc::invalid_argument:
    case Errc::bad_length:
    case Errc::invalid_image:
    case Errc::invalid_tag:
    case Errc::invalid_recipient:
    case Errc::invalid_request:
    case Errc::malformed_body:
      return kInvalidInput;
    default: return kIo;
  }
}

void report(const Error& e) {
  if (e.what() == e.name()) {
    std::cerr << "error: " << e.name() << "\n";
  } else {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
  }
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::file_unreadable, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::file_unreadable, "cannot write " + path);
}

std::string format_cents(std::int64_t cents) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(cents / 100),
                static_cast<long long>(cents % 100));
  return buf;
}

void print_lookup(const LookupResponse& r) {
  std::cout << "barcode: " << r.barcode << "\n";
  std::cout << "title: " << r.title << "\n";
  std::string authors;
  for (const auto& a : r.authors) authors += (authors.empty() ? "" : ", ") + a;
  std::cout << "authors: " << authors << "\n";
  std::cout << "list price: " << format_cents(r.list_price_cents) << " " << r.currency << "\n";
  if (r.cheapest) {
    std::cout << "cheapest: " << r.cheapest->seller << " " << format_cents(r.cheapest->price_cents) << " "
              << r.currency << "\n";
  } else {
    std::cout << "cheapest: none\n";
  }
}

Encoding parse_encoding(const std::string& name) { return name == "soap" ? Encoding::soap : Encoding::rest; }

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  std::string code;
  std::string out;
  RenderSpec spec;
  Degradation degradation;
};

int cmd_render(const RenderArgs& args) {
  const Ean13 code = Ean13::parse(args.code);
  GrayImage image = render_ean13(code, args.spec);
  const Degradation& d = args.degradation;
  if (d.noise_stddev != 0 || d.blur_radius != 0 || d.brightness_slope != 0 || d.rotation_deg != 0) {
    image = degrade(image, d);
  }
  write_file(args.out, save_pgm(image));
  std::cout << args.out << ": " << image.width() << "x" << image.height() << "\n";
  return kOk;
}

// ---- decode ----------------------------------------------------------------

int cmd_decode(const std::string& path, std::size_t scanlines, bool json) {
  const Bytes bytes = read_file(path);
  const DecodeReport report = decode_image(load_pgm(bytes), scanlines);
  if (json) {
    nlohmann::ordered_json doc{{"barcode", report.code.str()},
                               {"agreeing", report.scanlines_agreeing},
                               {"attempted", report.scanlines_attempted},
                               {"reversed", report.reversed}};
    std::cout << doc.dump() << "\n";
  } else {
    std::cout << report.code.str() << " " << report.scanlines_agreeing << "/" << report.scanlines_attempted
              << (report.reversed ? " reversed" : "") << "\n";
  }
  return kOk;
}

// ---- online ----------------------------------------------------------------

int cmd_online(const std::string& path, const std::string& server, const std::string& encoding, bool json) {
  const Bytes image = read_file(path);
  ServerClient client(server, parse_encoding(encoding));
  try {
    const LookupResponse response = client.lookup(image);
    if (json) {
      std::cout << encode_json(response) << "\n";
    } else {
      print_lookup(response);
    }
  } catch (const Error& e) {
    if (json && !client.last_error_json().empty()) std::cout << client.last_error_json() << "\n";
    throw;
  }
  return kOk;
}

// ---- offline ---------------------------------------------------------------

struct OfflineArgs {
  std::string image;
  std::string store;
  std::string server;
  std::string msisdn;
  std::string inbox = "inbox.jsonl";
  std::string encoding = "rest";
  bool poll_status = false;
  int poll_interval_ms = 100;
  double timeout_s = 10.0;
  bool json = false;
};

int cmd_offline(const OfflineArgs& args) {
  using clock = std::chrono::steady_clock;
  if (!is_valid_msisdn(args.msisdn)) throw Error(Errc::invalid_recipient, "malformed msisdn " + args.msisdn);
  const Bytes image = read_file(args.image);
  const auto store = open_photo_store(args.store);
  const std::string photo_id = store->upload(image);
  std::cerr << "uploaded photo " << photo_id << "\n";

  const std::size_t sms_before = read_inbox(args.inbox, args.msisdn).size();
  ServerClient client(args.server, parse_encoding(args.encoding));
  const std::string job_id = client.submit_job({photo_id, args.msisdn});
  std::cerr << "submitted job " << job_id << "\n";

  const auto deadline = clock::now() + std::chrono::duration<double>(args.timeout_s);
  const auto interval = std::chrono::milliseconds(args.poll_interval_ms);
  JobStatusResponse status;
  for (;;) {
    bool settled = false;
    if (args.poll_status) {
      status = client.job_status(job_id);
      settled = is_terminal(status.state);
    } else if (read_inbox(args.inbox, args.msisdn).size() > sms_before) {
      // The SMS goes out just before the final state is recorded.
      status = client.job_status(job_id);
      settled = is_terminal(status.state);
    }
    if (settled) break;
    if (clock::now() >= deadline) {
      std::cerr << "error: timeout waiting for job " << job_id << "\n";
      return kTimeout;
    }
    std::this_thread::sleep_for(interval);
  }

  if (!args.poll_status) {
    for (const auto& sms : read_inbox(args.inbox, args.msisdn)) {
      if (sms.body.find(photo_id) != std::string::npos) std::cerr << "sms: " << sms.body << "\n";
    }
  }
  const std::string status_body = encode_json(status);
  if (status.state == JobState::failed) {
    if (args.json) std::cout << status_body << "\n";
    std::cerr << "error: job failed at " << job_state_name(*status.failed_stage) << ": "
              << status.error_code.value_or("unknown") << "\n";
    return kJobFailed;
  }
  const auto tags = store->get_tags(photo_id);
  if (args.json) {
    nlohmann::ordered_json doc{{"job", nlohmann::ordered_json::parse(status_body)}, {"tags", tags}};
    std::cout << doc.dump() << "\n";
  } else {
    for (const auto& tag : tags) std::cout << tag << "\n";
  }
  return kOk;
}

// ---- serve / store / inbox -------------------------------------------------

/// Blocks SIGINT/SIGTERM for every thread started afterwards and returns a
/// function that waits for one of them.
auto block_stop_signals() {
  static sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return [] {
    int sig = 0;
    sigwait(&set, &sig);
  };
}

struct ServeArgs {
  std::string config_path;
  std::optional<std::string> listen, catalog, store_dir, store_url, inbox, journal;
  std::optional<std::size_t> workers, queue, scanlines;
  std::optional<std::uint64_t> seed;
};

int cmd_serve(const ServeArgs& args) {
  try {
    ServerConfig config = args.config_path.empty() ? ServerConfig{} : load_config(args.config_path);
    apply_env_overrides(config);
    if (args.listen) config.listen = *args.listen;
    if (args.catalog) config.catalog_path = *args.catalog;
    if (args.store_dir) config.store_dir = *args.store_dir;
    if (args.store_url) config.store_url = *args.store_url;
    if (args.inbox) config.inbox_path = *args.inbox;
    if (args.journal) config.journal_path = *args.journal;
    if (args.workers) config.worker_count = *args.workers;
    if (args.queue) config.queue_capacity = *args.queue;
    if (args.scanlines) config.scanlines = *args.scanlines;
    if (args.seed) config.seed = *args.seed;

    const auto wait_for_stop = block_stop_signals();
    ServerApp app(config);
    app.start();
    std::cout << "listening on " << app.url() << std::endl;
    wait_for_stop();
    app.stop();
  } catch (const Error& e) {
    report(e);
    return kIo;
  }
  return kOk;
}

int cmd_store(const std::string& dir, const std::string& listen) {
  try {
    const HostPort where = parse_listen(listen);
    const auto wait_for_stop = block_stop_signals();
    DirectoryPhotoStore store(dir);
    const auto server = make_store_server(store);
    const int port = server->bind(where.host, where.port);
    server->start();
    std::cout << "store " << dir << " listening on http://" << where.host << ":" << port << std::endl;
    wait_for_stop();
    server->stop();
  } catch (const Error& e) {
    report(e);
    return kIo;
  }
  return kOk;
}

int cmd_inbox(const std::string& msisdn, const std::string& path, bool json) {
  if (!is_valid_msisdn(msisdn)) throw Error(Errc::invalid_recipient, "malformed msisdn " + msisdn);
  for (const auto& sms : read_inbox(path, msisdn)) {
    if (json) {
      std::cout << nlohmann::ordered_json{{"to", sms.to}, {"body", sms.body}, {"sent_at", sms.sent_at}}.dump() << "\n";
    } else {
      std::cout << sms.sent_at << " " << sms.body << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pervascan: book barcode lookup over online and offline architectures"};
  app.require_subcommand(1);
  int status = kOk;

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render an EAN-13 barcode as a PGM image");
  render_cmd->add_option("code", render.code, "13-digit code")->required();
  render_cmd->add_option("-o,--out", render.out, "Output PGM path")->required();
  render_cmd->add_option("--module-px", render.spec.module_px, "Pixels per module")->capture_default_str();
  render_cmd->add_option("--height", render.spec.bar_height_px, "Bar height in pixels")->capture_default_str();
  render_cmd->add_option("--quiet", render.spec.quiet_modules, "Quiet zone in modules")->capture_default_str();
  render_cmd->add_option("--noise", render.degradation.noise_stddev, "Gaussian noise stddev");
  render_cmd->add_option("--blur", render.degradation.blur_radius, "Box blur radius");
  render_cmd->add_option("--slope", render.degradation.brightness_slope, "Brightness ramp across the width");
  render_cmd->add_option("--rotate", render.degradation.rotation_deg, "Rotation in degrees (|deg| <= 3)");
  render_cmd->add_option("--seed", render.degradation.seed, "Noise seed");
  render_cmd->callback([&] { status = cmd_render(render); });

  std::string decode_path;
  std::size_t decode_scanlines = kDefaultScanlines;
  bool decode_json = false;
  auto* decode_cmd = app.add_subcommand("decode", "Decode the barcode in a PGM image");
  decode_cmd->add_option("image", decode_path, "PGM path")->required();
  decode_cmd->add_option("--scanlines", decode_scanlines, "Rows sampled")->capture_default_str();
  decode_cmd->add_flag("--json", decode_json, "JSON output");
  decode_cmd->callback([&] { status = cmd_decode(decode_path, decode_scanlines, decode_json); });

  std::string online_path, online_server = "http://127.0.0.1:8080", online_encoding = "rest";
  bool online_json = false;
  auto* online_cmd = app.add_subcommand("online", "Send an image to the server and print the book info");
  online_cmd->add_option("image", online_path, "PGM path")->required();
  online_cmd->add_option("--server", online_server, "Computation server URL")->capture_default_str();
  online_cmd->add_option("--encoding", online_encoding, "rest or soap")
      ->check(CLI::IsMember({"rest", "soap"}))
      ->capture_default_str();
  online_cmd->add_flag("--json", online_json, "Print the REST response body");
  online_cmd->callback([&] { status = cmd_online(online_path, online_server, online_encoding, online_json); });

  OfflineArgs offline;
  offline.server = "http://127.0.0.1:8080";
  auto* offline_cmd = app.add_subcommand("offline", "Upload an image, submit a job and print the resulting tags");
  offline_cmd->add_option("image", offline.image, "PGM path")->required();
  offline_cmd->add_option("--store", offline.store, "Store URL or directory")->required();
  offline_cmd->add_option("--server", offline.server, "Computation server URL")->capture_default_str();
  offline_cmd->add_option("--msisdn", offline.msisdn, "Phone number for the SMS")->required();
  offline_cmd->add_option("--inbox", offline.inbox, "SMS inbox file to watch")->capture_default_str();
  offline_cmd->add_option("--encoding", offline.encoding, "rest or soap")
      ->check(CLI::IsMember({"rest", "soap"}))
      ->capture_default_str();
  offline_cmd->add_flag("--poll-status", offline.poll_status, "Poll the job status instead of the inbox");
  offline_cmd->add_option("--poll-interval", offline.poll_interval_ms, "Milliseconds between polls")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  offline_cmd->add_option("--timeout", offline.timeout_s, "Seconds to wait")->capture_default_str();
  offline_cmd->add_flag("--json", offline.json, "Print the job status body and tags as JSON");
  offline_cmd->callback([&] { status = cmd_offline(offline); });

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the computation server");
  serve_cmd->add_option("-c,--config", serve.config_path, "JSON config file");
  serve_cmd->add_option("--listen", serve.listen, "host:port");
  serve_cmd->add_option("--catalog", serve.catalog, "Catalog fixture (JSON lines)");
  serve_cmd->add_option("--store-dir", serve.store_dir, "Photo store directory (also served)");
  serve_cmd->add_option("--store-url", serve.store_url, "Remote photo store URL");
  serve_cmd->add_option("--inbox", serve.inbox, "SMS inbox file");
  serve_cmd->add_option("--journal", serve.journal, "Job journal file");
  serve_cmd->add_option("--workers", serve.workers, "Worker threads");
  serve_cmd->add_option("--queue", serve.queue, "Job queue capacity");
  serve_cmd->add_option("--scanlines", serve.scanlines, "Rows sampled per image");
  serve_cmd->add_option("--seed", serve.seed, "Seed for job and photo ids");
  serve_cmd->callback([&] { status = cmd_serve(serve); });

  std::string store_dir, store_listen = "127.0.0.1:8081";
  auto* store_cmd = app.add_subcommand("store", "Run a standalone photo store");
  store_cmd->add_option("dir", store_dir, "Storage directory")->required();
  store_cmd->add_option("--listen", store_listen, "host:port")->capture_default_str();
  store_cmd->callback([&] { status = cmd_store(store_dir, store_listen); });

  std::string inbox_msisdn, inbox_path = "inbox.jsonl";
  bool inbox_json = false;
  auto* inbox_cmd = app.add_subcommand("inbox", "Print the SMS messages sent to a number");
  inbox_cmd->add_option("msisdn", inbox_msisdn, "Phone number")->required();
  inbox_cmd->add_option("--inbox", inbox_path, "SMS inbox file")->capture_default_str();
  inbox_cmd->add_flag("--json", inbox_json, "One JSON object per message");
  inbox_cmd->callback([&] { status = cmd_inbox(inbox_msisdn, inbox_path, inbox_json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  } catch (const Error& e) {
    report(e);
    return exit_for(e.code());
  }
  return status;
}
