#include "pervascan/server_app.hpp"

#include "pervascan/error.hpp"

namespace pervascan {

ServerApp::ServerApp(ServerConfig config) : config_(std::move(config)) {
  if (config_.catalog_path.empty()) throw Error(Errc::file_unreadable, "no catalog_path configured");
  catalog_ = std::make_unique<FixtureCatalog>(FixtureCatalog::load(config_.catalog_path));

  const bool local_store = !config_.store_dir.empty();
  if (local_store) {
    store_ = std::make_unique<DirectoryPhotoStore>(config_.store_dir, config_.seed);
  } else if (!config_.store_url.empty()) {
    store_ = std::make_unique<HttpPhotoStore>(config_.store_url);
  } else {
    throw Error(Errc::invalid_argument, "configure store_dir or store_url");
  }
  notifier_ = std::make_unique<InboxNotifier>(config_.inbox_path);

  ServiceOptions options;
  options.worker_count = config_.worker_count;
  options.queue_capacity = config_.queue_capacity;
  options.scanlines = config_.scanlines;
  options.seed = config_.seed;
  if (!config_.journal_path.empty()) options.journal_path = config_.journal_path;
  service_ = std::make_unique<ComputationService>(*store_, *catalog_, *notifier_, options);

  http_ = make_computation_server(*service_, local_store ? store_.get() : nullptr);
}

ServerApp::~ServerApp() {
  // Stop accepting requests before the service and its dependencies go away.
  http_->stop();
}

int ServerApp::bind() {
  const HostPort address = parse_listen(config_.listen);
  host_ = address.host == "0.0.0.0" ? "127.0.0.1" : address.host;
  port_ = http_->bind(address.host, address.port);
  return port_;
}

int ServerApp::start() {
  const int port = bind();
  http_->start();
  return port;
}

void ServerApp::run() {
  bind();
  http_->run();
}

void ServerApp::stop() { http_->stop(); }

std::string ServerApp::url() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace pervascan
