#pragma once

#include <memory>
#include <string>

#include "pervascan/catalog.hpp"
#include "pervascan/config.hpp"
#include "pervascan/http_server.hpp"
#include "pervascan/notifier.hpp"
#include "pervascan/photo_store.hpp"
#include "pervascan/service.hpp"

namespace pervascan {

/// The computation server assembled from a ServerConfig: fixture catalog,
/// photo store (directory, whose routes are then served on the same
/// listener, or remote URL), inbox notifier, job service and HTTP listener.
class ServerApp {
public:
  /// Loads the catalog and opens the store; throws Error (file_unreadable,
  /// malformed_record, store_unavailable, invalid_argument, ...).
  explicit ServerApp(ServerConfig config);
  ~ServerApp();

  /// Binds the configured address and serves on a background thread.
  /// Returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

  /// "http://<host>:<port>" once bound.
  std::string url() const;

  ComputationService& service() noexcept { return *service_; }
  PhotoStore& store() noexcept { return *store_; }
  InboxNotifier& notifier() noexcept { return *notifier_; }
  const FixtureCatalog& catalog() const noexcept { return *catalog_; }

private:
  int bind();

  ServerConfig config_;
  std::unique_ptr<FixtureCatalog> catalog_;
  std::unique_ptr<PhotoStore> store_;
  std::unique_ptr<InboxNotifier> notifier_;
  std::unique_ptr<ComputationService> service_;
  std::unique_ptr<HttpServer> http_;
  std::string host_;
  int port_ = 0;
};

}  // namespace pervascan
