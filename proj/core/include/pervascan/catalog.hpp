#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pervascan/ean13.hpp"

namespace pervascan {

struct Offer {
  std::string seller;
  std::int64_t price_cents = 0;
  std::string currency;

  friend bool operator==(const Offer&, const Offer&) = default;
};

struct BookInfo {
  std::string barcode;
  std::string title;
  std::vector<std::string> authors;
  /// Seller is always "list".
  Offer list_price;
  std::vector<Offer> offers;

  const std::string& currency() const noexcept { return list_price.currency; }

  friend bool operator==(const BookInfo&, const BookInfo&) = default;
};

/// Lowest price_cents, ties broken by seller name ascending; nullopt when the
/// book has no offers.
std::optional<Offer> cheapest_offer(const BookInfo& book);

/// Product lookup by barcode. Implementations must be safe for concurrent
/// lookups. Throws Error(product_not_found).
class CatalogClient {
public:
  virtual ~CatalogClient() = default;
  virtual BookInfo lookup(const Ean13& code) const = 0;
};

/// Catalog loaded from a JSON-lines fixture, one book per line:
///   {"barcode":"9780131103627","title":"...","authors":["..."],"currency":"USD",
///    "list_price_cents":4999,"offers":[{"seller":"...","price_cents":950}]}
/// Blank lines are skipped. Immutable after loading.
class FixtureCatalog final : public CatalogClient {
public:
  /// Errors: file_unreadable, malformed_record (message names the line),
  /// duplicate_barcode, invalid_barcode.
  static FixtureCatalog load(const std::filesystem::path& path);
  static FixtureCatalog parse(std::istream& lines);

  BookInfo lookup(const Ean13& code) const override;
  std::size_t size() const noexcept { return books_.size(); }
  std::vector<std::string> barcodes() const;

private:
  std::map<std::string, BookInfo> books_;
};

/// One fixture line for `book`, in the loader's schema.
std::string to_fixture_line(const BookInfo& book);

}  // namespace pervascan
