#include "pervascan/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pervascan/error.hpp"

namespace pervascan {

namespace {

using nlohmann::json;

bool is_currency(const std::string& code) {
  return code.size() == 3 &&
         std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
  throw Error(Errc::malformed_record, "line " + std::to_string(line) + ": " + why);
}

std::string require_string(const json& object, const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string()) malformed(line, std::string("missing string field ") + key);
  return it->get<std::string>();
}

std::int64_t require_cents(const json& object, const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_number_integer()) malformed(line, std::string("missing integer field ") + key);
  const auto value = it->get<std::int64_t>();
  if (value < 0) malformed(line, std::string(key) + " is negative");
  return value;
}

BookInfo parse_line(const std::string& text, std::size_t line) {
  const json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed(line, "not a JSON object");

  BookInfo book;
  book.barcode = require_string(doc, "barcode", line);
  book.title = require_string(doc, "title", line);
  if (book.title.empty()) malformed(line, "empty title");

  auto authors = doc.find("authors");
  if (authors == doc.end() || !authors->is_array()) malformed(line, "missing authors array");
  for (const auto& author : *authors) {
    if (!author.is_string()) malformed(line, "author is not a string");
    book.authors.push_back(author.get<std::string>());
  }

  const std::string currency = require_string(doc, "currency", line);
  if (!is_currency(currency)) malformed(line, "currency must be three uppercase letters");
  book.list_price = Offer{"list", require_cents(doc, "list_price_cents", line), currency};

  auto offers = doc.find("offers");
  if (offers != doc.end()) {
    if (!offers->is_array()) malformed(line, "offers is not an array");
    for (const auto& offer : *offers) {
      if (!offer.is_object()) malformed(line, "offer is not an object");
      Offer parsed{require_string(offer, "seller", line), require_cents(offer, "price_cents", line), currency};
      if (parsed.seller.empty()) malformed(line, "empty seller");
      if (offer.contains("currency") && offer["currency"] != currency) malformed(line, "offer currency differs");
      book.offers.push_back(std::move(parsed));
    }
  }

  bool valid = false;
  try {
    valid = validate(book.barcode);
  } catch (const Error&) {
    throw Error(Errc::invalid_barcode, "line " + std::to_string(line) + ": barcode is not 13 digits");
  }
  if (!valid) throw Error(Errc::invalid_barcode, "line " + std::to_string(line) + ": bad check digit");
  return book;
}

}  // namespace

std::optional<Offer> cheapest_offer(const BookInfo& book) {
  auto it = std::min_element(book.offers.begin(), book.offers.end(), [](const Offer& a, const Offer& b) {
    if (a.price_cents != b.price_cents) return a.price_cents < b.price_cents;
    return a.seller < b.seller;
  });
  if (it == book.offers.end()) return std::nullopt;
  return *it;
}

FixtureCatalog FixtureCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::file_unreadable, "cannot read catalog " + path.string());
  return parse(in);
}

FixtureCatalog FixtureCatalog::parse(std::istream& lines) {
  FixtureCatalog catalog;
  std::string text;
  std::size_t line = 0;
  while (std::getline(lines, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    BookInfo book = parse_line(text, line);
    const std::string key = book.barcode;
    if (!catalog.books_.emplace(key, std::move(book)).second) {
      throw Error(Errc::duplicate_barcode, "line " + std::to_string(line) + ": duplicate barcode " + key);
    }
  }
  return catalog;
}

BookInfo FixtureCatalog::lookup(const Ean13& code) const {
  auto it = books_.find(code.str());
  if (it == books_.end()) throw Error(Errc::product_not_found, "no product for " + code.str());
  return it->second;
}

std::vector<std::string> FixtureCatalog::barcodes() const {
  std::vector<std::string> out;
  for (const auto& [key, book] : books_) out.push_back(key);
  return out;
}

std::string to_fixture_line(const BookInfo& book) {
  json offers = json::array();
  for (const auto& offer : book.offers) offers.push_back({{"seller", offer.seller}, {"price_cents", offer.price_cents}});
  return json{{"barcode", book.barcode},
              {"title", book.title},
              {"authors", book.authors},
              {"currency", book.currency()},
              {"list_price_cents", book.list_price.price_cents},
              {"offers", offers}}
      .dump();
}

}  // namespace pervascan
