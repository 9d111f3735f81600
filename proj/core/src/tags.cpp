#include "pervascan/tags.hpp"

#include <charconv>
#include <string_view>

namespace pervascan {

namespace {

bool strip_prefix(std::string_view& text, std::string_view prefix) {
  if (text.substr(0, prefix.size()) != prefix) return false;
  text.remove_prefix(prefix.size());
  return true;
}

std::optional<std::int64_t> parse_cents(std::string_view text) {
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

std::vector<std::string> book_tags(const BookInfo& book) {
  std::vector<std::string> tags;
  tags.push_back("barcode:" + book.barcode);
  tags.push_back("title:" + book.title);
  for (const auto& author : book.authors) tags.push_back("author:" + author);
  tags.push_back("price:" + std::to_string(book.list_price.price_cents) + " " + book.currency());
  if (auto offer = cheapest_offer(book)) {
    tags.push_back("cheapest:" + offer->seller + " " + std::to_string(offer->price_cents) + " " + book.currency());
  }
  return tags;
}

std::optional<LookupResponse> lookup_from_tags(const std::vector<std::string>& tags) {
  LookupResponse view;
  bool has_barcode = false, has_title = false, has_price = false;
  for (const auto& tag : tags) {
    std::string_view text = tag;
    if (strip_prefix(text, "barcode:")) {
      view.barcode = text;
      has_barcode = true;
    } else if (strip_prefix(text, "title:")) {
      view.title = text;
      has_title = true;
    } else if (strip_prefix(text, "author:")) {
      view.authors.emplace_back(text);
    } else if (strip_prefix(text, "price:")) {
      const auto space = text.rfind(' ');
      if (space == std::string_view::npos) return std::nullopt;
      auto cents = parse_cents(text.substr(0, space));
      if (!cents) return std::nullopt;
      view.list_price_cents = *cents;
      view.currency = text.substr(space + 1);
      has_price = true;
    } else if (strip_prefix(text, "cheapest:")) {
      // The seller may contain spaces; cents and currency are the last two fields.
      const auto currency_space = text.rfind(' ');
      if (currency_space == std::string_view::npos) return std::nullopt;
      const auto cents_space = text.rfind(' ', currency_space - 1);
      if (cents_space == std::string_view::npos || currency_space == 0) return std::nullopt;
      auto cents = parse_cents(text.substr(cents_space + 1, currency_space - cents_space - 1));
      if (!cents) return std::nullopt;
      view.cheapest = CheapestOffer{std::string(text.substr(0, cents_space)), *cents};
    }
  }
  if (!has_barcode || !has_title || !has_price) return std::nullopt;
  return view;
}

}  // namespace pervascan
