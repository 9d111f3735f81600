#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pervascan/catalog.hpp"
#include "pervascan/wire.hpp"

namespace pervascan {

/// Photo tags written back by the offline pipeline:
///   barcode:<13 digits>
///   title:<title>
///   author:<name>                      (one per author)
///   price:<list cents> <currency>
///   cheapest:<seller> <cents> <currency>   (only when the book has offers)
std::vector<std::string> book_tags(const BookInfo& book);

/// Rebuilds the lookup view from a tag list. Unrelated tags are ignored.
/// Returns nullopt when the barcode, title or price tag is missing or
/// unparseable.
std::optional<LookupResponse> lookup_from_tags(const std::vector<std::string>& tags);

}  // namespace pervascan
