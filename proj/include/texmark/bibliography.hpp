#pragma once

// Reference database: record model, classification, page ranges, the plain
// and structured formatters, citation resolution and reference-file ingest.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "texmark/error.hpp"
#include "texmark/styled_text.hpp"

namespace texmark {

enum class PagesKind { Range, Amount };

/// Page information of a record: a range ("12-34", "7") or a page count.
struct Pages {
  PagesKind kind = PagesKind::Range;
  std::string value;

  static Pages range(std::string raw) { return {PagesKind::Range, std::move(raw)}; }
  static Pages amount(std::string count) { return {PagesKind::Amount, std::move(count)}; }
  bool operator==(const Pages&) const = default;
};

enum class RefKind { Proceedings, Article, Book, Report };

std::string_view to_string(RefKind kind);

struct RefRecord {
  std::string key;
  std::string mark;  ///< printed tag; defaults to key
  std::optional<std::string> author;
  std::optional<std::string> title;
  std::optional<std::string> journal;
  std::optional<std::string> inbook;
  std::optional<std::string> publ;
  std::optional<std::string> report;
  std::optional<std::string> series;
  std::optional<std::string> ed;
  std::optional<std::string> vol;
  std::optional<std::string> idno;
  std::optional<std::string> year;
  std::optional<std::string> isbn;
  std::optional<std::string> endnote;
  std::optional<std::string> ident;  ///< extra citation key bound to the mark
  std::optional<Pages> pages;
  SourcePos pos;

  bool operator==(const RefRecord&) const = default;
};

/// Citation inside the document.  `suffix` keeps its leading comma.
struct Citation {
  std::string key;
  std::optional<std::string> suffix;
  bool operator==(const Citation&) const = default;
};

using CitationMap = std::map<std::string, std::string, std::less<>>;

enum class PagesMode { Explicit, Implicit };

RefKind classify(const RefRecord& r);

std::string normalize_pages(std::string_view raw);
std::string format_pages(const Pages& p, PagesMode mode);
std::string pluralize_ed(std::string_view field);

/// Plain-style entry body (from the author to the final period).
StyledText format_reference(const RefRecord& r);

/// First line starts with "[mark]" padded to `key_width`; continuation lines
/// are indented by `key_width`.  `line_width <= 0` disables wrapping.
std::vector<std::string> render_entry(std::string_view mark, const StyledText& body, int key_width,
                                      int line_width);

using StructuredField = std::pair<std::string, std::string>;

std::vector<StructuredField> emit_structured(const RefRecord& r);
/// `\ref`, one `\tag{value}` line per field, `\endref`.
std::vector<std::string> serialize_structured(const std::vector<StructuredField>& fields);

Citation parse_citation(std::string_view arg);
std::string resolve_citation(const CitationMap& db, const Citation& c);

struct RefDatabase {
  CitationMap marks;
  std::vector<RefRecord> records;
};

/// Reads a reference file.  Pass one collects key -> mark bindings, pass two
/// builds the records in file order.
RefDatabase ingest_refs(std::string_view source);

}  // namespace texmark
