#include "texmark/bibliography.hpp"

#include <cctype>

#include "texmark/layout.hpp"

namespace texmark {

namespace {

using Style = StyledText::Style;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const std::string& require(const std::optional<std::string>& field, std::string_view name,
                           const RefRecord& r) {
  if (!field) {
    throw Error(ErrorCode::MissingField,
                "reference '" + r.key + "' has no " + std::string(name) + " field", r.pos);
  }
  return *field;
}

/// A field value followed by \unskip.  `~` in the value is a tie.
void put_value(StyledText& out, const std::string& value, Style style = Style::Plain) {
  std::size_t start = 0;
  for (std::size_t tilde; (tilde = value.find('~', start)) != std::string::npos; start = tilde + 1) {
    out.append(std::string_view(value).substr(start, tilde - start), style);
    out.tie();
  }
  out.append(std::string_view(value).substr(start), style);
  out.unskip();
}

/// Emits an optional page group: `before`, the pages, `after`.  A page
/// count defers its "~pp" to the end of the group.
void put_pages_group(StyledText& out, const RefRecord& r, PagesMode mode, std::string_view before,
                     std::string_view after) {
  if (!r.pages) return;
  out.append(before);
  if (r.pages->kind == PagesKind::Range) {
    if (mode == PagesMode::Explicit) {
      out.append("pp.");
      out.tie();
    }
    out.append(normalize_pages(r.pages->value));
    out.unskip();
    out.append(after);
  } else {
    out.append(trim(r.pages->value));
    out.unskip();
    out.append(after);
    out.tie();
    out.append("pp");
  }
}

void put_editors(StyledText& out, const RefRecord& r) {
  if (!r.ed) return;
  out.append(" (");
  put_value(out, *r.ed);
  out.append(", " + pluralize_ed(*r.ed) + ".)");
}

void format_report(StyledText& out, const RefRecord& r) {
  put_value(out, require(r.title, "title", r), Style::Emph);
  out.append(", ");
  put_value(out, *r.report);
  put_pages_group(out, r, PagesMode::Explicit, ", ", "");
  if (r.year) {
    out.append(", (");
    put_value(out, *r.year);
    out.append(")");
  }
}

void format_book(StyledText& out, const RefRecord& r) {
  put_value(out, require(r.title, "title", r), Style::Emph);
  out.append(",");
  put_pages_group(out, r, PagesMode::Explicit, " ", ",");
  if (r.series) {
    out.append(" ");
    put_value(out, *r.series);
    put_editors(out, r);
    if (r.vol) {
      out.append(" ");
      put_value(out, *r.vol);
    }
    if (r.idno) {
      out.append(", ");
      put_value(out, *r.idno);
    }
    out.append(",");
  }
  out.append(" ");
  put_value(out, *r.publ);
  out.append(", ");
  put_value(out, require(r.year, "year", r));
  if (r.isbn) {
    out.append(", ISBN ");
    put_value(out, *r.isbn);
  }
}

void format_article(StyledText& out, const RefRecord& r) {
  out.append("``");
  put_value(out, require(r.title, "title", r));
  out.append("'', ");
  put_value(out, *r.journal, Style::Emph);
  if (r.vol) {
    out.append(" ", Style::Emph);
    put_value(out, *r.vol, Style::EmphStrong);
  }
  if (r.idno) {
    out.append(", ");
    put_value(out, *r.idno);
  }
  if (r.year) {
    out.append(", (");
    put_value(out, *r.year);
    out.append(")");
  }
  put_pages_group(out, r, PagesMode::Implicit, ", ", "");
}

void format_proceedings(StyledText& out, const RefRecord& r) {
  out.append("``");
  put_value(out, require(r.title, "title", r));
  out.append("'',");
  put_pages_group(out, r, PagesMode::Explicit, " ", "");
  out.append(" in ");
  put_value(out, *r.inbook, Style::Emph);
  put_editors(out, r);
  out.append(", ");
  if (r.series) {
    put_value(out, *r.series);
    if (r.vol) {
      out.append(" ");
      put_value(out, *r.vol);
    }
    if (r.idno) {
      out.append(", ");
      put_value(out, *r.idno);
    }
    out.append(", ");
  }
  if (r.publ) {
    put_value(out, *r.publ);
    out.append(", ");
  }
  put_value(out, require(r.year, "year", r));
}

std::string structured_pages(const Pages& p) {
  if (p.kind == PagesKind::Amount) return std::string(trim(p.value));
  return normalize_pages(p.value);
}

void structured_vol(std::vector<StructuredField>& out, const RefRecord& r) {
  if (!r.vol) return;
  std::string v = std::string(trim(*r.vol));
  if (r.idno) v += ", " + std::string(trim(*r.idno));
  out.emplace_back("vol", v);
}

void structured_editors(std::vector<StructuredField>& out, const RefRecord& r) {
  if (r.ed) out.emplace_back(pluralize_ed(*r.ed), std::string(trim(*r.ed)));
}

}  // namespace

std::string_view to_string(RefKind kind) {
  switch (kind) {
    case RefKind::Proceedings: return "proceedings";
    case RefKind::Article: return "article";
    case RefKind::Book: return "book";
    case RefKind::Report: return "report";
  }
  return "?";
}

RefKind classify(const RefRecord& r) {
  if (r.inbook) return RefKind::Proceedings;
  if (r.journal) return RefKind::Article;
  if (r.publ) return RefKind::Book;
  if (r.report) return RefKind::Report;
  throw Error(ErrorCode::UnrecognisedReference,
              "reference '" + r.key + "' needs a journal, inbook, publ or report field", r.pos);
}

std::string normalize_pages(std::string_view raw) {
  std::string_view s = trim(raw);
  auto malformed = [&](std::string_view why) {
    return Error(ErrorCode::MalformedRange, "page range \"" + std::string(raw) + "\": " + std::string(why));
  };
  if (s.empty()) throw malformed("empty");
  std::size_t dash = s.find('-');
  if (dash == std::string_view::npos) return std::string(s);
  std::size_t end = dash;
  while (end < s.size() && s[end] == '-') ++end;
  if (end - dash > 2) throw malformed("three or more hyphens");
  std::string_view first = trim(s.substr(0, dash));
  std::string_view last = trim(s.substr(end));
  if (first.empty() || last.empty()) throw malformed("empty side");
  if (last.find('-') != std::string_view::npos) throw malformed("more than one separator");
  return std::string(first) + "--" + std::string(last);
}

std::string format_pages(const Pages& p, PagesMode mode) {
  if (p.kind == PagesKind::Amount) return std::string(trim(p.value)) + " pp";
  std::string range = normalize_pages(p.value);
  return mode == PagesMode::Explicit ? "pp. " + range : range;
}

std::string pluralize_ed(std::string_view field) {
  return field.find(',') == std::string_view::npos ? "ed" : "eds";
}

StyledText format_reference(const RefRecord& r) {
  RefKind kind = classify(r);
  StyledText out;
  put_value(out, require(r.author, "author", r));
  out.append(", ");
  switch (kind) {
    case RefKind::Report: format_report(out, r); break;
    case RefKind::Book: format_book(out, r); break;
    case RefKind::Article: format_article(out, r); break;
    case RefKind::Proceedings: format_proceedings(out, r); break;
  }
  out.unskip();
  if (r.endnote) {
    out.append(". ");
    put_value(out, *r.endnote);
  }
  out.append(".");
  return out;
}

std::vector<std::string> render_entry(std::string_view mark, const StyledText& body, int key_width,
                                      int line_width) {
  std::string prefix = "[" + std::string(mark) + "] ";
  if (prefix.size() < static_cast<std::size_t>(key_width)) prefix.resize(static_cast<std::size_t>(key_width), ' ');
  return wrap_text(body.plain(kTie), prefix, key_width, line_width).lines;
}

std::vector<StructuredField> emit_structured(const RefRecord& r) {
  RefKind kind = classify(r);
  std::vector<StructuredField> out;
  auto put = [&](const char* tag, const std::string& value) { out.emplace_back(tag, std::string(trim(value))); };
  auto put_pages = [&] {
    if (r.pages) out.emplace_back("pages", structured_pages(*r.pages));
  };
  put("key", r.mark);
  put("by", require(r.author, "author", r));
  const std::string& title = require(r.title, "title", r);
  switch (kind) {
    case RefKind::Report:
      put("paper", title);
      put("paperinfo", *r.report);
      put_pages();
      if (r.year) put("yr", *r.year);
      break;
    case RefKind::Book:
      put("book", title);
      put_pages();
      if (r.series) {
        put("bookinfo", *r.series);
        structured_editors(out, r);
        structured_vol(out, r);
      }
      put("publ", *r.publ);
      put("yr", require(r.year, "year", r));
      if (r.isbn) put("bookinfo", *r.isbn);
      break;
    case RefKind::Article:
      put("paper", title);
      put("jour", *r.journal);
      structured_vol(out, r);
      if (r.year) put("yr", *r.year);
      put_pages();
      break;
    case RefKind::Proceedings:
      put("paper", title);
      put_pages();
      put("inbook", *r.inbook);
      structured_editors(out, r);
      if (r.series) {
        put("bookinfo", *r.series);
        structured_vol(out, r);
      }
      if (r.publ) put("publ", *r.publ);
      put("yr", require(r.year, "year", r));
      break;
  }
  if (r.endnote) put("finalinfo", *r.endnote);
  return out;
}

std::vector<std::string> serialize_structured(const std::vector<StructuredField>& fields) {
  std::vector<std::string> lines;
  lines.emplace_back("\\ref");
  for (const auto& [tag, value] : fields) lines.push_back("\\" + tag + "{" + value + "}");
  lines.emplace_back("\\endref");
  return lines;
}

Citation parse_citation(std::string_view arg) {
  std::size_t comma = arg.find(',');
  Citation c;
  c.key = std::string(trim(arg.substr(0, comma)));
  if (c.key.empty()) throw Error(ErrorCode::InvalidCitation, "empty citation key");
  if (comma != std::string_view::npos) {
    std::string_view rest = arg.substr(comma + 1);
    if (rest.find(",,") != std::string_view::npos) {
      throw Error(ErrorCode::InvalidCitation, "',,' is not allowed in a citation suffix");
    }
    c.suffix = "," + std::string(rest);
  }
  return c;
}

std::string resolve_citation(const CitationMap& db, const Citation& c) {
  auto it = db.find(c.key);
  if (it == db.end()) throw Error(ErrorCode::UndefinedReference, "Reference to undefined label " + c.key);
  return "[" + it->second + c.suffix.value_or("") + "]";
}

}  // namespace texmark
