// Reference file reader.
//
//   \ref{K84}
//   \author{A. Author}  \title{On Things}
//   \journal{J. Res.}
//
// An entry opens with \ref{<key>}, holds \<field>{<value>} items with
// balanced braces and ends at a blank line or the end of the file.  `%`
// starts a comment that runs to the end of the line.

#include <cctype>
#include <set>

#include "texmark/bibliography.hpp"

namespace texmark {

namespace {

struct RawField {
  std::string name;
  std::string value;
  SourcePos pos;
};

struct RawEntry {
  std::string key;
  SourcePos pos;
  std::vector<RawField> fields;
};

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  bool eof() const { return i_ >= src_.size(); }
  char peek() const { return eof() ? '\0' : src_[i_]; }
  SourcePos pos() const { return {line_, col_}; }

  char get() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') get();
    if (!eof()) get();
  }

  /// Skips blanks and comments; returns the number of line ends crossed
  /// (comment line ends are not counted).
  int skip_space() {
    int newlines = 0;
    while (!eof()) {
      char c = peek();
      if (c == '%') {
        skip_comment();
      } else if (c == '\n') {
        ++newlines;
        get();
      } else if (c == ' ' || c == '\t' || c == '\r') {
        get();
      } else {
        break;
      }
    }
    return newlines;
  }

  std::string command_name() {
    std::string name;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) name += get();
    return name;
  }

  /// Reads "{...}" with balanced braces; whitespace runs collapse to one space.
  std::string braced(std::string_view what) {
    SourcePos start = pos();
    if (peek() != '{') throw Error(ErrorCode::MalformedEntry, "expected '{' after " + std::string(what), start);
    get();
    std::string out;
    int depth = 1;
    bool space = false;
    while (true) {
      if (eof()) throw Error(ErrorCode::MalformedEntry, "unterminated value of " + std::string(what), start);
      char c = peek();
      if (c == '%' && (out.empty() || out.back() != '\\')) {
        skip_comment();
        continue;
      }
      get();
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) break;
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !out.empty()) out += ' ';
      space = false;
      out += c;
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::vector<RawEntry> scan_entries(std::string_view source) {
  for (std::size_t i = 0, line = 1, col = 1; i < source.size(); ++i, ++col) {
    auto c = static_cast<unsigned char>(source[i]);
    if (c >= 0x80) {
      throw Error(ErrorCode::NonAscii, "reference files must be ASCII",
                  SourcePos{static_cast<int>(line), static_cast<int>(col)});
    }
    if (c == '\n') {
      ++line;
      col = 0;
    }
  }

  Scanner sc(source);
  std::vector<RawEntry> entries;
  sc.skip_space();
  while (!sc.eof()) {
    SourcePos start = sc.pos();
    if (sc.peek() != '\\') throw Error(ErrorCode::MalformedEntry, "expected \\ref{<key>}", start);
    sc.get();
    if (sc.command_name() != "ref") throw Error(ErrorCode::MalformedEntry, "expected \\ref{<key>}", start);
    RawEntry entry;
    entry.pos = start;
    std::string key = sc.braced("\\ref");
    entry.key = key;
    if (entry.key.empty()) throw Error(ErrorCode::MalformedEntry, "empty reference key", start);

    while (true) {
      int newlines = sc.skip_space();
      if (sc.eof() || newlines >= 2) break;
      SourcePos fpos = sc.pos();
      if (sc.peek() != '\\') {
        throw Error(ErrorCode::MalformedEntry, "text outside a field in reference '" + entry.key + "'", fpos);
      }
      sc.get();
      std::string name = sc.command_name();
      if (name.empty()) throw Error(ErrorCode::MalformedEntry, "expected a field name", fpos);
      if (name == "ref") {
        throw Error(ErrorCode::MalformedEntry, "entry '" + entry.key + "' is not terminated by a blank line", fpos);
      }
      sc.skip_space();
      std::string value = sc.braced("\\" + name);
      entry.fields.push_back({name, value, fpos});
    }
    entries.push_back(std::move(entry));
    sc.skip_space();
  }
  return entries;
}

std::optional<std::string>* text_slot(RefRecord& r, std::string_view name) {
  if (name == "author") return &r.author;
  if (name == "title") return &r.title;
  if (name == "journal") return &r.journal;
  if (name == "inbook") return &r.inbook;
  if (name == "publ") return &r.publ;
  if (name == "report") return &r.report;
  if (name == "series") return &r.series;
  if (name == "ed") return &r.ed;
  if (name == "vol") return &r.vol;
  if (name == "idno") return &r.idno;
  if (name == "year") return &r.year;
  if (name == "ISBN") return &r.isbn;
  if (name == "note") return &r.endnote;
  if (name == "ident") return &r.ident;
  return nullptr;
}

RefRecord build_record(const RawEntry& e) {
  RefRecord r;
  r.key = e.key;
  r.pos = e.pos;
  std::optional<std::string> mark;
  for (const auto& f : e.fields) {
    auto duplicate = [&](std::string_view slot) {
      return Error(ErrorCode::DuplicateField,
                   "Multiple definition of \\" + std::string(slot) + " within reference '" + e.key + "'", f.pos);
    };
    if (f.name == "mark") {
      if (mark) throw duplicate("mark");
      mark = f.value;
    } else if (f.name == "pages" || f.name == "totalpages") {
      if (r.pages) throw duplicate("pages");
      if (f.name == "pages") {
        try {
          normalize_pages(f.value);
        } catch (const Error& err) {
          throw err.at(f.pos);
        }
        r.pages = Pages::range(f.value);
      } else {
        if (f.value.empty()) throw Error(ErrorCode::MalformedRange, "empty page count", f.pos);
        r.pages = Pages::amount(f.value);
      }
    } else if (auto* slot = text_slot(r, f.name)) {
      if (*slot) throw duplicate(f.name);
      *slot = f.value;
    } else {
      throw Error(ErrorCode::MalformedEntry, "unknown field \\" + f.name, f.pos);
    }
  }
  r.mark = mark && !mark->empty() ? *mark : r.key;
  return r;
}

}  // namespace

RefDatabase ingest_refs(std::string_view source) {
  std::vector<RawEntry> entries = scan_entries(source);
  RefDatabase db;

  // Pass one: key -> mark only.
  for (const auto& e : entries) {
    std::string mark = e.key;
    std::optional<std::string> ident;
    for (const auto& f : e.fields) {
      if (f.name == "mark" && !f.value.empty()) mark = f.value;
      if (f.name == "ident") ident = f.value;
    }
    if (!db.marks.emplace(e.key, mark).second) {
      throw Error(ErrorCode::DuplicateKey, "reference key '" + e.key + "' defined twice", e.pos);
    }
    if (ident && !ident->empty() && !db.marks.emplace(*ident, mark).second) {
      throw Error(ErrorCode::DuplicateKey, "ident '" + *ident + "' collides with another key", e.pos);
    }
  }

  // Pass two: full records in file order.
  db.records.reserve(entries.size());
  for (const auto& e : entries) db.records.push_back(build_record(e));
  return db;
}

}  // namespace texmark
