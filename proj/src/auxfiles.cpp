#include "texmark/auxfiles.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>

#include "texmark/error.hpp"

namespace texmark {

namespace {

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

int* register_slot(CounterState& s, std::string_view name) {
  if (name == "secno") return &s.secno;
  if (name == "subsecno") return &s.subsecno;
  if (name == "proclno") return &s.proclno;
  if (name == "eqnumber") return &s.eqnumber;
  if (name == "pageno") return &s.pageno;
  if (name == "itemno") return &s.itemno;
  return nullptr;
}

bool is_saved_register(std::string_view name) {
  return name == "secno" || name == "subsecno" || name == "proclno" || name == "eqnumber" ||
         name == "pageno";
}

}  // namespace

std::string ProtectedString::render() const {
  std::string out;
  for (const auto& seg : segments) {
    if (seg.kind == Segment::Kind::Math) {
      out += '$';
      out += seg.text;
      out += '$';
    } else {
      out += seg.text;
    }
  }
  return out;
}

ProtectedString protect_math(std::string_view raw) {
  ProtectedString out;
  bool in_math = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i < raw.size() && raw[i] != '$') continue;
    std::string_view piece = raw.substr(start, i - start);
    if (i == raw.size()) {
      if (in_math) throw Error(ErrorCode::UnbalancedMath, "odd number of '$' in \"" + std::string(raw) + "\"");
      if (!piece.empty()) out.segments.push_back({ProtectedString::Segment::Kind::Text, std::string(piece)});
      break;
    }
    if (in_math) {
      out.segments.push_back({ProtectedString::Segment::Kind::Math, std::string(piece)});
    } else if (!piece.empty()) {
      out.segments.push_back({ProtectedString::Segment::Kind::Text, std::string(piece)});
    }
    in_math = !in_math;
    start = i + 1;
  }
  return out;
}

std::string emit_toc_header() { return "\\NotocSection Table of contents. \\noindent\\medskip"; }

std::string emit_toc_line(const TocEntry& entry) {
  return "\\tocitem " + entry.label + "=" + entry.title.render() + " \\onpage " + entry.page + ".";
}

std::string emit_index_line(const IndexEntry& entry) {
  return entry.term.render() + " @" + entry.page + ".";
}

std::string serialize(const LabLine& line) {
  struct Visitor {
    std::string operator()(const LabDefine& d) const { return "\\def\\" + d.csname + "{" + d.value + "}"; }
    std::string operator()(const LabCounterSave& c) const {
      return "\\" + c.reg + "=" + std::to_string(c.value);
    }
    std::string operator()(const LabAdvancePage&) const { return "\\advancepageno"; }
  };
  return std::visit(Visitor{}, line);
}

std::vector<LabLine> emit_checkpoint(const CounterState& s) {
  return {LabCounterSave{"secno", s.secno},       LabCounterSave{"subsecno", s.subsecno},
          LabCounterSave{"proclno", s.proclno},   LabCounterSave{"eqnumber", s.eqnumber},
          LabCounterSave{"pageno", s.pageno},     LabAdvancePage{}};
}

std::vector<LabLine> emit_label_defines(const LabelTable& labels) {
  std::vector<LabLine> out;
  for (const auto& [name, value] : labels.history()) {
    if (!value.empty()) out.push_back(LabDefine{name, value});
  }
  return out;
}

LabReplay parse_lab(std::span<const std::string> lines, const CounterState& base) {
  LabReplay out{base, {}, {}};
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = lines[n];
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;

    auto malformed = [&] {
      return Error(ErrorCode::MalformedLabLine, "line " + std::to_string(n + 1) + ": " + std::string(line),
                   SourcePos{static_cast<int>(n + 1), 1});
    };
    if (line.front() != '\\') throw malformed();

    if (line == "\\advancepageno") {
      out.state.pageno = advance_page(out.state.pageno);
      continue;
    }
    if (line.starts_with("\\def\\")) {
      std::size_t i = 5;
      std::size_t j = i;
      while (j < line.size() && is_letter(line[j])) ++j;
      if (j == i || j >= line.size() || line[j] != '{' || line.back() != '}') throw malformed();
      std::string_view value = line.substr(j + 1, line.size() - j - 2);
      int depth = 0;
      for (char c : value) {
        if (c == '{') ++depth;
        if (c == '}' && --depth < 0) throw malformed();
      }
      if (depth != 0) throw malformed();
      out.labels.bind(std::string(line.substr(i, j - i)), std::string(value));
      continue;
    }

    std::size_t j = 1;
    while (j < line.size() && is_letter(line[j])) ++j;
    if (j == 1 || j >= line.size() || line[j] != '=') throw malformed();
    std::string name(line.substr(1, j - 1));
    std::string_view digits = line.substr(j + 1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) throw malformed();

    if (!is_saved_register(name)) {
      out.warnings.push_back("line " + std::to_string(n + 1) + ": register \\" + name +
                             " is not part of the checkpoint");
    }
    if (int* slot = register_slot(out.state, name)) {
      *slot = static_cast<int>(value);
    }
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join_lines(std::span<const std::string> lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

IndexEntry parse_index_line(std::string_view line) {
  if (line.size() < 3 || line.back() != '.') {
    throw Error(ErrorCode::ParseError, "index line must end with '.'");
  }
  std::size_t at = line.rfind(" @");
  if (at == std::string_view::npos) throw Error(ErrorCode::ParseError, "index line has no ' @'");
  std::string page(line.substr(at + 2, line.size() - at - 3));
  if (page.empty()) throw Error(ErrorCode::ParseError, "index line has an empty page");
  return {protect_math(line.substr(0, at)), page};
}

namespace {

// Roman folios sort before arabic ones, each group numerically.
std::pair<int, long long> page_key(const std::string& page) {
  static constexpr std::pair<char, int> digits[] = {{'i', 1},   {'v', 5},   {'x', 10},  {'l', 50},
                                                    {'c', 100}, {'d', 500}, {'m', 1000}};
  auto value_of = [](char c) {
    for (const auto& [d, v] : digits) {
      if (d == c) return v;
    }
    return 0;
  };
  if (!page.empty() && std::all_of(page.begin(), page.end(), [&](char c) { return value_of(c) > 0; })) {
    long long total = 0;
    for (std::size_t i = 0; i < page.size(); ++i) {
      int v = value_of(page[i]);
      if (i + 1 < page.size() && v < value_of(page[i + 1])) {
        total -= v;
      } else {
        total += v;
      }
    }
    return {0, total};
  }
  long long n = 0;
  auto [ptr, ec] = std::from_chars(page.data(), page.data() + page.size(), n);
  if (ec != std::errc() || ptr != page.data() + page.size()) return {2, 0};
  return {1, n};
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::string> sort_index(std::span<const std::string> lines) {
  struct TermPages {
    std::string term;
    std::vector<std::string> pages;
  };
  std::map<std::pair<std::string, std::string>, TermPages> merged;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    IndexEntry e;
    try {
      e = parse_index_line(lines[n]);
    } catch (const Error& err) {
      throw err.at({static_cast<int>(n + 1), 1});
    }
    std::string term = e.term.render();
    auto& slot = merged[{fold_case(term), term}];
    slot.term = term;
    slot.pages.push_back(e.page);
  }
  std::vector<std::string> out;
  for (auto& [key, tp] : merged) {
    std::sort(tp.pages.begin(), tp.pages.end(), [](const std::string& a, const std::string& b) {
      auto ka = page_key(a);
      auto kb = page_key(b);
      return ka != kb ? ka < kb : a < b;
    });
    tp.pages.erase(std::unique(tp.pages.begin(), tp.pages.end()), tp.pages.end());
    std::string line = tp.term + " @";
    for (std::size_t i = 0; i < tp.pages.size(); ++i) {
      if (i > 0) line += ", ";
      line += tp.pages[i];
    }
    line += '.';
    out.push_back(std::move(line));
  }
  return out;
}

}  // namespace texmark
