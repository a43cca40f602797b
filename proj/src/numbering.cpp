#include "texmark/numbering.hpp"

#include <cctype>
#include <charconv>

#include "texmark/error.hpp"

namespace texmark {

namespace {

constexpr int kMaxAppendices = 10;  // letters A..J

std::string headline(int secno, const std::string& label, std::string_view title) {
  std::string out;
  if (secno < 0) {
    out = "Appendix " + label + ".";
  } else {
    out = label;
  }
  if (!out.empty() && !title.empty()) out += ' ';
  out += title;
  return out;
}

MarkRecord make_mark(const CounterState& s, const std::string& label, std::string_view title) {
  return MarkRecord{s.secno, s.subsecno, s.proclno, headline(s.secno, label, title)};
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

}  // namespace

CounterState CounterState::initial(bool subsections) {
  CounterState s;
  s.subsecno = subsections ? 0 : -1;
  return s;
}

void LabelTable::bind(const std::string& name, const std::string& value) {
  values_.insert_or_assign(name, value);
  history_.emplace_back(name, value);
}

bool LabelTable::contains(std::string_view name) const { return values_.find(name) != values_.end(); }

std::optional<std::string> LabelTable::lookup(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

SectionStep begin_section(const CounterState& state, std::string_view title) {
  CounterState s = state;
  s.secno += 1;
  if (s.subsecno > -1) s.subsecno = 0;
  s.proclno = 0;
  std::string text = std::to_string(s.secno);
  return {s, {text, LabelKind::Section}, make_mark(s, text, title)};
}

SectionStep begin_subsection(const CounterState& state, std::string_view title) {
  if (state.subsecno < 0) {
    throw Error(ErrorCode::StructureConflict,
                "subsection in a document configured without subsections");
  }
  if (state.secno < 1) {
    throw Error(ErrorCode::StructureConflict,
                "subsection outside a numbered section (secno=" + std::to_string(state.secno) + ")");
  }
  CounterState s = state;
  s.subsecno += 1;
  s.proclno = 0;
  std::string text = std::to_string(s.secno) + "." + std::to_string(s.subsecno);
  return {s, {text, LabelKind::Subsection}, make_mark(s, text, title)};
}

AppendixStep begin_appendix(const CounterState& state, std::string_view title) {
  CounterState s = state;
  std::optional<std::string> divider;
  if (s.secno > 0) {
    divider = "\\Appendices";
    s.secno = 0;
  }
  s.secno -= 1;
  if (-s.secno > kMaxAppendices) {
    throw Error(ErrorCode::AppendixOverflow,
                "appendix " + std::to_string(-s.secno) + " has no letter (A-J only)");
  }
  s.subsecno = 0;
  s.proclno = 0;
  std::string text(1, static_cast<char>('A' + (-s.secno - 1)));
  return {s, {text, LabelKind::Appendix}, make_mark(s, text, title), divider};
}

SectionStep begin_supplement(const CounterState& state, std::string_view title) {
  CounterState s = state;
  if (s.secno < 0) {
    s.secno = 1000;
  } else {
    s.secno += 1;
  }
  return {s, {"", LabelKind::Supplement}, make_mark(s, "", title)};
}

SectionStep begin_notoc_section(const CounterState& state, std::string_view title) {
  CounterState s = state;
  s.secno = 0;
  return {s, {"", LabelKind::None}, make_mark(s, "", title)};
}

ProclaimStep next_proclaim(const CounterState& state, std::string_view /*heading*/,
                           const std::optional<std::string>& key, LabelTable& labels) {
  CounterState s = state;
  s.proclno += 1;
  s.itemno = 0;
  std::string text = std::to_string(s.secno);
  if (s.subsecno > -1) text += "." + std::to_string(s.subsecno);
  text += "." + std::to_string(s.proclno);

  ProclaimStep step{s, {text, LabelKind::Proclaim}, std::nullopt, false};
  if (key) {
    if (labels.contains(*key)) {
      step.key_already_bound = true;
    } else {
      labels.bind(*key, text);
      step.bound_key = key;
    }
  }
  return step;
}

EquationLabel parse_equation_label(std::string_view raw) {
  std::size_t i = 0;
  while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
  if (i == raw.size()) return {};
  if (raw[i] != '\\' || i + 1 >= raw.size() || !is_letter(raw[i + 1])) {
    throw Error(ErrorCode::IncorrectLabel, "Incorrect label " + std::string(raw.substr(i)));
  }
  std::size_t j = i + 1;
  while (j < raw.size() && is_letter(raw[j])) ++j;
  EquationLabel out;
  out.key = std::string(raw.substr(i + 1, j - i - 1));
  while (j < raw.size() && std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
  std::string_view rest = raw.substr(j);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
  out.suffix = std::string(rest);
  return out;
}

EquationStep next_equation(const CounterState& state, const EquationLabel& label,
                           LabelTable& labels) {
  for (char c : label.suffix) {
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::IncorrectLabel,
                  "equation suffix '" + label.suffix + "' must be ASCII alphanumeric");
    }
  }
  CounterState s = state;
  s.eqnumber += 1;
  std::string number = std::to_string(s.eqnumber);
  EquationStep step{s, "(" + number + label.suffix + ")", std::nullopt};
  if (label.key) {
    labels.bind(*label.key, number);
    step.bound_key = label.key;
  }
  return step;
}

std::string add_offset(std::string_view base, long long delta) {
  std::string_view t = base;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorCode::ParseError, "'" + std::string(base) + "' is not an integer");
  }
  return std::to_string(value + delta);
}

std::string roman_numeral(int n) {
  static constexpr std::pair<int, const char*> table[] = {
      {1000, "m"}, {900, "cm"}, {500, "d"}, {400, "cd"}, {100, "c"}, {90, "xc"},
      {50, "l"},   {40, "xl"},  {10, "x"},  {9, "ix"},   {5, "v"},   {4, "iv"}, {1, "i"}};
  std::string out;
  for (const auto& [value, digits] : table) {
    while (n >= value) {
      out += digits;
      n -= value;
    }
  }
  return out;
}

std::string item_number(ItemStyle style, int n) {
  if (n < 1) throw Error(ErrorCode::ParseError, "item number must be at least 1");
  switch (style) {
    case ItemStyle::Arabic: return "(" + std::to_string(n) + ")";
    case ItemStyle::Roman: return "(" + roman_numeral(n) + ")";
    case ItemStyle::Alpha:
      if (n > 26) {
        throw Error(ErrorCode::AlphaOverflow, "item " + std::to_string(n) + " has no letter");
      }
      return std::string(1, static_cast<char>(96 + n)) + ".";
  }
  return {};
}

CounterState reset_items(const CounterState& state) {
  CounterState s = state;
  s.itemno = 0;
  return s;
}

std::string folio(int pageno) {
  if (pageno < 0) return roman_numeral(-pageno);
  return std::to_string(pageno);
}

int advance_page(int pageno) { return pageno < 0 ? pageno - 1 : pageno + 1; }

}  // namespace texmark
