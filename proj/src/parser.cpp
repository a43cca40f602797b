#include <algorithm>
#include <cctype>
#include <charconv>

#include "texmark/auxfiles.hpp"
#include "texmark/bibliography.hpp"
#include "texmark/source.hpp"

namespace texmark {

namespace {

const std::set<std::string, std::less<>> kStructural = {"newsection", "subsection", "Appendix", "Supplement",
                                                        "NotocSection"};

// Control words that are never label names.
const std::set<std::string, std::less<>> kReserved = {
    "newsection", "subsection", "Appendix", "Supplement", "NotocSection", "proclaim", "neqn", "eqn",
    "label", "ref", "inx", "index", "labelsec", "add", "statitem", "eqitem", "defitem", "newlist",
    "opentoc", "beginrefs", "endrefs", "bye", "par", "bf", "it", "sl", "rm", "tt", "em", "emph",
    "newterm", "foreign", "noindent", "indent", "quad", "qquad", "enspace", "thinspace", "medskip",
    "smallskip", "bigskip", "item", "itemitem", "relax", "hfil", "hfill", "break", "eqno", "leqno",
    "left", "right", "cr", "dots", "ldots", "cdots", "TeX", "S", "Sec", "dueto", "heading", "proof",
    "QED", "QEDQED", "footnote", "caps", "copyright", "hbox", "vbox", "mbox", "text", "ttext"};

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
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

SourcePos advance_pos(SourcePos p, std::string_view text) {
  for (char c : text) {
    if (c == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

enum class Context { Top, Group, Body };

struct TextBuffer {
  std::string text;
  SourcePos start;

  void add(std::string_view s, SourcePos p) {
    if (s.empty()) return;
    if (text.empty()) start = p;
    text += s;
  }
  void flush(std::vector<DocEvent>& events) {
    if (text.empty()) return;
    events.push_back({TextEvent{std::move(text)}, start});
    text.clear();
  }
};

class Parser {
 public:
  Parser(const ParseOptions& options, const std::set<std::string, std::less<>>* declared)
      : options_(options), declared_(declared) {
    bound_.insert(options.known_labels.begin(), options.known_labels.end());
  }

  ParsedDocument run(const std::vector<Token>& toks) {
    std::size_t i = 0;
    TextBuffer text;
    sequence(toks, i, toks.size(), out_.events, text, Context::Top);
    text.flush(out_.events);
    out_.declared = declared_names_;
    return std::move(out_);
  }

 private:
  static std::size_t skip_spaces(const std::vector<Token>& toks, std::size_t i, std::size_t end) {
    while (i < end && toks[i].is_space()) ++i;
    return i;
  }

  void warn(SourcePos p, const std::string& msg) {
    if (declared_) out_.warnings.push_back(std::to_string(p.line) + ":" + std::to_string(p.column) + ": " + msg);
  }

  void declare(const std::string& name) {
    bound_.insert(name);
    declared_names_.insert(name);
  }

  bool is_label_name(std::string_view name) const {
    if (kReserved.count(name)) return false;
    if (options_.known_labels.count(name)) return true;
    return declared_ && declared_->count(name);
  }

  /// Parses toks[i, end) and leaves i == end or at a \bye.
  void sequence(const std::vector<Token>& toks, std::size_t& i, std::size_t end, std::vector<DocEvent>& events,
                TextBuffer& text, Context ctx) {
    while (i < end) {
      const Token& t = toks[i];
      if (t.kind == Token::Kind::Command) {
        if (t.text == "bye") {
          if (ctx == Context::Body) {
            throw Error(ErrorCode::MissingDelimiter, "\\proclaim body runs into \\bye (expected a blank line)", t.pos);
          }
          if (ctx == Context::Top) {
            i = end;
            stopped_ = true;
            return;
          }
        }
        if (ctx == Context::Body && (kStructural.count(t.text) || t.text == "proclaim")) {
          throw Error(ErrorCode::MissingDelimiter,
                      "\\proclaim body runs into \\" + t.text + " (expected a blank line)", t.pos);
        }
        if (ctx == Context::Top && kStructural.count(t.text)) {
          text.flush(events);
          sectional(toks, i, end, events);
          continue;
        }
        if (ctx == Context::Top && t.text == "proclaim") {
          text.flush(events);
          proclaim(toks, i, end, events);
          continue;
        }
        command(toks, i, end, events, text, ctx);
        if (stopped_) return;
        continue;
      }
      if (t.kind == Token::Kind::Group) {
        text.add("{", t.pos);
        std::size_t j = 0;
        sequence(t.children, j, t.children.size(), events, text, ctx == Context::Body ? Context::Body : Context::Group);
        text.add("}", t.pos);
        ++i;
        continue;
      }
      if (t.kind == Token::Kind::MathSpan) {
        math(t, events, text);
        ++i;
        continue;
      }
      text.add(t.text, t.pos);
      ++i;
    }
  }

  void sectional(const std::vector<Token>& toks, std::size_t& i, std::size_t end, std::vector<DocEvent>& events) {
    const Token& cmd = toks[i];
    std::size_t k = i + 1;
    while (k < end && !toks[k].is_char('.')) ++k;
    if (k == end) {
      throw Error(ErrorCode::MissingDelimiter, "\\" + cmd.text + " title must end with '.'", cmd.pos);
    }
    std::string title = collapse_ws(to_source({toks.begin() + static_cast<long>(i + 1), toks.begin() + static_cast<long>(k)}));
    if (cmd.text == "newsection") events.push_back({SectionEvent{title}, cmd.pos});
    if (cmd.text == "subsection") events.push_back({SubsectionEvent{title}, cmd.pos});
    if (cmd.text == "Appendix") events.push_back({AppendixEvent{title}, cmd.pos});
    if (cmd.text == "Supplement") events.push_back({SupplementEvent{title}, cmd.pos});
    if (cmd.text == "NotocSection") events.push_back({NotocSectionEvent{title}, cmd.pos});
    seen_structure_ = true;
    i = k + 1;
  }

  void proclaim(const std::vector<Token>& toks, std::size_t& i, std::size_t end, std::vector<DocEvent>& events) {
    const Token& cmd = toks[i];
    std::size_t k = i + 1;
    while (k + 1 < end && !(toks[k].is_char('.') && toks[k + 1].is_space())) ++k;
    if (k + 1 >= end) {
      throw Error(ErrorCode::MissingDelimiter, "\\proclaim heading must end with \". \"", cmd.pos);
    }
    ProclaimEvent ev;
    ev.heading = collapse_ws(to_source({toks.begin() + static_cast<long>(i + 1), toks.begin() + static_cast<long>(k)}));
    std::size_t j = skip_spaces(toks, k + 1, end);

    if (j < end && toks[j].is_control_word() && !kReserved.count(toks[j].text)) {
      if (bound_.count(toks[j].text)) {
        ev.key_was_bound = true;
        warn(toks[j].pos, "\\" + toks[j].text + " is already bound; kept as body text of the \\proclaim");
      } else {
        ev.key = toks[j].text;
        declare(toks[j].text);
        ++j;
      }
    }

    // Body runs to a blank line or \par.
    std::size_t e = j;
    bool par = false;
    for (; e < end; ++e) {
      if (toks[e].is_command("par")) {
        par = true;
        break;
      }
      if (toks[e].is_char('\n')) {
        std::size_t m = e + 1;
        while (m < end && (toks[m].is_char(' ') || toks[m].is_char('\t') || toks[m].is_char('\r'))) ++m;
        if (m < end && toks[m].is_char('\n')) break;
      }
    }
    if (e == end) {
      throw Error(ErrorCode::MissingDelimiter, "\\proclaim body must end with a blank line", cmd.pos);
    }
    seen_structure_ = true;
    TextBuffer body_text;
    std::size_t b = j;
    sequence(toks, b, e, ev.body, body_text, Context::Body);
    body_text.flush(ev.body);
    events.push_back({std::move(ev), cmd.pos});
    i = par ? e + 1 : e;
  }

  void equation(const std::vector<Token>& toks, std::size_t& i, std::size_t end, std::vector<DocEvent>& events,
                TextBuffer& text) {
    const Token& cmd = toks[i];
    std::size_t j = skip_spaces(toks, i + 1, end);
    if (j >= end || !toks[j].is_char('(')) {
      if (cmd.text == "label") {
        text.add("\\label", cmd.pos);
        ++i;
        return;
      }
      throw Error(ErrorCode::MissingDelimiter, "\\" + cmd.text + " expects (\\Key suffix)", cmd.pos);
    }
    std::size_t k = j + 1;
    while (k < end && !toks[k].is_char(')')) ++k;
    if (k == end) throw Error(ErrorCode::MissingDelimiter, "\\" + cmd.text + "( is never closed by ')'", cmd.pos);
    std::string raw = to_source({toks.begin() + static_cast<long>(j + 1), toks.begin() + static_cast<long>(k)});
    add_equation(raw, cmd.pos, events, text);
    i = k + 1;
  }

  void add_equation(const std::string& raw, SourcePos pos, std::vector<DocEvent>& events, TextBuffer& text) {
    EquationLabel label;
    try {
      label = parse_equation_label(raw);
    } catch (const Error& e) {
      throw e.at(pos);
    }
    text.flush(events);
    if (label.key) declare(*label.key);
    events.push_back({EquationEvent{label.key, label.suffix}, pos});
  }

  void math(const Token& t, std::vector<DocEvent>& events, TextBuffer& text) {
    const std::string open = t.display ? "$$" : "$";
    if (!t.display) {
      text.add(open + t.text + open, t.pos);
      return;
    }
    std::string_view body = t.text;
    std::size_t done = 0;
    std::string pending = open;
    SourcePos pending_pos = t.pos;
    static constexpr std::string_view kCommands[] = {"\\neqn", "\\eqn", "\\label"};
    std::size_t from = done;
    while (true) {
      std::size_t best = std::string_view::npos;
      std::size_t best_len = 0;
      for (auto c : kCommands) {
        for (std::size_t at = body.find(c, from); at != std::string_view::npos; at = body.find(c, at + 1)) {
          std::size_t after = at + c.size();
          if (after < body.size() && std::isalpha(static_cast<unsigned char>(body[after]))) continue;
          if (at < best) {
            best = at;
            best_len = c.size();
          }
          break;
        }
      }
      if (best == std::string_view::npos) break;
      SourcePos cmd_pos = advance_pos(advance_pos(t.pos, open), body.substr(0, best));
      std::size_t paren = best + best_len;
      while (paren < body.size() && std::isspace(static_cast<unsigned char>(body[paren]))) ++paren;
      if (paren >= body.size() || body[paren] != '(') {
        if (body.substr(best, best_len) == "\\label") {
          from = best + best_len;
          continue;
        }
        throw Error(ErrorCode::MissingDelimiter, "\\" + std::string(body.substr(best + 1, best_len - 1)) +
                                                     " expects (\\Key suffix)", cmd_pos);
      }
      best_len = paren + 1 - best;
      std::size_t close = body.find(')', best + best_len);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::MissingDelimiter, "equation tag is never closed by ')'", cmd_pos);
      }
      pending += body.substr(done, best - done);
      text.add(pending, pending_pos);
      pending.clear();
      add_equation(std::string(body.substr(best + best_len, close - best - best_len)), cmd_pos, events, text);
      done = close + 1;
      from = done;
      pending_pos = advance_pos(advance_pos(t.pos, open), body.substr(0, done));
    }
    pending += body.substr(done);
    pending += open;
    text.add(pending, pending_pos);
  }

  /// Single group or single token argument.
  static std::string simple_arg(const std::vector<Token>& toks, std::size_t& j, std::size_t end) {
    j = skip_spaces(toks, j, end);
    if (j >= end) return {};
    const Token& a = toks[j++];
    if (a.kind == Token::Kind::Group) return to_source(a.children);
    return to_source({a});
  }

  void command(const std::vector<Token>& toks, std::size_t& i, std::size_t end, std::vector<DocEvent>& events,
               TextBuffer& text, Context ctx) {
    const Token& t = toks[i];
    const std::string& name = t.text;

    if (name == "neqn" || name == "eqn" || name == "label") {
      equation(toks, i, end, events, text);
      return;
    }
    if (name == "ref") {
      std::size_t j = skip_spaces(toks, i + 1, end);
      if (j >= end || toks[j].kind != Token::Kind::Group) {
        throw Error(ErrorCode::MissingDelimiter, "\\ref expects {key} or {key, text}", t.pos);
      }
      Citation c;
      try {
        c = parse_citation(to_source(toks[j].children));
      } catch (const Error& e) {
        throw e.at(t.pos);
      }
      text.flush(events);
      events.push_back({CiteEvent{c.key, c.suffix}, t.pos});
      i = j + 1;
      return;
    }
    if (name == "inx" || name == "index") {
      std::size_t j = skip_spaces(toks, i + 1, end);
      if (j >= end || toks[j].kind != Token::Kind::Group) {
        throw Error(ErrorCode::MissingDelimiter, "\\" + name + " expects {term}", t.pos);
      }
      std::string term = collapse_ws(to_source(toks[j].children));
      try {
        protect_math(term);
      } catch (const Error& e) {
        throw e.at(t.pos);
      }
      if (term.empty()) warn(t.pos, "empty index term");
      text.flush(events);
      events.push_back({IndexEvent{term, name == "index"}, t.pos});
      i = j + 1;
      return;
    }
    if (name == "labelsec") {
      std::size_t j = skip_spaces(toks, i + 1, end);
      if (j >= end || !toks[j].is_control_word()) {
        throw Error(ErrorCode::MissingDelimiter, "\\labelsec expects a control word", t.pos);
      }
      if (!seen_structure_) warn(t.pos, "\\labelsec before any section binds an empty label");
      declare(toks[j].text);
      text.flush(events);
      events.push_back({LabelSecEvent{toks[j].text}, t.pos});
      i = j + 1;
      return;
    }
    if (name == "add") {
      std::size_t j = skip_spaces(toks, i + 1, end);
      OffsetEvent ev;
      if (j < end && toks[j].is_control_word()) {
        ev.base = toks[j].text;
        ev.base_is_label = true;
        ++j;
      } else if (j < end && toks[j].kind == Token::Kind::Group) {
        std::size_t g = skip_spaces(toks[j].children, 0, toks[j].children.size());
        const auto& ch = toks[j].children;
        if (g < ch.size() && ch[g].is_control_word() && skip_spaces(ch, g + 1, ch.size()) == ch.size()) {
          ev.base = ch[g].text;
          ev.base_is_label = true;
        } else {
          ev.base = collapse_ws(to_source(ch));
        }
        ++j;
      } else {
        ev.base = simple_arg(toks, j, end);
      }
      std::string delta = collapse_ws(simple_arg(toks, j, end));
      std::string_view d = delta;
      if (!d.empty() && d.front() == '+') d.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), ev.delta);
      if (d.empty() || ec != std::errc() || ptr != d.data() + d.size()) {
        throw Error(ErrorCode::ParseError, "\\add offset '" + delta + "' is not an integer", t.pos);
      }
      if (!ev.base_is_label) {
        try {
          add_offset(ev.base, 0);
        } catch (const Error& e) {
          throw e.at(t.pos);
        }
      }
      text.flush(events);
      events.push_back({ev, t.pos});
      i = j;
      return;
    }
    if (name == "statitem" || name == "eqitem" || name == "defitem") {
      ItemStyle style = name == "statitem" ? ItemStyle::Arabic : name == "eqitem" ? ItemStyle::Roman : ItemStyle::Alpha;
      text.flush(events);
      events.push_back({ItemEvent{style}, t.pos});
      i = skip_spaces(toks, i + 1, end);
      return;
    }
    if (name == "newlist") {
      text.flush(events);
      events.push_back({ListResetEvent{}, t.pos});
      ++i;
      return;
    }
    if (name == "opentoc" && ctx == Context::Top) {
      text.flush(events);
      events.push_back({OpenTocEvent{}, t.pos});
      ++i;
      return;
    }
    if (name == "beginrefs" && ctx == Context::Top) {
      text.flush(events);
      events.push_back({BibliographyEvent{}, t.pos});
      ++i;
      return;
    }
    if (name == "endrefs" && ctx == Context::Top) {
      ++i;
      return;
    }
    if (name == "par") {
      text.add("\n\n", t.pos);
      ++i;
      return;
    }
    if (t.is_control_word() && is_label_name(name)) {
      text.flush(events);
      events.push_back({LabelRefEvent{name}, t.pos});
      ++i;
      return;
    }
    text.add("\\" + name, t.pos);
    ++i;
  }

  const ParseOptions& options_;
  const std::set<std::string, std::less<>>* declared_;
  std::set<std::string, std::less<>> bound_;
  std::set<std::string, std::less<>> declared_names_;
  ParsedDocument out_;
  bool seen_structure_ = false;
  bool stopped_ = false;
};

struct SourceVisitor {
  std::string operator()(const TextEvent& e) const { return e.run; }
  std::string operator()(const LabelRefEvent& e) const { return "\\" + e.name; }
  std::string operator()(const CiteEvent& e) const { return "\\ref{" + e.key + e.suffix.value_or("") + "}"; }
  std::string operator()(const IndexEvent& e) const { return (e.visible ? "\\index{" : "\\inx{") + e.term + "}"; }
  std::string operator()(const EquationEvent& e) const {
    std::string inner = e.key ? "\\" + *e.key + (e.suffix.empty() ? "" : " " + e.suffix) : e.suffix;
    return "\\neqn(" + inner + ")";
  }
  std::string operator()(const OffsetEvent& e) const {
    return "\\add{" + (e.base_is_label ? "\\" + e.base : e.base) + "}{" + std::to_string(e.delta) + "}";
  }
  std::string operator()(const ItemEvent& e) const {
    switch (e.style) {
      case ItemStyle::Arabic: return "\\statitem ";
      case ItemStyle::Roman: return "\\eqitem ";
      case ItemStyle::Alpha: return "\\defitem ";
    }
    return {};
  }
  std::string operator()(const ListResetEvent&) const { return "\\newlist"; }
  template <typename T>
  std::string operator()(const T&) const { return {}; }
};

std::string event_source(const DocEvent& ev) { return std::visit(SourceVisitor{}, ev.data); }

}  // namespace

std::string ProclaimEvent::body_text() const {
  std::string out;
  for (const auto& ev : body) out += event_source(ev);
  std::string_view v = out;
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
  while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
  return std::string(v);
}

ParsedDocument parse_events(const std::vector<Token>& tokens, const ParseOptions& options) {
  // First walk finds every name the document binds, so that forward
  // references are recognized as labels in the second walk.
  ParsedDocument first = Parser(options, nullptr).run(tokens);
  return Parser(options, &first.declared).run(tokens);
}

ParsedDocument parse_document(std::string_view input, const ParseOptions& options) {
  return parse_events(tokenize(input), options);
}

}  // namespace texmark
