#pragma once

// Lexer and event parser for the document dialect: structural commands,
// braced arguments, math spans, citations and index terms.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "texmark/error.hpp"
#include "texmark/numbering.hpp"

namespace texmark {

struct Token {
  enum class Kind { Command, Group, MathSpan, Char };

  Kind kind = Kind::Char;
  /// Command name, math contents (without `$`), or the single character.
  std::string text;
  std::vector<Token> children;  ///< Group contents
  bool display = false;         ///< `$$...$$`
  SourcePos pos;

  bool is_char(char c) const { return kind == Kind::Char && text.size() == 1 && text[0] == c; }
  bool is_command(std::string_view name) const { return kind == Kind::Command && text == name; }
  bool is_space() const;
  /// Control word (backslash followed by letters).
  bool is_control_word() const;
};

/// Comments are dropped.  Throws UnbalancedGroup, UnbalancedMath or
/// NonAscii with the offending position.
std::vector<Token> tokenize(std::string_view input);

/// Source text of a token sequence.
std::string to_source(const std::vector<Token>& tokens);

struct DocEvent;

struct SectionEvent { std::string title; };
struct SubsectionEvent { std::string title; };
struct AppendixEvent { std::string title; };
struct SupplementEvent { std::string title; };
struct NotocSectionEvent { std::string title; };

struct ProclaimEvent {
  std::string heading;
  std::optional<std::string> key;
  std::vector<DocEvent> body;
  /// The control word after the heading was an already bound label.
  bool key_was_bound = false;

  /// Body rendered back to source text.
  std::string body_text() const;
};

struct EquationEvent {
  std::optional<std::string> key;
  std::string suffix;
};

struct CiteEvent {
  std::string key;
  std::optional<std::string> suffix;  ///< with its leading comma
};

struct IndexEvent {
  std::string term;
  bool visible = false;  ///< \index typesets the term, \inx does not
};

struct TextEvent { std::string run; };
struct LabelSecEvent { std::string name; };
/// A control word naming a label, expanded to the label's value.
struct LabelRefEvent { std::string name; };

struct OffsetEvent {
  std::string base;  ///< label name when base_is_label, else a number
  bool base_is_label = false;
  long long delta = 0;
};

struct ItemEvent { ItemStyle style = ItemStyle::Arabic; };
struct ListResetEvent {};
struct OpenTocEvent {};
struct BibliographyEvent {};

using EventData = std::variant<SectionEvent, SubsectionEvent, AppendixEvent, SupplementEvent,
                               NotocSectionEvent, ProclaimEvent, EquationEvent, CiteEvent, IndexEvent,
                               TextEvent, LabelSecEvent, LabelRefEvent, OffsetEvent, ItemEvent,
                               ListResetEvent, OpenTocEvent, BibliographyEvent>;

struct DocEvent {
  EventData data;
  SourcePos pos;

  template <typename T>
  const T* get() const { return std::get_if<T>(&data); }
};

struct ParseOptions {
  /// Labels bound before the document starts (e.g. from a previous part's
  /// checkpoint).  They count as bound for proclaim key detection and are
  /// recognized as label references.
  std::set<std::string, std::less<>> known_labels;
};

struct ParsedDocument {
  std::vector<DocEvent> events;
  std::vector<std::string> warnings;
  /// Every label name the document binds.
  std::set<std::string, std::less<>> declared;
};

ParsedDocument parse_events(const std::vector<Token>& tokens, const ParseOptions& options = {});

/// tokenize + parse_events.
ParsedDocument parse_document(std::string_view input, const ParseOptions& options = {});

/// Depth-first visit of events including proclaim bodies.
template <typename F>
void for_each_event(const std::vector<DocEvent>& events, F&& f) {
  for (const auto& ev : events) {
    f(ev);
    if (const auto* p = ev.get<ProclaimEvent>()) for_each_event(p->body, f);
  }
}

}  // namespace texmark
