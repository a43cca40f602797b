#pragma once

// Counter state machine for sections, subsections, appendices, theorem-like
// statements, equations and list items.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace texmark {

/// Numbering registers.  secno is positive for sections, the negated ordinal
/// inside appendices, 0 between parts and 1000 after a supplement that
/// follows appendices.  subsecno == -1 means "no subsection component".
struct CounterState {
  int secno = 0;
  int subsecno = 0;
  int proclno = 0;
  int eqnumber = 0;
  int itemno = 0;
  int pageno = 1;

  /// Fresh registers; `subsections == false` starts subsecno at the -1 sentinel.
  static CounterState initial(bool subsections);

  bool operator==(const CounterState&) const = default;
};

enum class LabelKind { Section, Subsection, Appendix, Supplement, Proclaim, Equation, None };

struct StructLabel {
  std::string text;
  LabelKind kind = LabelKind::None;

  bool operator==(const StructLabel&) const = default;
};

/// Running-head record captured when a sectional unit begins.
struct MarkRecord {
  int secno = 0;
  int subsecno = 0;
  int proclno = 0;
  std::string headline_text;

  bool operator==(const MarkRecord&) const = default;
};

/// Symbolic label bindings in the order they were made.  Rebinding a name
/// keeps its original position in `names()` but appends to `history()`.
class LabelTable {
 public:
  void bind(const std::string& name, const std::string& value);
  bool contains(std::string_view name) const;
  std::optional<std::string> lookup(std::string_view name) const;

  const std::map<std::string, std::string, std::less<>>& bindings() const { return values_; }
  /// Every bind() call as (name, value), in call order.
  const std::vector<std::pair<std::string, std::string>>& history() const { return history_; }
  std::size_t size() const { return values_.size(); }

  bool operator==(const LabelTable& other) const { return values_ == other.values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
  std::vector<std::pair<std::string, std::string>> history_;
};

struct SectionStep {
  CounterState state;
  StructLabel label;
  MarkRecord mark;
};

struct AppendixStep {
  CounterState state;
  StructLabel label;
  MarkRecord mark;
  /// The table-of-contents divider, present for the first appendix after
  /// numbered sections.
  std::optional<std::string> toc_divider;
};

struct ProclaimStep {
  CounterState state;
  StructLabel label;
  /// Set when a key was supplied and bound to the label.
  std::optional<std::string> bound_key;
  /// Set when a key was supplied but already bound; it stays body text.
  bool key_already_bound = false;
};

struct EquationStep {
  CounterState state;
  std::string tag;  ///< "(14a)"
  std::optional<std::string> bound_key;
};

/// Parsed contents of an equation label argument such as "\EqMain a".
struct EquationLabel {
  std::optional<std::string> key;
  std::string suffix;
};

enum class ItemStyle { Arabic, Roman, Alpha };

SectionStep begin_section(const CounterState& state, std::string_view title);
SectionStep begin_subsection(const CounterState& state, std::string_view title);
AppendixStep begin_appendix(const CounterState& state, std::string_view title);
SectionStep begin_supplement(const CounterState& state, std::string_view title);
SectionStep begin_notoc_section(const CounterState& state, std::string_view title);

ProclaimStep next_proclaim(const CounterState& state, std::string_view heading,
                           const std::optional<std::string>& key, LabelTable& labels);

/// Parses the text between the parentheses of an equation tag command.
/// Accepts "", "\Key" and "\Key suffix"; anything starting with other text
/// is an IncorrectLabel.
EquationLabel parse_equation_label(std::string_view raw);

EquationStep next_equation(const CounterState& state, const EquationLabel& label,
                           LabelTable& labels);

std::string add_offset(std::string_view base, long long delta);

std::string item_number(ItemStyle style, int n);

/// Explicit list reset.
CounterState reset_items(const CounterState& state);

/// Lowercase roman numeral, empty for n <= 0.
std::string roman_numeral(int n);

/// The printed page number: arabic, or lowercase roman for negative pageno.
std::string folio(int pageno);

/// Page advance as performed after a checkpoint: negative (roman) page
/// numbers count downwards.
int advance_page(int pageno);

}  // namespace texmark
