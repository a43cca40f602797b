#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace texmark {

/// Text with emphasis spans and nonbreaking ties kept as distinct tokens.
class StyledText {
 public:
  enum class Style { Plain, Emph, EmphStrong, Tie };

  struct Run {
    Style style = Style::Plain;
    std::string text;
    bool operator==(const Run&) const = default;
  };

  void append(std::string_view text, Style style = Style::Plain);
  void append(const StyledText& other);
  void tie();

  /// Removes one trailing space or tie, like \unskip.
  void unskip();

  bool empty() const { return runs_.empty(); }
  const std::vector<Run>& runs() const { return runs_; }

  /// Emphasis flattened to its text, ties rendered as `tie_char`.
  std::string plain(char tie_char = ' ') const;
  /// Emphasis bracketed as ⟨...⟩ (adjacent emphasized runs merge).
  std::string annotated() const;
  /// HTML fragment: <em>, <b> and &nbsp; for ties; text is escaped.
  std::string html() const;

  bool operator==(const StyledText&) const = default;

 private:
  std::vector<Run> runs_;
};

std::string html_escape(std::string_view text);

}  // namespace texmark
