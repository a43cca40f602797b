#include "texmark/styled_text.hpp"

namespace texmark {

void StyledText::append(std::string_view text, Style style) {
  if (text.empty()) return;
  if (!runs_.empty() && runs_.back().style == style && style != Style::Tie) {
    runs_.back().text += text;
  } else {
    runs_.push_back({style, std::string(text)});
  }
}

void StyledText::append(const StyledText& other) {
  for (const auto& run : other.runs_) {
    if (run.style == Style::Tie) {
      tie();
    } else {
      append(run.text, run.style);
    }
  }
}

void StyledText::tie() { runs_.push_back({Style::Tie, " "}); }

void StyledText::unskip() {
  if (runs_.empty()) return;
  Run& last = runs_.back();
  if (last.style == Style::Tie) {
    runs_.pop_back();
    return;
  }
  if (!last.text.empty() && last.text.back() == ' ') {
    last.text.pop_back();
    if (last.text.empty()) runs_.pop_back();
  }
}

std::string StyledText::plain(char tie_char) const {
  std::string out;
  for (const auto& run : runs_) {
    if (run.style == Style::Tie) {
      out += tie_char;
    } else {
      out += run.text;
    }
  }
  return out;
}

std::string StyledText::annotated() const {
  std::string out;
  bool open = false;
  for (const auto& run : runs_) {
    bool emph = run.style == Style::Emph || run.style == Style::EmphStrong;
    if (emph && !open) out += "⟨";
    if (!emph && open) out += "⟩";
    open = emph;
    out += run.style == Style::Tie ? std::string(" ") : run.text;
  }
  if (open) out += "⟩";
  return out;
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string StyledText::html() const {
  std::string out;
  for (const auto& run : runs_) {
    switch (run.style) {
      case Style::Plain: out += html_escape(run.text); break;
      case Style::Emph: out += "<em>" + html_escape(run.text) + "</em>"; break;
      case Style::EmphStrong: out += "<em><b>" + html_escape(run.text) + "</b></em>"; break;
      case Style::Tie: out += "&nbsp;"; break;
    }
  }
  return out;
}

}  // namespace texmark
