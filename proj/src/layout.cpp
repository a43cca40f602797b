#include "texmark/layout.hpp"

#include <algorithm>

#include "texmark/error.hpp"

namespace texmark {

namespace {

bool is_break(char c) { return c == ' ' || c == '\n' || c == '\t' || c == '\r'; }

struct Word {
  std::size_t start;
  std::size_t end;
};

}  // namespace

std::size_t display_width(std::string_view s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

WrappedText wrap_text(std::string_view text, std::string_view first_prefix, int indent, int width,
                      std::span<const std::size_t> anchors) {
  std::vector<Word> words;
  for (std::size_t i = 0; i < text.size();) {
    if (is_break(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !is_break(text[j])) ++j;
    words.push_back({i, j});
    i = j;
  }

  WrappedText out;
  std::vector<std::size_t> word_line(words.size(), 0);
  std::string line(first_prefix);
  bool line_has_word = false;
  const std::string indent_str(static_cast<std::size_t>(std::max(indent, 0)), ' ');

  for (std::size_t w = 0; w < words.size(); ++w) {
    std::string word(text.substr(words[w].start, words[w].end - words[w].start));
    std::replace(word.begin(), word.end(), kTie, ' ');
    if (line_has_word) {
      std::size_t needed = display_width(line) + 1 + display_width(word);
      if (width > 0 && needed > static_cast<std::size_t>(width)) {
        out.lines.push_back(line);
        line = indent_str + word;
      } else {
        line += ' ';
        line += word;
      }
    } else {
      line += word;
    }
    line_has_word = true;
    word_line[w] = out.lines.size();
  }
  while (!line.empty() && line.back() == ' ') line.pop_back();
  if (!line.empty() || out.lines.empty()) out.lines.push_back(line);

  for (std::size_t offset : anchors) {
    auto it = std::find_if(words.begin(), words.end(), [&](const Word& w) { return w.end > offset; });
    if (it == words.end()) {
      out.anchor_lines.push_back(out.lines.size() - 1);
    } else {
      out.anchor_lines.push_back(word_line[static_cast<std::size_t>(it - words.begin())]);
    }
  }
  return out;
}

std::vector<int> assign_pages(std::size_t line_count, int lines_per_page, int first_page) {
  if (lines_per_page < 1) throw Error(ErrorCode::Config, "lines_per_page must be at least 1");
  std::vector<int> pages(line_count);
  int page = first_page;
  for (std::size_t i = 0; i < line_count; ++i) {
    if (i > 0 && i % static_cast<std::size_t>(lines_per_page) == 0) page = page < 0 ? page - 1 : page + 1;
    pages[i] = page;
  }
  return pages;
}

}  // namespace texmark
