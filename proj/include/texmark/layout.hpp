#pragma once

// Greedy line filling and the page assignment stub that supplies folios for
// table-of-contents and index lines.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace texmark {

/// Byte used inside text handed to wrap_text() for a space that must not
/// break; it is rendered as an ordinary space.
inline constexpr char kTie = '\x01';

struct WrappedText {
  std::vector<std::string> lines;
  /// Line index for each anchor offset passed to wrap_text().
  std::vector<std::size_t> anchor_lines;
};

/// Greedy fill at `width` columns (0 disables wrapping).  The first line
/// starts with `first_prefix`, later lines with `indent` spaces.  Anchors
/// are byte offsets into `text`; each maps to the line holding the first
/// word that ends after it.
WrappedText wrap_text(std::string_view text, std::string_view first_prefix, int indent, int width,
                      std::span<const std::size_t> anchors = {});

/// Number of code points in a UTF-8 string.
std::size_t display_width(std::string_view s);

/// Page of each of `line_count` lines, breaking every `lines_per_page`
/// lines and numbering from `first_page`.
std::vector<int> assign_pages(std::size_t line_count, int lines_per_page, int first_page = 1);

}  // namespace texmark
