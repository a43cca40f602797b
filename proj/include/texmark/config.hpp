#pragma once

// Build configuration and the `<job>.cfg` key=value loader.

#include <string>
#include <string_view>

namespace texmark {

enum class RefsMode { Plain, Structured };

struct BuildConfig {
  std::string job_name;
  bool subsections = true;
  RefsMode refs_mode = RefsMode::Plain;
  int key_column_width = 36;
  int line_width = 72;
  int lines_per_page = 50;
  int max_passes = 4;
  /// Write `<job>.toc` even when the document has no \opentoc.
  bool toc_enabled = false;
  bool index_enabled = true;
  bool html = false;

  /// Throws Config when a numeric field is out of range.
  void validate() const;
};

/// Applies `key = value` lines on top of `config`.  Blank lines and lines
/// starting with '#' are skipped.  Throws Config naming the line.
void apply_config(BuildConfig& config, std::string_view text);

/// Parses "on"/"off", "true"/"false", "yes"/"no", "1"/"0".
bool parse_flag(std::string_view value);
RefsMode parse_refs_mode(std::string_view value);

}  // namespace texmark
