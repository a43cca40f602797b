#include "texmark/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "texmark/auxfiles.hpp"
#include "texmark/error.hpp"

namespace texmark {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::Config, std::string(key) + ": '" + std::string(value) + "' is not an integer");
  }
  return out;
}

}  // namespace

void BuildConfig::validate() const {
  if (max_passes < 1) throw Error(ErrorCode::Config, "max_passes must be at least 1");
  if (key_column_width < 1) throw Error(ErrorCode::Config, "key_column_width must be at least 1");
  if (lines_per_page < 1) throw Error(ErrorCode::Config, "lines_per_page must be at least 1");
  if (line_width < 0) throw Error(ErrorCode::Config, "line_width must not be negative");
}

bool parse_flag(std::string_view value) {
  std::string v = lower(trim(value));
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw Error(ErrorCode::Config, "'" + std::string(value) + "' is not on/off");
}

RefsMode parse_refs_mode(std::string_view value) {
  std::string v = lower(trim(value));
  if (v == "plain") return RefsMode::Plain;
  if (v == "structured" || v == "amsrefs") return RefsMode::Structured;
  throw Error(ErrorCode::Config, "refs mode '" + std::string(value) + "' is not plain or structured");
}

void apply_config(BuildConfig& config, std::string_view text) {
  auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string_view line = trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    SourcePos pos{static_cast<int>(n + 1), 1};
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::Config, "expected key = value", pos);
    std::string key = lower(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    try {
      if (key == "job_name") {
        config.job_name = value;
      } else if (key == "subsections") {
        config.subsections = parse_flag(value);
      } else if (key == "refs_mode" || key == "mode") {
        config.refs_mode = parse_refs_mode(value);
      } else if (key == "key_column_width") {
        config.key_column_width = parse_int(key, value);
      } else if (key == "line_width") {
        config.line_width = parse_int(key, value);
      } else if (key == "lines_per_page") {
        config.lines_per_page = parse_int(key, value);
      } else if (key == "max_passes") {
        config.max_passes = parse_int(key, value);
      } else if (key == "toc" || key == "toc_enabled") {
        config.toc_enabled = parse_flag(value);
      } else if (key == "index" || key == "index_enabled") {
        config.index_enabled = parse_flag(value);
      } else if (key == "html") {
        config.html = parse_flag(value);
      } else {
        throw Error(ErrorCode::Config, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw e.at(pos);
    }
  }
  config.validate();
}

}  // namespace texmark
