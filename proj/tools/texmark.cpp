// Command-line driver: build, refs format, check, index sort.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "texmark/build.hpp"

namespace fs = std::filesystem;
using namespace texmark;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

void report_error(const std::string& file, const Error& e) {
  std::cerr << file;
  if (e.pos()) std::cerr << ':' << e.pos()->line << ':' << e.pos()->column;
  std::cerr << ": " << to_string(e.code()) << ": " << e.detail() << '\n';
}

/// "notes" -> notes.tex; "notes.tex" -> itself.
fs::path document_path(const std::string& job) {
  fs::path p(job);
  if (p.has_extension() && fs::exists(p)) return p;
  return fs::path(job + ".tex");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"texmark: numbering, cross-references, bibliography and aux files for plain-markup documents"};
  app.require_subcommand(1);

  // build
  auto* build_cmd = app.add_subcommand("build", "Build a job to a fixed point and write its aux files");
  std::string job;
  std::optional<std::string> subsections, mode, refs_path, seed_path, toc_flag;
  std::optional<int> max_passes, line_width, key_width, lines_per_page;
  bool no_index = false;
  bool html = false;
  build_cmd->add_option("job", job, "Job name or document path")->required();
  build_cmd->add_option("--subsections", subsections, "on|off");
  build_cmd->add_option("--refs", refs_path, "Reference file (default <job>.ref when present)");
  build_cmd->add_option("--mode", mode, "Reference style: plain|structured");
  build_cmd->add_option("--max-passes", max_passes, "Pass limit");
  build_cmd->add_option("--line-width", line_width, "Output columns (0 disables wrapping)");
  build_cmd->add_option("--key-width", key_width, "Reference key column width");
  build_cmd->add_option("--lines-per-page", lines_per_page, "Lines per page for folios");
  build_cmd->add_option("--toc", toc_flag, "Write <job>.toc: on|off")->expected(0, 1)->default_str("on");
  build_cmd->add_flag("--no-index", no_index, "Do not write <job>.inx");
  build_cmd->add_option("--seed", seed_path, "Checkpoint (.lab) of the previous part");
  build_cmd->add_flag("--html", html, "Write <job>.html instead of <job>.txt");

  // refs format
  auto* refs_cmd = app.add_subcommand("refs", "Reference file tools");
  refs_cmd->require_subcommand(1);
  auto* format_cmd = refs_cmd->add_subcommand("format", "Format a reference file to standard output");
  std::string refs_file;
  std::string refs_mode = "plain";
  int refs_key_width = 36;
  int refs_line_width = 72;
  format_cmd->add_option("file", refs_file, "Reference file")->required();
  format_cmd->add_option("--mode", refs_mode, "plain|structured");
  format_cmd->add_option("--key-width", refs_key_width, "Key column width");
  format_cmd->add_option("--line-width", refs_line_width, "Output columns (0 disables wrapping)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Parse and validate a document or reference file");
  std::string check_file;
  check_cmd->add_option("file", check_file, "Document (.tex) or reference file (.ref)")->required();

  // index sort
  auto* index_cmd = app.add_subcommand("index", "Index tools");
  index_cmd->require_subcommand(1);
  auto* sort_cmd = index_cmd->add_subcommand("sort", "Merge <job>.inx by term to standard output");
  std::string index_job;
  sort_cmd->add_option("job", index_job, "Job name or .inx path")->required();

  CLI11_PARSE(app, argc, argv);

  std::string current_file;
  try {
    if (*build_cmd) {
      fs::path doc = document_path(job);
      current_file = doc.string();
      BuildConfig config;
      config.job_name = doc.stem().string();
      fs::path dir = doc.parent_path();
      fs::path cfg = dir / (config.job_name + ".cfg");
      if (fs::exists(cfg)) {
        current_file = cfg.string();
        apply_config(config, read_file(cfg));
        current_file = doc.string();
      }
      if (subsections) config.subsections = parse_flag(*subsections);
      if (mode) config.refs_mode = parse_refs_mode(*mode);
      if (max_passes) config.max_passes = *max_passes;
      if (line_width) config.line_width = *line_width;
      if (key_width) config.key_column_width = *key_width;
      if (lines_per_page) config.lines_per_page = *lines_per_page;
      if (toc_flag) config.toc_enabled = parse_flag(*toc_flag);
      if (no_index) config.index_enabled = false;
      if (html) config.html = true;
      config.validate();

      JobPaths paths;
      paths.document = doc;
      paths.output_dir = dir.empty() ? fs::path(".") : dir;
      if (refs_path) {
        paths.refs = *refs_path;
      } else if (fs::path def = dir / (config.job_name + ".ref"); fs::exists(def)) {
        paths.refs = def;
      }
      if (seed_path) paths.seed = *seed_path;

      BuildReport report = build_job(config, paths);
      for (const auto& w : report.warnings) std::cerr << doc.string() << ": warning: " << w << '\n';
      for (const auto& f : report.emitted_files) std::cout << "wrote " << f << '\n';
      std::cout << "passes: " << report.passes_run << (report.stable ? " (stable)" : " (not converged)") << '\n';
      if (!report.stable) {
        std::cerr << doc.string() << ": NotConverged: no fixed point within " << config.max_passes << " passes\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (*format_cmd) {
      current_file = refs_file;
      RefsMode m = parse_refs_mode(refs_mode);
      RefDatabase db = ingest_refs(read_file(refs_file));
      bool first = true;
      for (const auto& r : db.records) {
        std::vector<std::string> lines;
        try {
          lines = m == RefsMode::Plain ? render_entry(r.mark, format_reference(r), refs_key_width, refs_line_width)
                                       : serialize_structured(emit_structured(r));
        } catch (const Error& e) {
          throw e.at(r.pos);
        }
        if (!first && m == RefsMode::Structured) std::cout << '\n';
        first = false;
        for (const auto& l : lines) std::cout << l << '\n';
      }
      return kExitOk;
    }

    if (*check_cmd) {
      current_file = check_file;
      std::string text = read_file(check_file);
      if (fs::path(check_file).extension() == ".ref") {
        RefDatabase db = ingest_refs(text);
        for (const auto& r : db.records) {
          try {
            format_reference(r);
          } catch (const Error& e) {
            throw e.at(r.pos);
          }
        }
        std::cout << check_file << ": " << db.records.size() << " references ok\n";
        return kExitOk;
      }
      BuildConfig config;
      config.job_name = fs::path(check_file).stem().string();
      BuildInputs inputs;
      inputs.document = text;
      fs::path ref = fs::path(check_file).replace_extension(".ref");
      if (fs::exists(ref)) inputs.refs = read_file(ref);
      BuildResult result = build(config, inputs);
      for (const auto& w : result.report.warnings) std::cerr << check_file << ": warning: " << w << '\n';
      std::cout << check_file << ": ok\n";
      return result.report.stable ? kExitOk : kExitNotConverged;
    }

    if (*sort_cmd) {
      fs::path p(index_job);
      if (p.extension() != ".inx") p = fs::path(index_job + ".inx");
      current_file = p.string();
      auto lines = split_lines(read_file(p));
      for (const auto& l : sort_index(lines)) std::cout << l << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    report_error(current_file, e);
    return kExitInvalid;
  }
  return kExitOk;
}
