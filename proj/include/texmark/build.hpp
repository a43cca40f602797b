#pragma once

// Multi-pass build: numbering, citation and label resolution, layout, page
// assignment and aux-file emission, iterated to a fixed point.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "texmark/auxfiles.hpp"
#include "texmark/bibliography.hpp"
#include "texmark/config.hpp"
#include "texmark/source.hpp"

namespace texmark {

struct BuildInputs {
  std::string document;
  std::optional<std::string> refs;      ///< reference file contents
  std::optional<std::string> seed_lab;  ///< checkpoint of a previous part
};

struct UnresolvedRef {
  std::string name;
  SourcePos pos;
};

/// Everything one pass produces.  File contents are held as lines.
struct PassResult {
  std::vector<std::string> text;  ///< plain text or HTML, per config
  std::vector<std::string> toc;   ///< empty when no table of contents is written
  bool toc_written = false;
  std::vector<std::string> lab;
  std::vector<std::string> inx;
  LabelTable labels;
  CitationMap citations;  ///< marks published by the reference list
  CounterState final_state;
  std::vector<UnresolvedRef> unresolved;
  std::vector<std::string> warnings;

  /// Same labels, citations and output streams.
  bool same_outputs(const PassResult& other) const;
};

struct BuildReport {
  int passes_run = 0;
  bool stable = false;
  std::vector<std::string> warnings;
  std::vector<std::string> emitted_files;
};

struct BuildResult {
  BuildReport report;
  PassResult output;  ///< the last pass
};

/// Placeholder printed for a reference not yet resolved.
std::string placeholder(std::string_view name);

/// One pass over a parsed document.  `previous` supplies labels and
/// citation marks defined later in the document.
PassResult run_pass(const BuildConfig& config, const ParsedDocument& doc, const RefDatabase* refs,
                    const LabReplay* seed, const PassResult* previous);

/// Passes until two consecutive passes agree or max_passes is reached.
/// A stable result with unresolved references throws UndefinedReference;
/// an unstable result is returned with report.stable == false.
BuildResult build(const BuildConfig& config, const BuildInputs& inputs);

struct JobPaths {
  std::filesystem::path document;
  std::optional<std::filesystem::path> refs;
  std::optional<std::filesystem::path> seed;
  std::filesystem::path output_dir;
};

/// Reads inputs, builds, and writes `<job>.lab`, `<job>.toc`, `<job>.inx`
/// and `<job>.txt` (or `.html`) into `output_dir`.  Outputs are written
/// even when the build does not converge.
BuildReport build_job(const BuildConfig& config, const JobPaths& paths);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace texmark
