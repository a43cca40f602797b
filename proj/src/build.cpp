#include "texmark/build.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <variant>

#include "texmark/layout.hpp"

namespace texmark {

namespace {

struct Block {
  enum class Kind { Paragraph, Heading, Entry };
  Kind kind = Kind::Paragraph;
  std::string text;  ///< kTie marks nonbreaking spaces
  std::string prefix;
  int indent = 0;
  std::vector<std::size_t> anchors;
  std::vector<std::string> lines;  ///< set for prewrapped blocks
  std::string html;                ///< set for prewrapped blocks
};

struct AnchorRef {
  std::size_t block = 0;
  std::size_t anchor = 0;
};

struct TocItem {
  std::optional<std::string> raw;  ///< divider line
  std::string label;
  std::string title;
  AnchorRef where;
};

struct IndexItem {
  std::string term;
  AnchorRef where;
};

bool is_blank_char(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Pass {
 public:
  Pass(const BuildConfig& config, const RefDatabase* refs, const LabReplay* seed, const PassResult* previous,
       bool has_bibliography)
      : config_(config), refs_(refs), previous_(previous) {
    state_ = seed ? seed->state : CounterState::initial(config.subsections);
    first_page_ = state_.pageno;
    if (seed) labels_ = seed->labels;
    seed_history_ = labels_.history().size();
    toc_open_ = config.toc_enabled;
    if (refs && !has_bibliography) published_ = refs->marks;
  }

  PassResult run(const ParsedDocument& doc) {
    result_.warnings = doc.warnings;
    events(doc.events);
    flush();
    return finish();
  }

 private:
  // Text accumulation ------------------------------------------------------

  void add_text(std::string_view run) {
    for (std::size_t i = 0; i < run.size(); ++i) {
      char c = run[i];
      if (c == '\\' && i + 1 < run.size()) {
        para_ += c;
        para_ += run[++i];
        continue;
      }
      if (c == '$') {
        bool twin = i + 1 < run.size() && run[i + 1] == '$';
        para_ += c;
        if (!in_math_) {
          display_ = twin;
        } else if (!display_) {
          twin = false;
        }
        if (twin) para_ += run[++i];
        in_math_ = !in_math_;
        continue;
      }
      if ((c == '{' || c == '}') && !in_math_) continue;
      if (c == '~') {
        para_ += kTie;
        continue;
      }
      if (c == '\n' && !in_math_) {
        std::size_t j = i + 1;
        while (j < run.size() && is_blank_char(run[j])) ++j;
        if (j < run.size() && run[j] == '\n') {
          flush();
          while (j < run.size() && std::isspace(static_cast<unsigned char>(run[j]))) ++j;
          i = j - 1;
          continue;
        }
        para_ += ' ';
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        para_ += in_math_ ? kTie : ' ';
        continue;
      }
      para_ += c;
    }
  }

  /// Anchor at the next word of the current paragraph.
  AnchorRef anchor_here() {
    AnchorRef ref{blocks_.size(), para_anchors_.size()};
    para_anchors_.push_back(para_.size());
    return ref;
  }

  bool para_has_words() const {
    return std::any_of(para_.begin(), para_.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
  }

  void flush() {
    in_math_ = false;
    display_ = false;
    if (!para_has_words()) {
      // Anchors of an empty paragraph move to the next block.
      for (auto& a : para_anchors_) a = 0;
      para_.clear();
      para_prefix_.clear();
      para_indent_ = 0;
      return;
    }
    Block b;
    b.kind = para_kind_;
    b.text = std::move(para_);
    b.prefix = std::move(para_prefix_);
    b.indent = para_indent_;
    b.anchors = std::move(para_anchors_);
    push_block(std::move(b));
    para_.clear();
    para_prefix_.clear();
    para_anchors_.clear();
    para_indent_ = 0;
    para_kind_ = Block::Kind::Paragraph;
  }

  void push_block(Block b) {
    blocks_.push_back(std::move(b));
  }

  void heading(std::string text, std::optional<TocItem> toc) {
    flush();
    para_kind_ = Block::Kind::Heading;
    if (toc) {
      toc->where = anchor_here();
      toc_.push_back(std::move(*toc));
    }
    add_text(text);
    flush();
  }

  // Reference resolution ---------------------------------------------------

  std::optional<std::string> label_value(const std::string& name) const {
    if (auto v = labels_.lookup(name)) return v;
    if (previous_) return previous_->labels.lookup(name);
    return std::nullopt;
  }

  std::string unresolved(const std::string& name, SourcePos pos) {
    result_.unresolved.push_back({name, pos});
    return placeholder(name);
  }

  std::string cite(const CiteEvent& e, SourcePos pos) {
    Citation c{e.key, e.suffix};
    if (!refs_ || !refs_->marks.count(e.key)) {
      throw Error(ErrorCode::UndefinedReference, "Reference to undefined label " + e.key, pos);
    }
    if (published_.count(e.key)) return resolve_citation(published_, c);
    if (previous_ && previous_->citations.count(e.key)) return resolve_citation(previous_->citations, c);
    return unresolved(e.key, pos);
  }

  // Events -----------------------------------------------------------------

  void events(const std::vector<DocEvent>& evs) {
    for (const auto& ev : evs) event(ev);
  }

  void toc_entry_heading(const StructLabel& label, const std::string& title, const std::string& text) {
    std::optional<TocItem> toc;
    if (toc_open_) toc = TocItem{std::nullopt, label.text, title, {}};
    heading(text, std::move(toc));
  }

  void event(const DocEvent& ev) {
    SourcePos pos = ev.pos;
    try {
      if (const auto* e = ev.get<SectionEvent>()) {
        auto step = begin_section(state_, e->title);
        state_ = step.state;
        last_label_ = step.label.text;
        toc_entry_heading(step.label, e->title, "\xC2\xA7" + step.label.text + ". " + e->title + ".");
      } else if (const auto* e = ev.get<SubsectionEvent>()) {
        auto step = begin_subsection(state_, e->title);
        state_ = step.state;
        last_label_ = step.label.text;
        toc_entry_heading(step.label, e->title, step.label.text + ". " + e->title + ".");
      } else if (const auto* e = ev.get<AppendixEvent>()) {
        auto step = begin_appendix(state_, e->title);
        state_ = step.state;
        last_label_ = step.label.text;
        if (step.toc_divider && toc_open_) toc_.push_back({step.toc_divider, "", "", {}});
        toc_entry_heading(step.label, e->title, "Appendix " + step.label.text + ". " + e->title + ".");
      } else if (const auto* e = ev.get<SupplementEvent>()) {
        auto step = begin_supplement(state_, e->title);
        state_ = step.state;
        last_label_.clear();
        toc_entry_heading(step.label, e->title, e->title + ".");
      } else if (const auto* e = ev.get<NotocSectionEvent>()) {
        auto step = begin_notoc_section(state_, e->title);
        state_ = step.state;
        last_label_.clear();
        heading(e->title + ".", std::nullopt);
      } else if (const auto* e = ev.get<ProclaimEvent>()) {
        flush();
        auto step = next_proclaim(state_, e->heading, e->key, labels_);
        state_ = step.state;
        last_label_ = step.label.text;
        if (step.key_already_bound) {
          result_.warnings.push_back(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": \\" +
                                     *e->key + " is already bound; kept as body text");
          add_text("\\" + *e->key + " ");
        }
        add_text(step.label.text + ". " + e->heading + ". ");
        events(e->body);
        flush();
      } else if (const auto* e = ev.get<EquationEvent>()) {
        auto step = next_equation(state_, {e->key, e->suffix}, labels_);
        state_ = step.state;
        add_text(step.tag);
      } else if (const auto* e = ev.get<CiteEvent>()) {
        add_text(cite(*e, pos));
      } else if (const auto* e = ev.get<IndexEvent>()) {
        if (e->term.empty()) {
          result_.warnings.push_back(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                                     ": empty index term");
        }
        index_.push_back({e->term, anchor_here()});
        if (e->visible) add_text(e->term);
      } else if (const auto* e = ev.get<TextEvent>()) {
        add_text(e->run);
      } else if (const auto* e = ev.get<LabelSecEvent>()) {
        labels_.bind(e->name, last_label_);
      } else if (const auto* e = ev.get<LabelRefEvent>()) {
        auto v = label_value(e->name);
        add_text(v ? *v : unresolved(e->name, pos));
      } else if (const auto* e = ev.get<OffsetEvent>()) {
        if (e->base_is_label) {
          auto v = label_value(e->base);
          add_text(v ? add_offset(*v, e->delta) : unresolved(e->base, pos));
        } else {
          add_text(add_offset(e->base, e->delta));
        }
      } else if (const auto* e = ev.get<ItemEvent>()) {
        flush();
        state_.itemno += 1;
        para_prefix_ = item_number(e->style, state_.itemno) + " ";
        para_indent_ = static_cast<int>(para_prefix_.size());
      } else if (ev.get<ListResetEvent>()) {
        state_ = reset_items(state_);
      } else if (ev.get<OpenTocEvent>()) {
        toc_open_ = true;
      } else if (ev.get<BibliographyEvent>()) {
        bibliography(pos);
      }
    } catch (const Error& err) {
      throw err.at(pos);
    }
  }

  void bibliography(SourcePos pos) {
    flush();
    if (!refs_) {
      result_.warnings.push_back(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                                 ": \\beginrefs without a reference file");
      return;
    }
    published_ = refs_->marks;
    for (const auto& r : refs_->records) {
      Block b;
      b.kind = Block::Kind::Entry;
      try {
        if (config_.refs_mode == RefsMode::Plain) {
          StyledText body = format_reference(r);
          b.lines = render_entry(r.mark, body, config_.key_column_width, config_.line_width);
          b.html = "<p class=\"ref\">" + html_escape("[" + r.mark + "]") + " " + body.html() + "</p>";
        } else {
          b.lines = serialize_structured(emit_structured(r));
          std::string joined;
          for (const auto& l : b.lines) joined += html_escape(l) + "\n";
          b.html = "<pre class=\"ref\">\n" + joined + "</pre>";
        }
      } catch (const Error& err) {
        throw err.at(r.pos);
      }
      push_block(std::move(b));
    }
  }

  // Layout and aux streams -------------------------------------------------

  PassResult finish() {
    std::vector<std::string> lines;
    std::vector<std::size_t> block_start;
    std::vector<std::vector<std::size_t>> anchor_lines;
    for (const auto& b : blocks_) {
      if (!lines.empty()) lines.emplace_back();
      block_start.push_back(lines.size());
      if (b.kind == Block::Kind::Entry) {
        lines.insert(lines.end(), b.lines.begin(), b.lines.end());
        anchor_lines.emplace_back();
        continue;
      }
      WrappedText w = wrap_text(b.text, b.prefix, b.indent, config_.line_width, b.anchors);
      lines.insert(lines.end(), w.lines.begin(), w.lines.end());
      anchor_lines.push_back(std::move(w.anchor_lines));
    }

    std::vector<int> pages = assign_pages(lines.size(), config_.lines_per_page, first_page_);
    auto page_of = [&](AnchorRef a) {
      if (pages.empty()) return first_page_;
      if (a.block >= blocks_.size()) return pages.back();
      const auto& al = anchor_lines[a.block];
      std::size_t line = block_start[a.block] + (a.anchor < al.size() ? al[a.anchor] : 0);
      return pages[std::min(line, pages.size() - 1)];
    };

    PassResult& r = result_;
    r.toc_written = toc_open_;
    if (toc_open_) {
      r.toc.push_back(emit_toc_header());
      for (const auto& t : toc_) {
        if (t.raw) {
          r.toc.push_back(*t.raw);
        } else {
          r.toc.push_back(emit_toc_line({t.label, protect_math(t.title), folio(page_of(t.where))}));
        }
      }
    }
    if (config_.index_enabled) {
      for (const auto& ix : index_) r.inx.push_back(emit_index_line({protect_math(ix.term), folio(page_of(ix.where))}));
    }

    state_.pageno = pages.empty() ? first_page_ : pages.back();
    LabelTable own;
    const auto& history = labels_.history();
    for (std::size_t i = seed_history_; i < history.size(); ++i) own.bind(history[i].first, history[i].second);
    for (const auto& l : emit_label_defines(own)) r.lab.push_back(serialize(l));
    for (const auto& l : emit_checkpoint(state_)) r.lab.push_back(serialize(l));

    r.text = config_.html ? html(lines) : plain(lines);
    r.labels = labels_;
    r.citations = published_;
    r.final_state = state_;
    return std::move(r);
  }

  static std::vector<std::string> plain(std::vector<std::string> lines) { return lines; }

  std::vector<std::string> html(const std::vector<std::string>&) const {
    std::vector<std::string> out = {"<!DOCTYPE html>", "<html>", "<head>", "<meta charset=\"utf-8\">",
                                    "<title>" + html_escape(config_.job_name) + "</title>", "</head>", "<body>"};
    for (const auto& b : blocks_) {
      if (b.kind == Block::Kind::Entry) {
        out.push_back(b.html);
        continue;
      }
      std::string body = html_escape(b.prefix);
      bool space = false;
      for (char c : b.text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
          space = true;
          continue;
        }
        if (space && !body.empty()) body += ' ';
        space = false;
        if (c == kTie) {
          body += "&nbsp;";
        } else {
          body += html_escape(std::string_view(&c, 1));
        }
      }
      out.push_back(b.kind == Block::Kind::Heading ? "<h2>" + body + "</h2>" : "<p>" + body + "</p>");
    }
    out.push_back("</body>");
    out.push_back("</html>");
    return out;
  }

  const BuildConfig& config_;
  const RefDatabase* refs_;
  const PassResult* previous_;
  CounterState state_;
  int first_page_ = 1;
  LabelTable labels_;
  std::size_t seed_history_ = 0;
  CitationMap published_;
  bool toc_open_ = false;
  std::string last_label_;

  std::vector<Block> blocks_;
  std::string para_;
  std::string para_prefix_;
  int para_indent_ = 0;
  std::vector<std::size_t> para_anchors_;
  Block::Kind para_kind_ = Block::Kind::Paragraph;
  bool in_math_ = false;
  bool display_ = false;

  std::vector<TocItem> toc_;
  std::vector<IndexItem> index_;
  PassResult result_;
};

bool has_bibliography(const ParsedDocument& doc) {
  bool found = false;
  for_each_event(doc.events, [&](const DocEvent& ev) { found = found || ev.get<BibliographyEvent>(); });
  return found;
}

}  // namespace

std::string placeholder(std::string_view name) { return "[??" + std::string(name) + "]"; }

bool PassResult::same_outputs(const PassResult& other) const {
  return text == other.text && toc == other.toc && lab == other.lab && inx == other.inx &&
         labels.bindings() == other.labels.bindings() && citations == other.citations;
}

PassResult run_pass(const BuildConfig& config, const ParsedDocument& doc, const RefDatabase* refs,
                    const LabReplay* seed, const PassResult* previous) {
  return Pass(config, refs, seed, previous, has_bibliography(doc)).run(doc);
}

BuildResult build(const BuildConfig& config, const BuildInputs& inputs) {
  config.validate();
  std::optional<LabReplay> seed;
  if (inputs.seed_lab) {
    auto lines = split_lines(*inputs.seed_lab);
    seed = parse_lab(lines, CounterState::initial(config.subsections));
  }
  std::optional<RefDatabase> refs;
  if (inputs.refs) refs = ingest_refs(*inputs.refs);

  ParseOptions options;
  if (seed) {
    for (const auto& [name, value] : seed->labels.bindings()) options.known_labels.insert(name);
  }
  ParsedDocument doc = parse_document(inputs.document, options);

  BuildResult out;
  if (seed) out.report.warnings = seed->warnings;
  std::optional<PassResult> previous;
  for (int pass = 1; pass <= config.max_passes; ++pass) {
    PassResult current = run_pass(config, doc, refs ? &*refs : nullptr, seed ? &*seed : nullptr,
                                  previous ? &*previous : nullptr);
    out.report.passes_run = pass;
    bool stable = previous && current.same_outputs(*previous);
    previous = std::move(current);
    if (stable) {
      out.report.stable = true;
      break;
    }
  }
  out.output = std::move(*previous);
  out.report.warnings.insert(out.report.warnings.end(), out.output.warnings.begin(), out.output.warnings.end());

  if (out.report.stable && !out.output.unresolved.empty()) {
    const auto& u = out.output.unresolved.front();
    throw Error(ErrorCode::UndefinedReference, "Reference to undefined label " + u.name, u.pos);
  }
  if (!out.report.stable) {
    out.report.warnings.push_back("NotConverged: outputs still changing after " +
                                  std::to_string(config.max_passes) + " passes");
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << contents;
  if (!out) throw Error(ErrorCode::Io, "error writing " + path.string());
}

BuildReport build_job(const BuildConfig& config, const JobPaths& paths) {
  BuildInputs inputs;
  inputs.document = read_file(paths.document);
  if (paths.refs) inputs.refs = read_file(*paths.refs);
  if (paths.seed) inputs.seed_lab = read_file(*paths.seed);

  BuildResult result = build(config, inputs);
  const auto& o = result.output;
  auto emit = [&](const std::string& ext, const std::vector<std::string>& lines) {
    std::filesystem::path p = paths.output_dir / (config.job_name + ext);
    write_file(p, join_lines(lines));
    result.report.emitted_files.push_back(p.string());
  };
  if (o.toc_written) emit(".toc", o.toc);
  emit(".lab", o.lab);
  if (config.index_enabled) emit(".inx", o.inx);
  emit(config.html ? ".html" : ".txt", o.text);
  return result.report;
}

}  // namespace texmark
