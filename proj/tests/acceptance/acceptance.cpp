// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "ref_oracle.hpp"
#include "texmark/build.hpp"
#include "texmark/numbering.hpp"

using namespace texmark;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = TEXMARK_FIXTURES;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string pos_str(const std::optional<SourcePos>& p) {
  return p ? str(p->line) + ":" + str(p->column) : "none";
}

// 1. Golden reference corpus ----------------------------------------------

Outcome golden_suite() {
  Outcome o;
  auto db = ingest_refs(read_file(kFixtures / "corpus.ref"));
  std::map<std::string, std::string> golden;
  std::ifstream in(kFixtures / "golden_plain.txt");
  for (std::string line; std::getline(in, line);) {
    auto tab = line.find('\t');
    golden[line.substr(0, tab)] = line.substr(tab + 1);
  }
  std::map<RefKind, int> per_kind;
  for (const auto& r : db.records) ++per_kind[classify(r)];
  o.expect(db.records.size() >= 20, "corpus has fewer than 20 records");
  for (RefKind k : {RefKind::Proceedings, RefKind::Article, RefKind::Book, RefKind::Report}) {
    o.expect(per_kind[k] >= 4, "fewer than 4 records of kind " + std::string(to_string(k)));
  }
  o.expect(golden.size() == db.records.size(), "golden file and corpus differ in size");
  int matched = 0;
  for (const auto& r : db.records) {
    auto it = golden.find(r.key);
    if (it == golden.end()) {
      o.fail("no golden line for " + r.key);
      continue;
    }
    std::string macro = oracle::typeset_reference(r);
    std::string impl = oracle::annotate(format_reference(r));
    o.expect(macro == it->second, r.key + ": macro oracle drifted: " + macro);
    o.expect(impl == it->second, r.key + ": got " + impl);
    if (impl == it->second) ++matched;
  }
  if (o.pass) o.detail = str(matched) + " records byte-exact";
  return o;
}

// 2. Page ranges ------------------------------------------------------------

Outcome page_ranges() {
  Outcome o;
  const std::pair<const char*, const char*> table[] = {
      {"7", "7"}, {"12-34", "12--34"}, {"12--34", "12--34"}, {"100-121", "100--121"}};
  for (auto [in, out] : table) o.expect(normalize_pages(in) == out, std::string("table entry ") + in);

  std::mt19937 rng(20240601);
  const std::string alphabet = "0123456789ivxlcdmAB";
  auto side = [&] {
    std::string s;
    int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
  };
  int valid = 0, rejected = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string raw = side();
    int hyphens = static_cast<int>(rng() % 5);  // 3 and 4 are malformed
    if (hyphens > 0) raw += std::string(static_cast<std::size_t>(hyphens), '-') + side();
    try {
      std::string once = normalize_pages(raw);
      ++valid;
      o.expect(hyphens <= 2, "accepted " + raw);
      o.expect(normalize_pages(once) == once, "not idempotent on " + raw);
      bool has_dash = once.find("--") != std::string::npos;
      o.expect(has_dash == (raw.find('-') != std::string::npos), "dash presence differs on " + raw);
    } catch (const Error& e) {
      ++rejected;
      o.expect(e.code() == ErrorCode::MalformedRange && hyphens > 2, "rejected " + raw);
    }
  }
  if (o.pass) o.detail = str(valid) + " normalized, " + str(rejected) + " malformed rejected";
  return o;
}

// 3. Appendix lettering ------------------------------------------------------

Outcome appendix_letters() {
  Outcome o;
  CounterState s;
  s.secno = 5;
  std::string letters;
  int dividers = 0;
  for (int i = 0; i < 10; ++i) {
    auto step = begin_appendix(s, "App");
    letters += step.label.text;
    if (step.toc_divider) ++dividers;
    s = step.state;
  }
  o.expect(letters == "ABCDEFGHIJ", "letters were " + letters);
  o.expect(dividers == 1, "divider emitted " + str(dividers) + " times");
  try {
    begin_appendix(s, "Eleventh");
    o.fail("eleventh appendix accepted");
  } catch (const Error& e) {
    o.expect(e.code() == ErrorCode::AppendixOverflow, "eleventh appendix raised " + std::string(to_string(e.code())));
  }
  if (o.pass) o.detail = letters + ", one divider, overflow on the 11th";
  return o;
}

// 4. Counter replay ------------------------------------------------------------

enum class Ev { Section, Subsection, Appendix, Supplement, Notoc, Proclaim, Equation };

struct Replay {
  std::vector<std::string> labels;
  std::vector<std::string> proclaims;
  std::vector<CounterState> proclaim_states;
  std::vector<int> equations;
};

Replay replay(const std::vector<Ev>& events, bool subsections) {
  Replay r;
  CounterState s = CounterState::initial(subsections);
  LabelTable labels;
  int keys = 0;
  for (Ev e : events) {
    switch (e) {
      case Ev::Section: {
        auto st = begin_section(s, "S");
        s = st.state;
        r.labels.push_back(st.label.text);
        break;
      }
      case Ev::Subsection: {
        if (s.subsecno < 0 || s.secno < 1) break;
        auto st = begin_subsection(s, "T");
        s = st.state;
        r.labels.push_back(st.label.text);
        break;
      }
      case Ev::Appendix: {
        if (s.secno <= -10) break;
        auto st = begin_appendix(s, "A");
        s = st.state;
        r.labels.push_back(st.label.text);
        break;
      }
      case Ev::Supplement: {
        auto st = begin_supplement(s, "U");
        s = st.state;
        r.labels.push_back(st.label.text);
        break;
      }
      case Ev::Notoc: {
        auto st = begin_notoc_section(s, "N");
        s = st.state;
        r.labels.push_back(st.label.text);
        break;
      }
      case Ev::Proclaim: {
        auto st = next_proclaim(s, "Theorem", "K" + str(keys++), labels);
        r.proclaim_states.push_back(s);
        s = st.state;
        r.labels.push_back(st.label.text);
        r.proclaims.push_back(st.label.text);
        break;
      }
      case Ev::Equation: {
        auto st = next_equation(s, {"E" + str(keys++), keys % 3 ? "" : "a"}, labels);
        s = st.state;
        r.labels.push_back(st.tag);
        r.equations.push_back(std::stoi(*labels.lookup("E" + str(keys - 1))));
        break;
      }
    }
  }
  return r;
}

Outcome counter_replay() {
  Outcome o;
  std::mt19937 rng(4242);
  int violations = 0;
  for (int run = 0; run < 1000; ++run) {
    std::vector<Ev> events;
    int n = 5 + static_cast<int>(rng() % 60);
    for (int i = 0; i < n; ++i) events.push_back(static_cast<Ev>(rng() % 7));
    bool subsections = rng() % 2;
    Replay a = replay(events, subsections);
    Replay b = replay(events, subsections);
    if (a.labels != b.labels) {
      ++violations;
      o.fail("replay differs in run " + str(run));
    }
    for (std::size_t i = 1; i < a.equations.size(); ++i) {
      if (a.equations[i] <= a.equations[i - 1]) {
        ++violations;
        o.fail("equation numbers not increasing in run " + str(run));
      }
    }
    for (std::size_t i = 0; i < a.proclaims.size(); ++i) {
      const std::string& l = a.proclaims[i];
      const CounterState& before = a.proclaim_states[i];
      if (l.find("..") != std::string::npos) {
        ++violations;
        o.fail("double dot in " + l);
      }
      if (before.secno > 0) {
        auto parts = 1 + std::count(l.begin(), l.end(), '.');
        long expected = before.subsecno >= 0 ? 3 : 2;
        if (parts != expected) {
          ++violations;
          o.fail("proclaim label " + l + " has " + str(parts) + " components");
        }
      }
    }
  }
  if (o.pass) o.detail = "1000 sequences, " + str(violations) + " violations";
  return o;
}

// 5. Checkpoint round trip ------------------------------------------------------

Outcome checkpoint_round_trip() {
  Outcome o;
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> sec(-10, 1005), sub(-1, 40), count(0, 999), page(1, 5000);
  for (int i = 0; i < 100; ++i) {
    CounterState s;
    s.secno = sec(rng);
    s.subsecno = sub(rng);
    s.proclno = count(rng);
    s.eqnumber = count(rng);
    s.pageno = page(rng);
    std::vector<std::string> lines;
    for (const auto& l : emit_checkpoint(s)) lines.push_back(serialize(l));
    std::vector<std::string> expected = {"\\secno=" + str(s.secno),       "\\subsecno=" + str(s.subsecno),
                                         "\\proclno=" + str(s.proclno),   "\\eqnumber=" + str(s.eqnumber),
                                         "\\pageno=" + str(s.pageno),     "\\advancepageno"};
    o.expect(lines == expected, "serialization differs for state " + str(i));
    CounterState back = parse_lab(lines).state;
    CounterState want = s;
    want.pageno += 1;
    o.expect(back == want, "round trip differs for state " + str(i));
  }
  if (o.pass) o.detail = "100 states, six lines each";
  return o;
}

// 6. Two-part build -----------------------------------------------------------

std::string bump_page(const std::string& toc_line) {
  static const std::regex re(R"((.* \\onpage )(\d+)\.)");
  std::smatch m;
  if (!std::regex_match(toc_line, m, re)) return toc_line;
  return m[1].str() + str(std::stoi(m[2].str()) + 1) + ".";
}

Outcome two_part_build() {
  Outcome o;
  const std::string part1 =
      "\\opentoc\n\\newsection First.\n\\proclaim Theorem. \\ThmA Body.\n\n$$ a = b \\neqn(\\EqA) $$\n"
      "\\subsection Detail.\n\\proclaim Lemma. \\LemA Small.\n\n";
  const std::string part2 =
      "\\opentoc\n\\newsection Second.\nUsing \\ThmA{} and (\\EqA).\n\\proclaim Theorem. \\ThmB More.\n\n"
      "$$ c = d \\neqn(\\EqB) $$\n\\subsection Tail.\n";
  BuildConfig c;
  c.job_name = "parts";
  c.lines_per_page = 100000;
  auto whole = build(c, {part1 + part2.substr(part2.find('\n') + 1), {}, {}});
  auto first = build(c, {part1, {}, {}});
  auto second = build(c, {part2, {}, join_lines(first.output.lab)});

  std::map<std::string, std::string> split;
  for (const auto& [k, v] : first.output.labels.bindings()) split[k] = v;
  for (const auto& [k, v] : second.output.labels.bindings()) split[k] = v;
  std::map<std::string, std::string> single(whole.output.labels.bindings().begin(),
                                            whole.output.labels.bindings().end());
  o.expect(split == single, "label tables differ");

  const auto& wt = whole.output.toc;
  const auto& t1 = first.output.toc;
  const auto& t2 = second.output.toc;
  o.expect(t1.size() + t2.size() == wt.size() + 1, "TOC line counts differ");
  if (o.pass) {
    for (std::size_t i = 0; i < t1.size(); ++i) o.expect(t1[i] == wt[i], "part-one TOC line " + str(i));
    for (std::size_t i = 1; i < t2.size(); ++i) {
      const std::string& single_line = wt[t1.size() + i - 1];
      o.expect(t2[i] == bump_page(single_line), "part-two TOC line " + t2[i] + " vs " + single_line);
    }
  }
  std::vector<std::string> whole_lab = whole.output.lab;
  std::vector<std::string> second_lab = second.output.lab;
  auto checkpoint_only = [](std::vector<std::string> v) {
    std::erase_if(v, [](const std::string& l) { return l.rfind("\\def", 0) == 0; });
    return v;
  };
  auto wl = checkpoint_only(whole_lab);
  auto sl = checkpoint_only(second_lab);
  o.expect(wl.size() == 6 && sl.size() == 6, "checkpoint blocks malformed");
  if (o.pass) {
    for (std::size_t i = 0; i < 4; ++i) o.expect(wl[i] == sl[i], "checkpoint register differs: " + sl[i]);
    o.expect(sl[4] == "\\pageno=" + str(std::stoi(wl[4].substr(8)) + 1), "page offset is not +1: " + sl[4]);
  }
  if (o.pass) o.detail = str(split.size()) + " labels equal, part-two pages offset by +1";
  return o;
}

// 7. Fixed point -------------------------------------------------------------

Outcome fixed_point() {
  Outcome o;
  const std::string doc =
      "\\newsection Start.\nSee \\ref{Later}, equation (\\EqLate) and Theorem \\ThmLate.\n\n"
      "\\newsection End.\n$$ e = mc^2 \\neqn(\\EqLate) $$\n\\proclaim Theorem. \\ThmLate Done.\n\n"
      "\\beginrefs\n\\endrefs\n";
  const std::string refs = "\\ref{Later}\n\\author{B. Writer}\n\\title{Big Book}\n\\publ{Pressco}\n\\year{1990}\n";
  BuildConfig c;
  c.job_name = "fixed";
  auto r = build(c, {doc, refs, {}});
  std::string text = join_lines(r.output.text);
  o.expect(r.report.stable, "not stable");
  o.expect(r.report.passes_run <= 3, "took " + str(r.report.passes_run) + " passes");
  o.expect(text.find("[??") == std::string::npos, "placeholder in final output");
  o.expect(text.find("See [Later], equation (1) and Theorem 2.0.1.") != std::string::npos,
           "forward references not resolved");
  if (o.pass) o.detail = "stable after " + str(r.report.passes_run) + " passes";
  return o;
}

// 8. Aux-file fixtures ------------------------------------------------------------

Outcome aux_fixtures() {
  Outcome o;
  fs::path out = fs::temp_directory_path() / "texmark_acceptance_aux";
  fs::remove_all(out);
  fs::create_directories(out);
  BuildConfig c;
  c.job_name = "golden_doc";
  apply_config(c, read_file(kFixtures / "golden_doc.cfg"));
  JobPaths paths{kFixtures / "golden_doc.tex", kFixtures / "golden_doc.ref", std::nullopt, out};
  auto report = build_job(c, paths);
  o.expect(report.stable, "golden document did not converge");
  for (const char* ext : {"toc", "lab", "inx", "txt"}) {
    std::string got = read_file(out / ("golden_doc." + std::string(ext)));
    std::string want = read_file(kFixtures / ("golden_doc.expected." + std::string(ext)));
    o.expect(got == want, std::string(".") + ext + " differs from fixture");
  }
  static const std::regex toc_re(R"(\\tocitem [^=]*=.* \\onpage [0-9ivxlcdm]+\.)");
  static const std::regex inx_re(R"(.* @[0-9ivxlcdm]+\.)");
  auto toc = split_lines(read_file(out / "golden_doc.toc"));
  for (std::size_t i = 1; i < toc.size(); ++i) {
    if (toc[i] != "\\Appendices") o.expect(std::regex_match(toc[i], toc_re), "toc shape: " + toc[i]);
  }
  for (const auto& l : split_lines(read_file(out / "golden_doc.inx"))) {
    o.expect(std::regex_match(l, inx_re), "inx shape: " + l);
  }
  std::string all = read_file(out / "golden_doc.toc") + read_file(out / "golden_doc.inx");
  o.expect(all.find("$K$-theory") != std::string::npos && all.find("$\\mathbb{Z}$") != std::string::npos,
           "math spans not carried verbatim");
  if (o.pass) o.detail = ".toc .lab .inx .txt byte-exact";
  return o;
}

// 9. Error catalog -----------------------------------------------------------

std::optional<Error> trigger(const fs::path& file) {
  try {
    if (file.extension() == ".ref") {
      for (const auto& r : ingest_refs(read_file(file)).records) format_reference(r);
    } else {
      BuildInputs in{read_file(file), {}, {}};
      fs::path refs = fs::path(file).replace_extension(".ref");
      if (fs::exists(refs)) in.refs = read_file(refs);
      BuildConfig c;
      c.job_name = file.stem().string();
      build(c, in);
    }
  } catch (const Error& e) {
    return e;
  }
  return std::nullopt;
}

Outcome error_catalog() {
  Outcome o;
  std::ifstream in(kFixtures / "errors" / "expected.txt");
  std::set<std::string> codes;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string file, code;
    int l = 0, col = 0;
    fields >> file >> code >> l >> col;
    auto e = trigger(kFixtures / "errors" / file);
    if (!e) {
      o.fail(file + " raised nothing");
      continue;
    }
    std::string got = std::string(to_string(e->code())) + "@" + pos_str(e->pos());
    std::string want = code + "@" + str(l) + ":" + str(col);
    o.expect(got == want, file + ": got " + got + ", expected " + want);
    codes.insert(code);
  }
  for (const char* c : {"IncorrectLabel", "UnrecognisedReference", "DuplicateField", "UndefinedReference",
                        "AppendixOverflow", "UnbalancedMath"}) {
    o.expect(codes.count(c) == 1, std::string("no fixture for ") + c);
  }
  if (o.pass) o.detail = str(codes.size()) + " error codes with positions";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_ms;  ///< 0 = no time limit
  };
  const Criterion criteria[] = {
      {1, "macro-oracle golden suite", golden_suite, 5000},
      {2, "page-range table and properties", page_ranges, 1000},
      {3, "appendix lettering", appendix_letters, 0},
      {4, "counter replay", counter_replay, 0},
      {5, "checkpoint round trip", checkpoint_round_trip, 0},
      {6, "two-part build equivalence", two_part_build, 0},
      {7, "fixed point", fixed_point, 0},
      {8, "aux-format conformance", aux_fixtures, 0},
      {9, "error catalog", error_catalog, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_ms > 0 && ms > c.budget_ms) o.fail("took " + str(ms) + " ms");
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << " (" << static_cast<int>(ms)
              << " ms): " << o.detail << '\n';
  }
  return failed == 0 ? 0 : 1;
}
