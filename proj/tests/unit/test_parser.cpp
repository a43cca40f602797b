#include <functional>

#include "doctest.h"
#include "texmark/source.hpp"

using namespace texmark;
using K = Token::Kind;

namespace {

Error error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error raised");
  return Error(ErrorCode::Io, "");
}

std::vector<DocEvent> structural(const std::vector<DocEvent>& events) {
  std::vector<DocEvent> out;
  for (const auto& ev : events)
    if (!ev.get<TextEvent>()) out.push_back(ev);
  return out;
}

std::vector<SourcePos> positions(const std::vector<DocEvent>& events) {
  std::vector<SourcePos> out;
  for_each_event(events, [&](const DocEvent& ev) { out.push_back(ev.pos); });
  return out;
}

}  // namespace

TEST_CASE("tokenizer shapes") {
  auto t = tokenize("\\newsection Intro.");
  REQUIRE(t.size() == 8);
  CHECK(t[0].is_command("newsection"));
  CHECK(to_source({t.begin() + 1, t.end()}) == " Intro.");
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].kind == K::Char);

  auto g = tokenize("{a{b}}");
  REQUIRE(g.size() == 1);
  CHECK(g[0].kind == K::Group);
  REQUIRE(g[0].children.size() == 2);
  CHECK(g[0].children[0].is_char('a'));
  CHECK(g[0].children[1].kind == K::Group);
  CHECK(g[0].children[1].children[0].is_char('b'));

  auto m = tokenize("$x$");
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == K::MathSpan);
  CHECK(m[0].text == "x");

  auto d = tokenize("$$a=b$$");
  REQUIRE(d.size() == 1);
  CHECK(d[0].display);

  CHECK(to_source(tokenize("a % comment\nb")).find("comment") == std::string::npos);
}

TEST_CASE("tokenizer errors carry positions") {
  auto open = error_of([] { tokenize("ab\n{cd"); });
  CHECK(open.code() == ErrorCode::UnbalancedGroup);
  REQUIRE(open.pos());
  CHECK(*open.pos() == SourcePos{2, 1});

  auto close = error_of([] { tokenize("x}"); });
  CHECK(close.code() == ErrorCode::UnbalancedGroup);
  CHECK(*close.pos() == SourcePos{1, 2});

  auto math = error_of([] { tokenize("line\nsee $x here"); });
  CHECK(math.code() == ErrorCode::UnbalancedMath);
  CHECK(*math.pos() == SourcePos{2, 5});

  CHECK(error_of([] { tokenize("caf\xc3\xa9"); }).code() == ErrorCode::NonAscii);
}

TEST_CASE("sectional titles end at the first period") {
  auto doc = parse_document("\\newsection Main results.");
  REQUIRE(doc.events.size() == 1);
  CHECK(doc.events[0].get<SectionEvent>()->title == "Main results");
  CHECK(doc.events[0].pos == SourcePos{1, 1});

  auto all = parse_document("\\subsection A.\n\\Appendix B.\n\\Supplement C.\n\\NotocSection D.\n");
  all.events = structural(all.events);
  REQUIRE(all.events.size() == 4);
  CHECK(all.events[0].get<SubsectionEvent>()->title == "A");
  CHECK(all.events[1].get<AppendixEvent>()->title == "B");
  CHECK(all.events[2].get<SupplementEvent>()->title == "C");
  CHECK(all.events[3].get<NotocSectionEvent>()->title == "D");

  auto e = error_of([] { parse_document("\\newsection No period"); });
  CHECK(e.code() == ErrorCode::MissingDelimiter);
  CHECK(*e.pos() == SourcePos{1, 1});
}

TEST_CASE("proclaim key detection") {
  auto doc = parse_document("\\proclaim Theorem. \\ThmA All X are Y.\n\n");
  doc.events = structural(doc.events);
  REQUIRE(doc.events.size() == 1);
  const auto* p = doc.events[0].get<ProclaimEvent>();
  REQUIRE(p);
  CHECK(p->heading == "Theorem");
  CHECK(p->key == std::optional<std::string>("ThmA"));
  CHECK(p->body_text() == "All X are Y.");
  CHECK(doc.declared.count("ThmA"));

  auto nokey = parse_document("\\proclaim Lemma. Plain body.\n\n");
  CHECK_FALSE(nokey.events[0].get<ProclaimEvent>()->key);

  auto bound = parse_document("\\proclaim A. \\K x.\n\n\\proclaim B. \\K y.\n\n");
  REQUIRE(bound.events.size() >= 2);
  const ProclaimEvent* second = nullptr;
  for (const auto& ev : bound.events)
    if (const auto* q = ev.get<ProclaimEvent>(); q && q->heading == "B") second = q;
  REQUIRE(second);
  CHECK(second->key_was_bound);
  CHECK_FALSE(second->key);
  CHECK(bound.warnings.size() == 1);

  CHECK(error_of([] { parse_document("\\proclaim T. body\n\\bye"); }).code() == ErrorCode::MissingDelimiter);
  CHECK(error_of([] { parse_document("\\proclaim T. body runs out"); }).code() == ErrorCode::MissingDelimiter);
  CHECK(error_of([] { parse_document("\\proclaim T. body\n\\newsection X.\n\n"); }).code() ==
        ErrorCode::MissingDelimiter);
}

TEST_CASE("equations, citations, index terms and label references") {
  auto doc = parse_document("\\newsection S.\n$$ a=b \\neqn(\\EqMain a) $$ see \\EqMain{} and \\ref{K84, p. 5}\\inx{$K$-theory}\n");
  std::vector<std::string> kinds;
  const EquationEvent* eq = nullptr;
  const CiteEvent* cite = nullptr;
  const IndexEvent* inx = nullptr;
  const LabelRefEvent* lref = nullptr;
  for (const auto& ev : doc.events) {
    if (auto* e = ev.get<EquationEvent>()) eq = e;
    if (auto* c = ev.get<CiteEvent>()) cite = c;
    if (auto* x = ev.get<IndexEvent>()) inx = x;
    if (auto* l = ev.get<LabelRefEvent>()) lref = l;
  }
  REQUIRE(eq);
  CHECK(eq->key == std::optional<std::string>("EqMain"));
  CHECK(eq->suffix == "a");
  REQUIRE(cite);
  CHECK(cite->key == "K84");
  CHECK(cite->suffix == std::optional<std::string>(", p. 5"));
  REQUIRE(inx);
  CHECK(inx->term == "$K$-theory");
  CHECK_FALSE(inx->visible);
  REQUIRE(lref);
  CHECK(lref->name == "EqMain");

  auto bad = error_of([] { parse_document("\\newsection S.\n$$ x \\neqn(x) $$\n"); });
  CHECK(bad.code() == ErrorCode::IncorrectLabel);
  CHECK(*bad.pos() == SourcePos{2, 6});
}

TEST_CASE("forward label references are recognized") {
  auto doc = parse_document("See \\ThmLater.\n\n\\proclaim Theorem. \\ThmLater Body.\n\n");
  bool found = false;
  for (const auto& ev : doc.events)
    if (auto* l = ev.get<LabelRefEvent>()) found = found || l->name == "ThmLater";
  CHECK(found);

  ParseOptions seeded;
  seeded.known_labels.insert("Old");
  auto cont = parse_document("Part one had \\Old.\n", seeded);
  found = false;
  for (const auto& ev : cont.events)
    if (auto* l = ev.get<LabelRefEvent>()) found = found || l->name == "Old";
  CHECK(found);
}

TEST_CASE("unknown commands stay in text") {
  auto doc = parse_document("Some \\alpha and \\frobnicate text.\n");
  REQUIRE(doc.events.size() == 1);
  auto run = doc.events[0].get<TextEvent>()->run;
  CHECK(run.find("\\alpha") != std::string::npos);
  CHECK(run.find("\\frobnicate") != std::string::npos);
}

TEST_CASE("labelsec before any structure warns") {
  auto doc = parse_document("\\labelsec\\Early\n\\newsection S.\n");
  CHECK(doc.warnings.size() == 1);
  auto ok = parse_document("\\newsection S.\n\\labelsec\\SecS\n");
  CHECK(ok.warnings.empty());
}

TEST_CASE("text round trip") {
  const char* src = "Plain words, $x^2$ and more.\n\nSecond paragraph.\n";
  auto doc = parse_document(src);
  std::string again;
  for (const auto& ev : doc.events)
    if (auto* t = ev.get<TextEvent>()) again += t->run;
  auto reparsed = parse_document(again);
  std::string twice;
  for (const auto& ev : reparsed.events)
    if (auto* t = ev.get<TextEvent>()) twice += t->run;
  CHECK(twice == again);
}

TEST_CASE("event positions strictly increase") {
  const char* src =
      "\\opentoc\n\\newsection Introduction.\nWe cite \\ref{K84} and \\ThmB.\n\\inx{monoid}\n"
      "\\proclaim Theorem. \\ThmA All $X$ are $Y$.\n\n\\subsection Setup.\n\\labelsec\\SecSetup\n"
      "$$ a = b \\neqn(\\EqLater a) $$\n\\proclaim Lemma. \\ThmB Something \\index{$K$-theory}.\n"
      "\\statitem First.\n\\statitem Second.\n\n\\Appendix Proofs.\nProof of \\ThmA.\n\\beginrefs\n\\endrefs\n\\bye\n";
  auto doc = parse_document(src);
  auto pos = positions(doc.events);
  REQUIRE(pos.size() > 10);
  for (std::size_t i = 1; i < pos.size(); ++i) {
    CAPTURE(i);
    CHECK(pos[i - 1] < pos[i]);
  }
}

TEST_CASE("equation tags need parentheses inside display math") {
  auto e = error_of([] { parse_document("\\newsection S.\n$$ x = y \\neqn $$\n"); });
  CHECK(e.code() == ErrorCode::MissingDelimiter);
  CHECK(*e.pos() == SourcePos{2, 10});
  auto ok = parse_document("$$ \\neqnx \\label y $$\n");
  for (const auto& ev : ok.events) CHECK_FALSE(ev.get<EquationEvent>());
}
