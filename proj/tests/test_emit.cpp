#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "uiforge/emit/dispatch.hpp"
#include "uiforge/emit/propose.hpp"
#include "uiforge/metrics.hpp"
#include "uiforge/synth.hpp"

using namespace uiforge;

namespace {

Blueprint three_cards() {
  return mine(UiTree::from_spec(fx::box(NodeKind::Stack, {fx::card("a"), fx::card("b"), fx::card("c")})));
}

// Card instances separated by other content, so no loop group forms.
Blueprint loose_cards() {
  return mine(UiTree::from_spec(
      fx::box(NodeKind::Stack, {fx::card("a"), fx::text("between"), fx::card("b"), fx::media("x.png")})));
}

struct Replay {
  ConstraintState state;
  std::size_t at;
};

template <class Pred>
Replay replay_until(const Blueprint& bp, Framework fw, const std::vector<EmissionEvent>& stream, Pred pred) {
  ConstraintState s(Schema::from_blueprint(bp, fw));
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (pred(stream[i])) return {s, i};
    s.advance(stream[i]);
  }
  FAIL("event not found");
  return {s, stream.size()};
}

ErrorCode error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::size_t count_events(const std::vector<EmissionEvent>& s, auto pred) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), pred));
}

}  // namespace

TEST_CASE("syntactic mask") {
  const Blueprint bp = three_cards();
  const auto stream = dispatch(bp, Framework::Html);
  auto r = replay_until(bp, Framework::Html, stream, [](const EmissionEvent& e) {
    const auto* o = std::get_if<ev::OpenTag>(&e);
    return o && o->name == "p";
  });
  const std::size_t before = r.state.depth();
  r.state.advance(stream[r.at]);
  CHECK(r.state.depth() == before + 1);
  CHECK_FALSE(admissible(r.state, ev::CloseTag{"div"}));
  CHECK(r.state.rejection(ev::CloseTag{"div"}).rfind("syn:", 0) == 0);
  CHECK(error_of([&] { step(r.state, ev::CloseTag{"div"}); }) == ErrorCode::InadmissibleEvent);

  ConstraintState fresh(Schema::from_blueprint(bp, Framework::Html));
  CHECK_FALSE(fresh.admits(ev::Attr{"class", "frame"}));
  CHECK_FALSE(fresh.admits(ev::FileEnd{}));
}

TEST_CASE("open then close restores depth") {
  const Blueprint bp = three_cards();
  const auto stream = dispatch(bp, Framework::React);
  ConstraintState s(Schema::from_blueprint(bp, Framework::React));
  for (const auto& e : stream) {
    const std::size_t d = s.depth();
    s.advance(e);
    if (std::holds_alternative<ev::OpenTag>(e)) CHECK(s.depth() == d + 1);
    if (std::holds_alternative<ev::CloseTag>(e)) CHECK(s.depth() == d - 1);
  }
  CHECK(s.complete());
}

TEST_CASE("type and binding masks") {
  const Blueprint bp = loose_cards();
  const auto stream = dispatch(bp, Framework::React);
  auto r = replay_until(bp, Framework::React, stream, [](const EmissionEvent& e) {
    const auto* b = std::get_if<ev::BindProp>(&e);
    return b && b->value.type == PayloadType::Url;
  });
  ev::BindProp url = std::get<ev::BindProp>(stream[r.at]);
  CHECK(r.state.admits(url));
  ev::BindProp wrong = url;
  wrong.sink = Sink::Class;
  CHECK(r.state.rejection(wrong).rfind("type:", 0) == 0);

  auto t = replay_until(bp, Framework::React, stream, [](const EmissionEvent& e) {
    const auto* b = std::get_if<ev::BindProp>(&e);
    return b && b->value.type == PayloadType::Text;
  });
  const auto& text = std::get<ev::BindProp>(stream[t.at]);
  const std::size_t inst = t.state.instances_opened() - 1;
  const std::size_t bits = t.state.bound_count(inst);
  t.state.advance(text);
  CHECK(t.state.bound_count(inst) == bits + 1);
  CHECK(t.state.rejection(text).rfind("bind:", 0) == 0);
}

TEST_CASE("ledger fills for every instance") {
  const Blueprint bp = loose_cards();
  const auto stream = dispatch(bp, Framework::Vue);
  ConstraintState s(Schema::from_blueprint(bp, Framework::Vue));
  for (const auto& e : stream) s.advance(e);
  REQUIRE(s.schema().instances.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& slot = s.schema().instances[i];
    CHECK(s.bound_count(i) == s.schema().find_template(slot.template_id)->props.size());
  }
  CHECK(is_complete(s));
}

TEST_CASE("completion") {
  CHECK(is_complete(ConstraintState()));
  const Blueprint bp = loose_cards();
  const auto stream = dispatch(bp, Framework::React);
  // Stop before the last binding of the first call site.
  std::size_t last_bind = 0;
  {
    ConstraintState s(Schema::from_blueprint(bp, Framework::React));
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (std::holds_alternative<ev::BindProp>(stream[i]) && s.instances_opened() == 1) last_bind = i;
      s.advance(stream[i]);
    }
  }
  ConstraintState s(Schema::from_blueprint(bp, Framework::React));
  for (std::size_t i = 0; i < last_bind; ++i) s.advance(stream[i]);
  CHECK_FALSE(s.complete());

  ConstraintState f(Schema::from_blueprint(bp, Framework::React));
  f.advance(stream.front());
  CHECK(f.depth() == 0);
  CHECK(f.file_open());
  CHECK_FALSE(f.complete());
}

TEST_CASE("dispatch maps loops per framework") {
  const Blueprint bp = three_cards();
  auto loops = [](const std::vector<EmissionEvent>& s) {
    return count_events(s, [](const EmissionEvent& e) { return std::holds_alternative<ev::LoopStart>(e); });
  };
  const auto react = dispatch(bp, Framework::React);
  CHECK(loops(react) == 1);
  const auto html = dispatch(bp, Framework::Html);
  CHECK(loops(html) == 0);
  const std::string id = bp.templates.at(0).id;
  CHECK(count_events(html, [&](const EmissionEvent& e) {
          const auto* o = std::get_if<ev::OpenTag>(&e);
          return o && o->name == id;
        }) == 3);
  const CodeBundle b = emit(bp, Framework::React);
  const std::string app = *b.find("App.tsx");
  CHECK(occurrences(app, ".map(") == 1);
  std::smatch m;
  REQUIRE(std::regex_search(app, m, std::regex(R"(const items_0: \w+Props\[\] = \[\n((?:  \{.*\},\n)*)\];)")));
  CHECK(std::count(m[1].first, m[1].second, '\n') == 3);
}

TEST_CASE("no templates gives a single page") {
  Blueprint bp;
  bp.tree = UiTree::from_spec(fx::box(NodeKind::Stack, {fx::text("only"), fx::media("one.png")}));
  const CodeBundle vue = emit(bp, Framework::Vue);
  REQUIRE(vue.files.size() == 1);
  CHECK(vue.files[0].path == "App.vue");
  Blueprint empty;
  const CodeBundle html = emit(empty, Framework::Html);
  REQUIRE(html.files.size() == 1);
  CHECK(html.files[0].content.find(R"(<div id="root"></div>)") != std::string::npos);
}

TEST_CASE("bundle layout") {
  const Blueprint bp = three_cards();
  const CodeBundle react = emit(bp, Framework::React);
  REQUIRE(react.files.size() == 2);
  CHECK(std::regex_match(react.files[0].path, std::regex(R"(components/Tile_[0-9a-f]{8}\.tsx)")));
  CHECK(react.files[1].path == "App.tsx");
  const CodeBundle ng = emit(bp, Framework::Angular);
  REQUIRE(ng.files.size() == 4);
  CHECK(ng.files[2].path == "app.component.html");
  CHECK(ng.files[3].path == "app.component.ts");
  for (Framework fw : kAllFrameworks) {
    CHECK(emit(bp, fw).files == emit(bp, fw).files);
  }
}

TEST_CASE("render rejects a stream missing a binding") {
  const Blueprint bp = loose_cards();
  for (Framework fw : kAllFrameworks) {
    auto stream = dispatch(bp, fw);
    const auto it = std::find_if(stream.begin(), stream.end(),
                                 [](const EmissionEvent& e) { return std::holds_alternative<ev::BindProp>(e); });
    REQUIRE(it != stream.end());
    stream.erase(it);
    CHECK(error_of([&] { render(stream, bp, fw); }) == ErrorCode::IncompleteStream);
  }
}

TEST_CASE("reference proposer") {
  const Blueprint bp = three_cards();
  for (Framework fw : kAllFrameworks) {
    ReferenceProposer p(dispatch(bp, fw));
    const FilterResult r = propose_and_filter(bp, fw, p, 100000);
    CHECK(r.stats.rejections == 0);
    CHECK(r.bundle.files == emit(bp, fw).files);
  }
  FuzzProposer starved(dispatch(bp, Framework::React), 1);
  CHECK(error_of([&] { propose_and_filter(bp, Framework::React, starved, 1); }) == ErrorCode::FuelExhausted);
}

TEST_CASE("fuzzed emission never yields a broken bundle") {
  const auto docs = synthetic_corpus(17, 4);
  std::size_t proposals = 0, rejections = 0;
  for (const auto& doc : docs) {
    const Blueprint bp = mine(doc.tree);
    for (Framework fw : kAllFrameworks) {
      const auto stream = dispatch(bp, fw);
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        FuzzProposer p(stream, seed);
        try {
          const FilterResult r = propose_and_filter(bp, fw, p, default_fuel(stream.size()));
          CHECK(prop_coverage(bp, r.bundle) == 1.0);
          CHECK(loop_preservation_accuracy(bp, r.bundle) == 1.0);
          CHECK(audit_tag_balance(r.bundle).empty());
          CHECK(audit_type_sinks(bp, r.bundle).empty());
          proposals += r.stats.proposals;
          rejections += r.stats.rejections;
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::FuelExhausted);
        }
      }
    }
  }
  CHECK(static_cast<double>(rejections) >= 0.3 * static_cast<double>(proposals));
}

TEST_CASE("mask soundness under random proposals") {
  const Blueprint bp = three_cards();
  for (Framework fw : kAllFrameworks) {
    const auto stream = dispatch(bp, fw);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      FuzzProposer p(stream, seed, 0.6);
      ConstraintState s(Schema::from_blueprint(bp, fw));
      for (int i = 0; i < 400 && !s.complete(); ++i) {
        const EmissionEvent e = p.propose(s);
        const bool ok = admissible(s, e);
        bool threw = false;
        try {
          s = step(s, e);
        } catch (const Error& err) {
          threw = true;
          CHECK(err.code() == ErrorCode::InadmissibleEvent);
        }
        CHECK(ok != threw);
        p.feedback(ok);
      }
    }
  }
}

TEST_CASE("golden bundles") {
  const Blueprint bp = three_cards();
  for (Framework fw : kAllFrameworks) {
    for (const auto& f : emit(bp, fw).files) {
      const std::string path = std::string(GOLDEN_DIR) + "/" + std::string(to_string(fw)) + "/" + f.path;
      std::ifstream in(path, std::ios::binary);
      REQUIRE_MESSAGE(in.good(), path);
      std::ostringstream ss;
      ss << in.rdbuf();
      CHECK_MESSAGE(ss.str() == f.content, path);
    }
  }
}
