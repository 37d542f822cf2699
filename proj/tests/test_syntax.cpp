#include <random>

#include "doctest.h"
#include "gubs/syntax.hpp"

using namespace gubs;

namespace {

std::size_t count_dependences(const std::vector<Behaviour>& body) {
  std::size_t n = 0;
  for (const auto& b : body) {
    if (std::holds_alternative<Dependence>(b.node)) ++n;
    if (const auto* c = std::get_if<CompartmentB>(&b.node)) n += count_dependences(c->body);
    if (const auto* c = std::get_if<ContextB>(&b.node)) n += count_dependences(c->body);
  }
  return n;
}

std::set<std::string> texts(const std::set<Ident>& ids) {
  std::set<std::string> out;
  for (const auto& i : ids) out.insert(i.text);
  return out;
}

}  // namespace

TEST_CASE("ident kind follows case of first letter") {
  CHECK(Ident("Tetr").is_constant());
  CHECK(Ident("v1").is_variable());
}

TEST_CASE("activation and inhibition desugar to four dependences") {
  Program p = parse_program("{ g1 +> g2, g2 -| g1 }");
  REQUIRE(p.behaviours.size() == 4);
  const auto& d0 = std::get<Dependence>(p.behaviours[0].node);
  const auto& d1 = std::get<Dependence>(p.behaviours[1].node);
  const auto& d2 = std::get<Dependence>(p.behaviours[2].node);
  const auto& d3 = std::get<Dependence>(p.behaviours[3].node);
  CHECK(d0.kind == DependenceKind::Persistent);
  CHECK(render_collection(d0.cause) == "g1");
  CHECK(d1.kind == DependenceKind::Normal);
  CHECK(render_collection(d1.cause) == "~g1");
  CHECK(render_collection(d1.effect) == "~g2");
  CHECK(d2.kind == DependenceKind::Persistent);
  CHECK(render_collection(d2.cause) == "~g2");
  CHECK(render_collection(d2.effect) == "g1");
  CHECK(d3.kind == DependenceKind::Normal);
  CHECK(render_collection(d3.cause) == "g2");
  CHECK(render_collection(d3.effect) == "~g1");
}

TEST_CASE("empty program") {
  Program p = parse_program("{ }");
  CHECK(p.behaviours.empty());
  CHECK(render_program(p) == "{ }");
}

TEST_CASE("attribute declarations") {
  Program p = parse_program("{ G :: {Low < Mid, Mid < High}, P :: {Phos >< UnPhos} }");
  REQUIRE(p.behaviours.size() == 2);
  const auto& g = std::get<AttrDeclB>(p.behaviours[0].node);
  REQUIRE(g.relations.size() == 2);
  CHECK(g.relations[0].kind == AttrRelKind::Prec);
  CHECK(g.relations[0].left.text == "Low");
  CHECK(g.relations[1].right->text == "High");
  const auto& ph = std::get<AttrDeclB>(p.behaviours[1].node);
  REQUIRE(ph.relations.size() == 1);
  CHECK(ph.relations[0].kind == AttrRelKind::Napprox);
}

TEST_CASE("exclusion and inclusion sets") {
  Program p = parse_program("{ A :: exclusion {X, Y, Z}, B :: inclusion {L, M, H} }");
  const auto& a = std::get<AttrDeclB>(p.behaviours[0].node);
  CHECK(a.relations.size() == 3);
  for (const auto& r : a.relations) CHECK(r.kind == AttrRelKind::Napprox);
  const auto& b = std::get<AttrDeclB>(p.behaviours[1].node);
  REQUIRE(b.relations.size() == 2);
  CHECK(b.relations[0].left.text == "L");
  CHECK(b.relations[0].right->text == "M");
  CHECK(b.relations[1].left.text == "M");
  CHECK(b.relations[1].right->text == "H");
}

TEST_CASE("compartments, contexts and observations") {
  Program p = parse_program(
      "{ Cell { [Light, Dark] { a -> B(~x) + ~c } }, obs :: Cell.a + B(y) // trailing\n }");
  REQUIRE(p.behaviours.size() == 2);
  const auto& cell = std::get<CompartmentB>(p.behaviours[0].node);
  CHECK(cell.name.text == "Cell");
  const auto& ctx = std::get<ContextB>(cell.body[0].node);
  CHECK(ctx.contexts.size() == 2);
  const auto& d = std::get<Dependence>(ctx.body[0].node);
  CHECK(d.effect.states[0].polarity == Polarity::Negative);
  CHECK(d.effect.states[0].attribute->text == "x");
  const auto& obs = std::get<ObservationB>(p.behaviours[1].node);
  CHECK(obs.states.states[0].path.size() == 1);
  CHECK(count_dependences(p.behaviours) == 1);
}

TEST_CASE("free variables") {
  CHECK(texts(free_variables(parse_program("{ G1 => g2 }"))) == std::set<std::string>{"g2"});
  CHECK(texts(free_variables(parse_program("{ [light] { detect -> AHL(low) } }"))) ==
        std::set<std::string>{"detect", "light", "low"});
  CHECK(free_variables(parse_program("{ [Light] { Tetr => AHL(Low) } }")).empty());
}

TEST_CASE("syntax errors carry position and expectations") {
  try {
    parse_program("{ a -> }");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.position().line == 1);
    CHECK(e.position().column == 8);
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS(parse_program("{ l :: a, l :: b }"), DuplicateLabelError);
  CHECK_THROWS_AS(parse_program(""), SyntaxError);
  CHECK_THROWS_AS(parse_program("{ a -> b } x"), SyntaxError);
}

TEST_CASE("round trip of hand-written programs") {
  for (const char* src :
       {"{ g1 +> g2, g2 -| g1 }", "{ [light] { detect -> AHL(low) } }",
        "{ C { D { x.y -> ~z, t ~> u(~v) } }, o :: C.D.z }",
        "{ G :: {Low >< Mid >< High}, H :: {A < B < C}, K :: {Solo} }"}) {
    Program p = parse_program(src);
    CHECK(parse_program(render_program(p)) == p);
  }
}
