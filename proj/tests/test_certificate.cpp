#include "doctest.h"
#include "helpers.hpp"
#include "reebext/certificate.hpp"
#include "reebext/dot.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

Certificate certify(const LabeledReebGraph& g) {
  auto v = decide(g);
  REQUIRE(v.solution);
  return make_certificate(g, *v.solution);
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("certificate text of the ball") {
  auto text = serialize_certificate(certify(testing::sphere('+', '-')));
  CHECK(text.rfind("reebext-certificate 1\n[instance]\n", 0) == 0);
  CHECK(text.find("transition 0 symbol=M+ in=- out=k0 drill=- split=-\n") != std::string::npos);
  CHECK(text.find("vedge E0 tail=0 head=1 segments=k0 genus=0\n") != std::string::npos);
  CHECK(text.find("step 1 slot=1 part=MOD(N-) attach=phi5:nu K=k0") != std::string::npos);
  CHECK(text.find("close pairs=-\n") != std::string::npos);
}

TEST_CASE("gamma lines name the matched vertices") {
  auto text = serialize_certificate(certify(testing::fixture("genus2_split")));
  CHECK(count(text, "\nmatch ") == 2);
  CHECK(text.find("match m4 -> g6 via E4,E5\n") != std::string::npos);
}

TEST_CASE("property: certificates round-trip byte for byte and re-verify") {
  std::vector<LabeledReebGraph> graphs = testing::small_instances();
  for (const char* f : {"sphere_pm", "sphere_mp", "example2", "example3", "torus", "genus2_split"})
    graphs.push_back(testing::fixture(f));
  int checked = 0;
  for (const auto& g : graphs) {
    auto v = decide(g);
    if (!v.solution) continue;
    auto cert = make_certificate(g, *v.solution);
    auto text = serialize_certificate(cert);
    auto back = parse_certificate(text);
    CHECK(serialize_certificate(back) == text);
    CHECK(back.collapse == cert.collapse);
    CHECK(back.labels == cert.labels);
    CHECK(back.gamma == cert.gamma);
    CHECK(back.trace == cert.trace);
    CHECK(reverify(back).empty());
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("reverify catches tampering") {
  const auto text = serialize_certificate(certify(testing::fixture("genus2_split")));

  // A genus label that breaks the rule at a G+.
  auto genus = replace_once(text, "segments=k2 genus=1", "segments=k2 genus=0");
  CHECK_FALSE(reverify(parse_certificate(genus)).empty());

  // A gamma path that does not reach its sink.
  auto gamma = replace_once(text, "via E4,E5", "via E4");
  CHECK_FALSE(reverify(parse_certificate(gamma)).empty());

  // A trace step whose data disagrees with the collapse.
  auto step = replace_once(text, "R:r9", "R:r8");
  CHECK_FALSE(reverify(parse_certificate(step)).empty());

  // A V edge that does not follow from the collapse is a parse error.
  auto vedge = replace_once(text, "vedge E0 tail=0 head=1", "vedge E0 tail=0 head=2");
  CHECK_THROWS_AS(parse_certificate(vedge), ParseError);
}

TEST_CASE("malformed certificates") {
  CHECK_THROWS_AS(parse_certificate(""), ParseError);
  CHECK_THROWS_AS(parse_certificate("reebext-certificate 2\n"), ParseError);
  const auto text = serialize_certificate(certify(testing::sphere('-', '+')));
  CHECK_THROWS_AS(parse_certificate(replace_once(text, "symbol=M-", "symbol=Q-")), ParseError);
  CHECK_THROWS_AS(parse_certificate(replace_once(text, "pair k2 = k0", "pair k2 k0")), ParseError);
  CHECK_THROWS_AS(parse_certificate(replace_once(text, "[trace]", "[notes]")), ParseError);
  try {
    parse_certificate(replace_once(text, "sign=+", "sign=*"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);  // the line inside the whole certificate
  }
}

TEST_CASE("DOT for W_f") {
  auto dot = emit_dot(testing::sphere('+', '-'));
  CHECK(dot.rfind("digraph wf {", 0) == 0);
  CHECK(count(dot, "[label=\"+\"") == 1);
  CHECK(count(dot, "[label=\"-\"") == 1);
  CHECK(count(dot, " -> ") == 1);
  CHECK(dot.find("wraps=0") != std::string::npos);

  auto torus = emit_dot(testing::fixture("torus"));
  CHECK(torus.find("shape=circle") != std::string::npos);
  CHECK(torus.find("c0 -> c0 [label=\"degree=1\"]") != std::string::npos);
}

TEST_CASE("DOT for V and the collapse") {
  auto pm = certify(testing::sphere('+', '-'));
  auto dot = emit_dot(pm.v, pm.labels);
  CHECK(count(dot, "xlabel=\"slot ") == 2);
  CHECK(count(dot, " -> ") == 1);
  CHECK(dot.find("label=\"g=0\"") != std::string::npos);

  auto ex2 = certify(testing::fixture("example2"));
  auto path = emit_dot(ex2.v, ex2.labels);
  CHECK(count(path, "xlabel=\"slot ") == 4);
  CHECK(path.find("s0 -> s1") != std::string::npos);
  CHECK(path.find("s1 -> s2") != std::string::npos);
  CHECK(path.find("s2 -> s3") != std::string::npos);

  auto both = emit_dot(ex2.graph, ex2.v, ex2.labels);
  CHECK(count(both, "subgraph cluster_") == 2);
  CHECK(count(both, "style=dashed") == 4);
  CHECK(both == emit_dot(ex2.graph, ex2.v, ex2.labels));
}
