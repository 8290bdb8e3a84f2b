// Copyright 2026 The spatialrt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "spatialrt/checker.hpp"
#include "spatialrt/fixtures.hpp"
#include "spatialrt/formula.hpp"
#include "support.hpp"

namespace srt = spatialrt;
using F = srt::Formula;

namespace {

F p(const char* n) { return F::prop(n); }

srt::ClosureModel line_model(std::initializer_list<const char*> names, srt::Valuation (*val)(const srt::SpaceGraph&)) {
  auto g = srt::testing::line(names);
  auto v = val(g);
  return srt::ClosureModel(std::move(g), std::move(v));
}

srt::ClosureModel with_bikes(const std::vector<std::string>& at) {
  const auto m = srt::fixtures::mini_city();
  srt::PointSet bikes(m.space().size());
  for (const auto& a : at) bikes.insert(m.space().index(a));
  srt::Valuation dyn;
  dyn.emplace("bike", bikes);
  return m.with_dynamic(dyn);
}

}  // namespace

TEST(Parse, NearOfDisjunction) {
  const auto f = srt::parse_formula("taxi & N2 (ACCOMMOHOTEL | HEALTHHOSPITAL)");
  EXPECT_EQ(f, F::conj(p("taxi"), F::near(2, F::disj(p("ACCOMMOHOTEL"), p("HEALTHHOSPITAL")))));
}

TEST(Parse, TrueIsTop) { EXPECT_EQ(srt::parse_formula("true"), F::top()); }

TEST(Parse, ReachThroughMixfix) {
  const auto f = srt::parse_formula("a R(!b | (c & a)) d");
  EXPECT_EQ(f, F::reach_through(p("a"), F::disj(F::negate(p("b")), F::conj(p("c"), p("a"))), p("d")));
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(srt::parse_formula("a | b & c"), F::disj(p("a"), F::conj(p("b"), p("c"))));
  EXPECT_EQ(srt::parse_formula("a S b S c"), F::surround(p("a"), F::surround(p("b"), p("c"))));
  EXPECT_EQ(srt::parse_formula("a | b T c"), F::reach(F::disj(p("a"), p("b")), p("c")));
  EXPECT_EQ(srt::parse_formula("!C a"), F::negate(F::close(p("a"))));
  EXPECT_EQ(srt::parse_formula("N a"), F::near(1, p("a")));
  EXPECT_EQ(srt::parse_formula("false"), F::negate(F::top()));
}

TEST(Parse, PaperProperties) {
  for (const char* text : {srt::fixtures::kP1, srt::fixtures::kP2, srt::fixtures::kP3, srt::fixtures::kBikeToMainSquare}) {
    const auto f = srt::parse_formula(text);
    EXPECT_EQ(srt::parse_formula(srt::render(f)), f) << text;
  }
  EXPECT_EQ(srt::parse_formula(srt::fixtures::kP3).kind(), F::Kind::reach);
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    srt::parse_formula("a & (b | )");
    FAIL();
  } catch (const srt::FormulaSyntaxError& e) {
    EXPECT_EQ(e.position(), 9u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(srt::parse_formula(""), srt::FormulaSyntaxError);
  EXPECT_THROW(srt::parse_formula("N0 a"), srt::FormulaSyntaxError);
  EXPECT_THROW(srt::parse_formula("a R(b c"), srt::FormulaSyntaxError);
  EXPECT_THROW(srt::parse_formula("a b"), srt::FormulaSyntaxError);
  EXPECT_THROW(srt::parse_formula("a $ b"), srt::FormulaSyntaxError);
}

TEST(Parse, RenderRoundTripRandom) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto f = srt::testing::random_formula(rng, 4, 3, true);
    EXPECT_EQ(srt::parse_formula(srt::render(f)), f) << srt::render(f);
  }
}

TEST(Desugar, NearIsIteratedClosure) {
  EXPECT_EQ(srt::desugar(F::near(1, p("p"))), F::close(p("p")));
  EXPECT_EQ(srt::desugar(F::near(3, p("p"))), F::close(F::close(F::close(p("p")))));
}

TEST(Desugar, ReachShape) {
  const auto core = srt::desugar(F::reach(p("p"), p("q")));
  const auto expected = F::conj(
      p("p"), F::negate(F::surround(F::negate(p("q")), F::negate(srt::desugar(F::disj(p("p"), p("q")))))));
  EXPECT_EQ(core, expected);
  EXPECT_TRUE(core.is_core());
}

TEST(Desugar, ReachThroughShape) {
  const auto f = F::reach_through(p("a"), p("b"), p("c"));
  const auto expected = srt::desugar(F::reach(p("a"), F::conj(F::reach(p("b"), p("c")), F::reach(p("b"), p("a")))));
  EXPECT_EQ(srt::desugar(f), expected);
}

TEST(Desugar, OrIsDeMorgan) {
  EXPECT_EQ(srt::desugar(F::disj(p("a"), p("b"))), F::negate(F::conj(F::negate(p("a")), F::negate(p("b")))));
}

TEST(Desugar, Idempotent) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto d = srt::desugar(srt::testing::random_formula(rng, 4, 3, true));
    EXPECT_TRUE(d.is_core());
    EXPECT_EQ(srt::desugar(d), d);
  }
}

TEST(Sat, SurroundLineExamples) {
  auto m1 = line_model({"a", "b", "c"}, [](const srt::SpaceGraph& g) {
    return srt::Valuation{{"p", g.set_of({"b"})}, {"q", g.set_of({"a", "c"})}};
  });
  EXPECT_EQ(srt::sat(m1, srt::parse_formula("p S q")), m1.space().set_of({"b"}));

  auto m2 = line_model({"a", "b", "c", "d"}, [](const srt::SpaceGraph& g) {
    return srt::Valuation{{"p", g.set_of({"a", "b"})}};
  });
  EXPECT_TRUE(srt::sat(m2, srt::parse_formula("p S q")).empty());

  auto m3 = line_model({"a", "b", "c", "d"}, [](const srt::SpaceGraph& g) {
    return srt::Valuation{{"p", g.set_of({"a", "b"})}, {"q", g.set_of({"c"})}};
  });
  EXPECT_EQ(srt::sat(m3, srt::parse_formula("p S q")), m3.space().set_of({"a", "b"}));

  for (const auto* m : {&m1, &m2, &m3}) {
    EXPECT_EQ(srt::sat(*m, F::top()), m->space().full_set());
    EXPECT_TRUE(srt::sat(*m, F::negate(F::top())).empty());
    EXPECT_EQ(srt::oracle_sat(*m, srt::parse_formula("p S q")), srt::sat(*m, srt::parse_formula("p S q")));
  }
}

TEST(Sat, IsolatedPointSurrounds) {
  srt::SpaceGraph::Builder b;
  b.add_point("x");
  srt::ClosureModel m(b.build(), {{"p", srt::PointSet(1, {0})}});
  EXPECT_EQ(srt::oracle_sat(m, srt::parse_formula("p S q")).count(), 1u);
  EXPECT_EQ(srt::sat(m, srt::parse_formula("p S q")).count(), 1u);
}

TEST(Sat, UnknownPropositionIsEmpty) {
  const auto m = srt::fixtures::mini_city();
  EXPECT_FALSE(srt::check(m, p("unicorn")));
  EXPECT_TRUE(srt::check(m, F::negate(p("unicorn"))));
}

TEST(Sat, AlgebraicInvariants) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const auto m = srt::testing::random_model(rng, 20, 3);
    const auto f = srt::testing::random_formula(rng, 3);
    const auto g = srt::testing::random_formula(rng, 3);
    const auto sf = srt::sat(m, f);
    EXPECT_EQ(srt::sat(m, F::negate(F::negate(f))), sf);
    EXPECT_EQ(srt::sat(m, F::conj(f, f)), sf);
    EXPECT_EQ(srt::sat(m, F::disj(f, g)), sf | srt::sat(m, g));
    const auto sur = srt::sat(m, F::surround(f, g));
    EXPECT_TRUE(sur.is_subset_of(sf));
    if (srt::sat(m, F::negate(F::disj(f, g))).empty()) EXPECT_EQ(sur, sf);
    srt::PointSet prev = srt::sat(m, F::near(1, f));
    for (unsigned n = 2; n <= 4; ++n) {
      const auto cur = srt::sat(m, F::near(n, f));
      EXPECT_TRUE(prev.is_subset_of(cur));
      prev = cur;
    }
  }
}

TEST(Sat, DeterministicAndCached) {
  std::mt19937_64 rng(23);
  const auto m = srt::testing::random_model(rng, 40, 3);
  srt::SatCache cache(16);
  const auto f = srt::testing::random_formula(rng, 4, 3, true);
  const auto first = srt::sat(m, f, &cache);
  EXPECT_EQ(srt::sat(m, f, &cache), first);
  EXPECT_EQ(srt::sat(m, f), first);
  EXPECT_EQ(cache.hits(), 1u);
}

TEST(Oracle, RefusesLargeModels) {
  std::mt19937_64 rng(1);
  srt::ClosureModel m(srt::testing::random_graph(rng, 13, 0.2), {});
  EXPECT_THROW(srt::oracle_sat(m, F::top()), srt::OracleRefused);
  EXPECT_NO_THROW(srt::oracle_sat(m, F::top(), 13));
}

TEST(Oracle, MatchesSatOnSmallModels) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 150; ++i) {
    const auto m = srt::testing::random_model(rng, 12, 3, i % 4 != 0);
    const auto f = srt::testing::random_formula(rng, 3, 3, i % 2 == 0);
    EXPECT_EQ(srt::oracle_sat(m, f), srt::sat(m, f)) << srt::render(f);
  }
}

TEST(MiniCity, GoldenScenarios) {
  std::ifstream in(SPATIALRT_SOURCE_DIR "/tests/golden/mini_city.json");
  ASSERT_TRUE(in);
  const auto golden = nlohmann::json::parse(in);
  const auto f = srt::parse_formula(golden["formula"].get<std::string>());
  ASSERT_GE(golden["scenarios"].size(), 4u);
  for (const auto& sc : golden["scenarios"]) {
    const auto m = with_bikes(sc["bikes"].get<std::vector<std::string>>());
    const auto points = srt::sat(m, f);
    EXPECT_EQ(!points.empty(), sc["satisfied"].get<bool>()) << sc["name"];
    EXPECT_EQ(m.space().names_of(points), sc["points"].get<std::vector<std::string>>()) << sc["name"];
    EXPECT_EQ(srt::oracle_sat(m, f), points) << sc["name"];
  }
}

TEST(MiniCity, LoneBikeAtMuseumViolates) {
  EXPECT_FALSE(srt::check(with_bikes({"museum"}), srt::parse_formula(srt::fixtures::kBikeToMainSquare)));
  EXPECT_TRUE(srt::check(with_bikes({"bus_stop1"}), srt::parse_formula(srt::fixtures::kBikeToMainSquare)));
}
