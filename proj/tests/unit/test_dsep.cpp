#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "generators.hpp"
#include "mdsep/dsep.hpp"
#include "mdsep/errors.hpp"
#include "mdsep/markov.hpp"
#include "mdsep/normalize.hpp"
#include "oracles.hpp"

using namespace mdsep;
using namespace mdsep::testing;

namespace {

DSepQuery query(const CausalModel& phi, std::vector<std::string> x, std::vector<std::string> y,
                std::vector<std::string> z) {
  return {wires(phi, x), wires(phi, y), wires(phi, z)};
}

bool sep(const CausalModel& phi, std::vector<std::string> x, std::vector<std::string> y, std::vector<std::string> z) {
  return d_separated_categorical(phi, query(phi, x, y, z));
}

bool reachable(const StringDiagram& d, const char* a, const char* b) {
  return undirected_reachable(d, d.body.wire(a), d.body.wire(b));
}

// All (X, Y, Z) disjoint over the outputs, X and Y nonempty.
std::vector<DSepQuery> all_queries(const CausalModel& phi) {
  std::vector<DSepQuery> out;
  MarkovOptions opts;
  opts.exhaustive_limit = 16;
  enumerate_dsep_triples(phi, opts, [&](const DSepQuery& q, bool) {
    if (!q.x.empty() && !q.y.empty()) out.push_back(q);
  });
  return out;
}

}  // namespace

TEST(Cut, EmptyCutKeepsTheDiagram) {
  auto phi = diamond_model();
  auto c = cut(phi, {});
  EXPECT_EQ(c.body, phi.body());
  EXPECT_EQ(c.inputs, phi.inputs());
  EXPECT_EQ(c.outputs, phi.outputs());
  EXPECT_TRUE(validate_diagram(c).empty());
}

TEST(Cut, LowersArities) {
  auto phi = diamond_model();
  auto c = cut(phi, wires(phi, {"W", "Z"}));
  EXPECT_EQ(c.body.box_count(), 4u);
  EXPECT_EQ(c.body.wire_count(), 2u);
  const Box& x = c.body.box(c.body.box_id("x"));
  EXPECT_TRUE(x.inputs.empty());
  const Box& w = c.body.box(c.body.box_id("w"));
  EXPECT_EQ(w.inputs.size(), 2u);
  EXPECT_TRUE(w.outputs.empty());
  EXPECT_EQ(c.outputs.size(), 2u);
  EXPECT_TRUE(validate_diagram(c).empty());
  EXPECT_THROW(cut(latent_fork_model(), wires(latent_fork_model(), {"V"})), QueryError);
}

TEST(Cut, DiamondVerdictsByConstruction) {
  auto phi = diamond_model();
  auto marginal = marginalize(phi, wires(phi, {"X", "Y", "Z"}));
  auto c = cut(marginal, wires(marginal, {"Z"}));
  EXPECT_FALSE(reachable(c, "X", "Y"));

  auto c2 = cut(phi, wires(phi, {"W", "Z"}));
  EXPECT_TRUE(reachable(c2, "X", "Y"));
}

TEST(Reachability, Basics) {
  auto phi = diamond_model();
  EXPECT_TRUE(reachable(phi.diagram(), "X", "X"));
  auto two = make_diagram({"a", "b"}, {{"f", {}, {"a"}}, {"g", {}, {"b"}}}, {}, {"a", "b"});
  EXPECT_FALSE(reachable(two, "a", "b"));
  EXPECT_THROW(undirected_reachable(two, WireId{0}, WireId{7}), LookupError);

  // Through a box between two of its inputs.
  auto collider = collider_model();
  auto c = cut(collider, wires(collider, {"Z"}));
  EXPECT_TRUE(reachable(c, "X", "Y"));
}

TEST(Categorical, ForkAndChain) {
  EXPECT_TRUE(sep(fork_model(), {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(sep(fork_model(), {"X"}, {"Y"}, {}));
  EXPECT_TRUE(sep(chain_model(), {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(sep(chain_model(), {"X"}, {"Y"}, {}));
}

TEST(Categorical, Collider) {
  auto phi = collider_model();
  EXPECT_FALSE(sep(phi, {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(sep(phi, {"X"}, {"Y"}, {"W"}));
  EXPECT_FALSE(sep(phi, {"X"}, {"Y"}, {"W", "Z"}));
  EXPECT_TRUE(sep(phi, {"X"}, {"Y"}, {}));
}

TEST(Categorical, LatentFork) {
  auto phi = latent_fork_model();
  EXPECT_TRUE(sep(phi, {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(sep(phi, {"X"}, {"Y"}, {"Z", "W"}));
  auto marginal = marginalize(phi, wires(phi, {"X", "Y", "Z"}));
  EXPECT_FALSE(marginal.body().find_box("s"));
  EXPECT_TRUE(marginal.body().find_box("r"));
}

TEST(Categorical, Instrumental) {
  auto phi = instrumental_model();
  EXPECT_TRUE(sep(phi, {"X"}, {"B"}, {"A", "Lambda"}));
  EXPECT_TRUE(sep(phi, {"X"}, {"Lambda"}, {}));
  EXPECT_FALSE(sep(phi, {"X"}, {"B"}, {"A"}));
  EXPECT_FALSE(sep(phi, {"X"}, {"Lambda"}, {"A"}));
}

TEST(Categorical, Diamond) {
  auto phi = diamond_model();
  EXPECT_TRUE(sep(phi, {"X"}, {"Y"}, {"Z"}));
  EXPECT_FALSE(sep(phi, {"X"}, {"Y"}, {"W", "Z"}));
  EXPECT_TRUE(sep(phi, {}, {"Y"}, {"Z"}));
  EXPECT_TRUE(sep(phi, {"X"}, {}, {}));
}

TEST(Categorical, InvalidQueries) {
  auto phi = latent_fork_model();
  EXPECT_THROW(sep(phi, {"X"}, {"X"}, {}), QueryError);
  EXPECT_THROW(sep(phi, {"X"}, {"Y"}, {"V"}), QueryError);
}

TEST(Categorical, FastPathMatchesConstruction) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto phi = random_causal_model(rng);
    for (int k = 0; k < 10; ++k) {
      auto q = random_query(rng, phi.output_set());
      EXPECT_EQ(d_separated_categorical(phi, q), d_separated_by_construction(phi, q));
    }
  }
}

TEST(Categorical, SymmetricAndMonotone) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_causal_model(rng);
    for (int k = 0; k < 10; ++k) {
      auto q = random_query(rng, phi.output_set());
      const bool s = d_separated_categorical(phi, q);
      EXPECT_EQ(s, d_separated_categorical(phi, {q.y, q.x, q.z}));
      if (s && !q.x.empty()) {
        DSepQuery smaller = q;
        smaller.x.erase(smaller.x.begin() + static_cast<long>(rng() % smaller.x.size()));
        EXPECT_TRUE(d_separated_categorical(phi, smaller));
      }
    }
  }
}

TEST(Categorical, GraphoidAxioms) {
  Rng rng(33);
  for (int trial = 0; trial < 150; ++trial) {
    auto phi = random_pure_bloom(rng);
    for (int k = 0; k < 20; ++k) {
      // Split the outputs into X, Y, W, Z and the rest.
      DSepQuery q;
      WireSet w;
      for (auto v : phi.output_set()) {
        switch (rng() % 5) {
          case 0: q.x.push_back(v); break;
          case 1: q.y.push_back(v); break;
          case 2: w.push_back(v); break;
          case 3: q.z.push_back(v); break;
          default: break;
        }
      }
      auto s = [&](const WireSet& a, const WireSet& b, const WireSet& c) {
        return d_separated_categorical(phi, {a, b, c});
      };
      const auto yw = set_union(q.y, w), zw = set_union(q.z, w), zy = set_union(q.z, q.y);
      if (s(q.x, yw, q.z)) {
        EXPECT_TRUE(s(q.x, q.y, q.z)) << "decomposition";
        EXPECT_TRUE(s(q.x, q.y, zw)) << "weak union";
      }
      if (s(q.x, q.y, q.z) && s(q.x, w, zy)) EXPECT_TRUE(s(q.x, yw, q.z)) << "contraction";
    }
  }
}

// On a pure bloom, a d-separated partition of the outputs never splits a
// box across X and Y.
TEST(Categorical, SeparatedPartitionsRespectBoxes) {
  Rng rng(34);
  int separated = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_pure_bloom(rng);
    for (int k = 0; k < 20; ++k) {
      DSepQuery q;
      for (auto v : phi.output_set()) (rng() % 3 == 0 ? q.x : rng() % 2 ? q.y : q.z).push_back(v);
      if (!d_separated_categorical(phi, q)) continue;
      ++separated;
      const auto xz = set_union(q.x, q.z), yz = set_union(q.y, q.z);
      for (std::uint32_t b = 0; b < phi.box_count(); ++b) {
        auto touched = set_union(make_wire_set(in_set(phi.body(), BoxId{b})), make_wire_set(out_set(phi.body(), BoxId{b})));
        EXPECT_TRUE(is_subset(touched, xz) || is_subset(touched, yz));
      }
    }
  }
  EXPECT_GT(separated, 100);
}

TEST(UnderlyingDag, Instrumental) {
  auto phi = instrumental_model();
  auto dag = underlying_dag(phi);
  auto id = [&](const char* n) { return phi.body().wire(n).value; };
  auto parents = [&](const char* n) {
    auto p = dag.parents[id(n)];
    std::sort(p.begin(), p.end());
    return p;
  };
  auto sorted = [](std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_TRUE(parents("X").empty());
  EXPECT_TRUE(parents("Lambda").empty());
  EXPECT_EQ(parents("A"), sorted({id("X"), id("Lambda")}));
  EXPECT_EQ(parents("B"), sorted({id("A"), id("Lambda")}));
}

TEST(UnderlyingDag, DiamondAndSingleBox) {
  auto phi = diamond_model();
  auto dag = underlying_dag(phi);
  std::size_t edges = 0;
  for (const auto& c : dag.children) edges += c.size();
  EXPECT_EQ(edges, 4u);
  EXPECT_EQ(dag.parents[phi.body().wire("W").value].size(), 2u);

  auto single = make_model({"A"}, {{"a", {}, {"A"}}}, {}, {"A"});
  auto g = underlying_dag(single);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_TRUE(g.parents[0].empty() && g.children[0].empty());

  auto repeated = make_model({"A", "B"}, {{"a", {}, {"A"}}, {"b", {"A", "A"}, {"B"}}}, {}, {"A", "B"});
  EXPECT_EQ(underlying_dag(repeated).parents[1].size(), 1u);
}

TEST(UnderlyingDag, Obstructions) {
  EXPECT_FALSE(dag_obstruction(diamond_model()));
  EXPECT_TRUE(dag_obstruction(bell_model()));
  EXPECT_TRUE(dag_obstruction(latent_fork_model()));
  EXPECT_TRUE(dag_obstruction(two_box_model()));
  EXPECT_THROW(underlying_dag(bell_model()), ModelError);
  EXPECT_THROW(d_separated_classical(two_box_model(), query(two_box_model(), {"X"}, {"Y"}, {})), ModelError);
}

TEST(Classical, Diamond) {
  auto phi = diamond_model();
  EXPECT_TRUE(d_separated_classical(phi, query(phi, {"X"}, {"Y"}, {"Z"})));
  EXPECT_FALSE(d_separated_classical(phi, query(phi, {"X"}, {"Y"}, {"W", "Z"})));
  // Conditioning on a descendant of the collider opens it too.
  auto collider = collider_model();
  EXPECT_FALSE(d_separated_classical(collider, query(collider, {"X"}, {"Y"}, {"W"})));
  EXPECT_TRUE(d_separated_classical(collider, query(collider, {"X"}, {"Y"}, {})));
}

TEST(Classical, MatchesPathEnumeration) {
  Rng rng(35);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    auto phi = random_dag_model(rng, n, 0.2 + 0.1 * static_cast<double>(rng() % 5));
    auto dag = underlying_dag(phi);
    for (int k = 0; k < 25; ++k) {
      auto q = random_query(rng, phi.output_set());
      ASSERT_EQ(d_separated_classical(dag, q.x, q.y, q.z), paths_d_separated(dag, q.x, q.y, q.z)) << "trial " << trial;
    }
  }
}

TEST(Equivalence, WorkedExamplesOnEveryQuery) {
  for (const auto& phi : {diamond_model(), fork_model(), chain_model(), collider_model(), instrumental_model()}) {
    for (const auto& q : all_queries(phi)) {
      auto r = equivalence_check(phi, q);
      EXPECT_TRUE(r.agree());
    }
  }
}

TEST(Equivalence, RandomDags) {
  Rng rng(36);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_dag_model(rng, 1 + rng() % 6);
    for (const auto& q : all_queries(phi)) ASSERT_TRUE(equivalence_check(phi, q).agree()) << "trial " << trial;
  }
}
