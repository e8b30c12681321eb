#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "generators.hpp"
#include "mdsep/errors.hpp"
#include "mdsep/normalize.hpp"
#include "oracles.hpp"

using namespace mdsep;
using namespace mdsep::testing;

namespace {

std::vector<std::string> box_names(const StringDiagram& d) {
  std::vector<std::string> out;
  for (const auto& b : d.body.boxes()) out.push_back(b.name);
  std::sort(out.begin(), out.end());
  return out;
}

// Boxes from which some path of box reads leads to the output leg.
std::vector<std::string> boxes_reaching_outputs(const StringDiagram& d) {
  const auto nw = d.body.wire_count();
  std::vector<char> live(nw, 0);
  for (auto w : d.outputs) live[w.value] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& b : d.body.boxes()) {
      const bool feeds = std::any_of(b.outputs.begin(), b.outputs.end(), [&](WireId w) { return live[w.value]; });
      if (!feeds) continue;
      for (auto w : b.inputs)
        if (!live[w.value]) live[w.value] = changed = true;
    }
  }
  std::vector<std::string> out;
  for (const auto& b : d.body.boxes())
    if (std::any_of(b.outputs.begin(), b.outputs.end(), [&](WireId w) { return live[w.value]; })) out.push_back(b.name);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Eliminable, WorkedExampleFindsOnlyTheLastBoxFirst) {
  auto d = discarded_tail_diagram();
  auto e = eliminable_boxes(d);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(d.body.box(e[0]).name, "b");

  auto n = normalize(d);
  EXPECT_EQ(box_names(n), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(n.body.wire_count(), 2u);
  EXPECT_TRUE(eliminable_boxes(n).empty());
  EXPECT_EQ(names(n, make_wire_set(n.outputs)), (std::vector<std::string>{"X", "Y"}));
  for (const auto& b : n.body.boxes()) EXPECT_TRUE(b.inputs.empty());
}

TEST(Eliminable, PureBloomHasNone) {
  EXPECT_TRUE(eliminable_boxes(diamond_model().diagram()).empty());
  EXPECT_TRUE(eliminable_boxes(instrumental_model().diagram()).empty());
}

TEST(Eliminable, BoxWithoutOutputs) {
  auto d = make_diagram({"a"}, {{"k", {"a"}, {}}}, {"a"}, {"a"});
  auto e = eliminable_boxes(d);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(normalize(d).body.box_count(), 0u);
}

TEST(Eliminable, MatchesPortScan) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = random_diagram(rng);
    EXPECT_EQ(eliminable_boxes(d), eliminable_by_scan(d));
  }
}

TEST(Normalize, FixedPointAndIdempotent) {
  auto phi = diamond_model();
  EXPECT_TRUE(iso_equal(normalize(phi.diagram()), phi.diagram()));
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_diagram(rng, 6, trial % 2 == 0);
    auto n = normalize(d);
    EXPECT_TRUE(validate_diagram(n).empty());
    EXPECT_TRUE(eliminable_boxes(n).empty());
    EXPECT_TRUE(iso_equal(normalize(n), n));
    EXPECT_EQ(n.inputs.size(), d.inputs.size());
    EXPECT_EQ(n.outputs.size(), d.outputs.size());
  }
}

TEST(Normalize, KeepsExactlyTheBoxesThatReachOutputs) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    auto d = random_diagram(rng);
    EXPECT_EQ(box_names(normalize(d)), boxes_reaching_outputs(d));
  }
}

TEST(Normalize, OrderIndependent) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto d = random_diagram(rng, 7, trial % 2 == 1);
    auto reference = normalize(d);
    for (int order = 0; order < 4; ++order) {
      Rng pick(rng());
      auto chooser = [&](std::size_t n) { return static_cast<std::size_t>(pick() % n); };
      EXPECT_TRUE(iso_equal(normalize(d, chooser), reference));
    }
    auto last = [](std::size_t n) { return n - 1; };
    EXPECT_TRUE(iso_equal(normalize(d, last), reference));
  }
}

TEST(Marginalize, AllOutputsIsIdentity) {
  auto phi = diamond_model();
  EXPECT_TRUE(iso_equal(marginalize(phi, phi.output_set()).diagram(), phi.diagram()));
}

TEST(Marginalize, DiamondDropsTheColliderBox) {
  auto phi = diamond_model();
  auto m = marginalize(phi, wires(phi, {"X", "Y", "Z"}));
  EXPECT_EQ(box_names(m.diagram()), (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_FALSE(m.body().find_wire("W"));
  EXPECT_TRUE(m.is_pure_bloom());
}

TEST(Marginalize, ColliderLeavesTwoDisconnectedBoxes) {
  auto phi = collider_model();
  auto m = marginalize(phi, wires(phi, {"X", "Y"}));
  EXPECT_EQ(box_names(m.diagram()), (std::vector<std::string>{"x", "y"}));
  for (const auto& b : m.body().boxes()) EXPECT_TRUE(b.inputs.empty());
}

TEST(Marginalize, RejectsNonOutputs) {
  auto phi = latent_fork_model();
  EXPECT_THROW(marginalize(phi, wires(phi, {"V"})), QueryError);
}

TEST(Marginalize, KeepsTheInputLeg) {
  auto phi = bell_model();
  auto m = marginalize(phi, wires(phi, {"A"}));
  EXPECT_EQ(m.inputs().size(), 2u);
  EXPECT_TRUE(m.body().find_wire("T"));
  EXPECT_EQ(box_names(m.diagram()), (std::vector<std::string>{"alice", "lambda"}));
}

TEST(Marginalize, NestedMarginals) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_causal_model(rng);
    WireSet w1, w2;
    for (auto w : phi.output_set())
      if (rng() % 3) {
        w1.push_back(w);
        if (rng() % 2) w2.push_back(w);
      }
    auto m1 = marginalize(phi, w1);
    WireSet w2_in_m1;
    for (auto w : w2) w2_in_m1.push_back(m1.body().wire(phi.body().wire_name(w)));
    EXPECT_TRUE(iso_equal(marginalize(m1, make_wire_set(w2_in_m1)).diagram(), marginalize(phi, w2).diagram()));
  }
}

TEST(Ancestry, Basics) {
  auto phi = instrumental_model();
  EXPECT_TRUE(ancestors(phi, {}).empty());
  EXPECT_EQ(ancestors(phi, wires(phi, {"B"})), wires(phi, {"B", "A", "Lambda", "X"}));
  EXPECT_EQ(descendants(phi, wires(phi, {"X"})), wires(phi, {"X", "A", "B"}));
  EXPECT_EQ(descendants(phi, wires(phi, {"Lambda"})), wires(phi, {"Lambda", "A", "B"}));
  EXPECT_THROW(ancestors(phi, {WireId{99}}), LookupError);
}

TEST(Ancestry, ClosureProperties) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_causal_model(rng);
    WireSet x, y;
    for (std::uint32_t w = 0; w < phi.wire_count(); ++w) {
      if (rng() % 2) x.push_back(WireId{w});
      if (rng() % 3 == 0) y.push_back(WireId{w});
    }
    const auto an = ancestors(phi, x), dec = descendants(phi, x);
    EXPECT_TRUE(is_subset(x, an));
    EXPECT_TRUE(is_subset(x, dec));
    EXPECT_EQ(ancestors(phi, an), an);
    EXPECT_EQ(descendants(phi, dec), dec);
    const auto xy = set_union(x, y);
    EXPECT_TRUE(is_subset(an, ancestors(phi, xy)));
    EXPECT_TRUE(is_subset(dec, descendants(phi, xy)));
    for (auto u : an)
      EXPECT_TRUE(std::any_of(x.begin(), x.end(), [&](WireId v) { return phi.reaches(u, v); }));
  }
}

TEST(PureBloom, Completion) {
  auto bell = bell_model();
  ASSERT_FALSE(bell.is_pure_bloom());
  auto pb = pure_bloom_version(bell);
  EXPECT_TRUE(pb.is_pure_bloom());
  EXPECT_EQ(pb.wire_count(), bell.wire_count());
  EXPECT_EQ(pb.outputs().size(), pb.wire_count());
  EXPECT_TRUE(pb.is_output(pb.body().wire("Lambda")));
  for (std::size_t i = 0; i < bell.outputs().size(); ++i) EXPECT_EQ(pb.outputs()[i], bell.outputs()[i]);

  auto diamond = diamond_model();
  EXPECT_TRUE(iso_equal(pure_bloom_version(diamond).diagram(), diamond.diagram()));
}

TEST(FinalBoxes, Examples) {
  auto name = [](const CausalModel& phi) {
    std::vector<std::string> out;
    for (auto b : final_boxes(phi)) out.push_back(phi.body().box(b).name);
    return out;
  };
  EXPECT_EQ(name(make_model({"A"}, {{"a", {}, {"A"}}}, {}, {"A"})), std::vector<std::string>{"a"});
  EXPECT_EQ(name(instrumental_model()), std::vector<std::string>{"b"});
  EXPECT_EQ(name(chain_model()), std::vector<std::string>{"y"});
  EXPECT_EQ(name(fork_model()), (std::vector<std::string>{"x", "y"}));
  EXPECT_THROW(final_boxes(bell_model()), ModelError);
}

TEST(FinalBoxes, NonEmptyOnRandomPureBlooms) {
  Rng rng(14);
  for (int trial = 0; trial < 200; ++trial) {
    auto phi = random_pure_bloom(rng);
    if (phi.box_count() == 0) continue;
    auto finals = final_boxes(phi);
    ASSERT_FALSE(finals.empty());
    for (auto b : finals)
      for (auto w : phi.body().box(b).outputs) EXPECT_TRUE(phi.consumers(w).empty());
  }
}

// On a pure bloom a box survives marginalization to W exactly when one of
// its outputs is an ancestor of W.
TEST(Marginalize, SurvivorsAreAncestorsOfTheKeptSet) {
  Rng rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    auto phi = random_pure_bloom(rng);
    WireSet keep;
    for (auto w : phi.output_set())
      if (rng() % 2) keep.push_back(w);
    const auto an = ancestors(phi, keep);
    const auto survive = surviving_boxes(phi, keep);
    const auto m = marginalize(phi, keep);
    std::size_t expected = 0;
    for (std::uint32_t b = 0; b < phi.box_count(); ++b) {
      const auto outs = out_set(phi.body(), BoxId{b});
      const bool hit = std::any_of(outs.begin(), outs.end(), [&](WireId w) { return contains(an, w); });
      EXPECT_EQ(static_cast<bool>(survive[b]), hit);
      EXPECT_EQ(m.body().find_box(phi.body().box(BoxId{b}).name).has_value(), hit);
      expected += hit;
    }
    EXPECT_EQ(m.box_count(), expected);
  }
}
