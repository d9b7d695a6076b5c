#include <doctest.h>

#include <algorithm>
#include <random>

#include "beliefnet/expert_fusion.hpp"
#include "beliefnet/io.hpp"
#include "oracles.hpp"

using namespace beliefnet;

namespace {

const Frame kAB({"A", "B"});
const Frame kSeven({"A", "B", "C", "D", "E", "F", "G"});

// The rock/sand example uses direct certainties 0.6 and 0.4 rather than the
// three-level scale, so encode them through custom weights.
FusionOptions worked_options() {
  FusionOptions o;
  o.weights = {0.6, 0.4, 0.2};
  return o;
}

std::vector<TileAnnotation> worked_experts() {
  return {
      {"E1", {{"A", Certainty::sure, 1.0}}},
      {"E2", {{"A", Certainty::sure, 0.5}, {"B", Certainty::moderately_sure, 0.5}}},
  };
}

}  // namespace

TEST_CASE("certainty weights") {
  const CertaintyWeights w;
  CHECK(w(Certainty::sure) == doctest::Approx(2.0 / 3.0));
  CHECK(w(Certainty::moderately_sure) == 0.5);
  CHECK(w(Certainty::not_sure) == doctest::Approx(1.0 / 3.0));
  CHECK_NOTHROW(w.validate());
  CHECK_THROWS_AS((CertaintyWeights{0.5, 0.5, 0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((CertaintyWeights{1.5, 0.5, 0.1}.validate()), std::invalid_argument);
  CHECK(parse_certainty("moderately_sure") == Certainty::moderately_sure);
  CHECK_THROWS_AS(parse_certainty("maybe"), std::invalid_argument);
}

TEST_CASE("annotation_to_mass reproduces the two-expert bbas") {
  const auto experts = worked_experts();
  const auto m1 = annotation_to_mass(experts[0], kAB, worked_options());
  CHECK(m1.mass("A") == doctest::Approx(0.6));
  CHECK(m1.mass("B") == 0.0);
  CHECK(m1.mass("A|B") == doctest::Approx(0.4));
  const auto m2 = annotation_to_mass(experts[1], kAB, worked_options());
  CHECK(m2.mass("A") == doctest::Approx(0.3));
  CHECK(m2.mass("B") == doctest::Approx(0.2));
  CHECK(m2.mass("A|B") == doctest::Approx(0.5));

  CHECK(annotation_to_mass({"E", {}}, kAB) == vacuous(kAB));
}

TEST_CASE("annotation_to_mass sums certainty levels of one class") {
  const TileAnnotation a{"E1",
                         {{"A", Certainty::sure, 0.3}, {"A", Certainty::not_sure, 0.3}, {"C", Certainty::moderately_sure, 0.2}}};
  const auto m = annotation_to_mass(a, kSeven);
  CHECK(m.mass("A") == doctest::Approx(0.3 * 2.0 / 3.0 + 0.3 / 3.0));
  CHECK(m.mass("C") == doctest::Approx(0.1));
  CHECK(m.mass(kSeven.full()) == doctest::Approx(1.0 - 0.3 - 0.1));
  CHECK(validate_mass(m).ok());
}

TEST_CASE("shadow as ignorance") {
  const TileAnnotation a{"E1", {{"A", Certainty::sure, 0.5}, {"F", Certainty::sure, 0.5}}};
  FusionOptions o;
  o.shadow_as_ignorance = true;
  const auto m = annotation_to_mass(a, kSeven, o);
  CHECK(m.mass("F") == 0.0);
  CHECK(m.mass("A") == doctest::Approx(1.0 / 3.0));
  CHECK(m.mass(kSeven.full()) == doctest::Approx(2.0 / 3.0));
  const auto plain = annotation_to_mass(a, kSeven);
  CHECK(plain.mass("F") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("annotation_to_mass errors") {
  CHECK_THROWS_AS(annotation_to_mass({"E", {{"Z", Certainty::sure, 0.5}}}, kAB), std::invalid_argument);
  CHECK_THROWS_AS(annotation_to_mass({"E", {{"A", Certainty::sure, 0.7}, {"B", Certainty::sure, 0.7}}}, kAB),
                  std::invalid_argument);
  CHECK_THROWS_AS(annotation_to_mass({"E", {{"A", Certainty::sure, -0.1}}}, kAB), std::invalid_argument);
  FusionOptions heavy;
  heavy.weights.sure = 1.0;
  CHECK_NOTHROW(annotation_to_mass({"E", {{"A", Certainty::sure, 1.0}}}, kAB, heavy));
}

TEST_CASE("annotation bbas are valid with focal sets on singletons and the frame") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cls(0, 6), cert(0, 2), count(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    TileAnnotation a{"E", {}};
    double left = 1.0;
    for (int k = count(gen); k > 0; --k) {
      const double p = left * u(gen);
      left -= p;
      a.entries.push_back({kSeven.label(static_cast<std::size_t>(cls(gen))), static_cast<Certainty>(cert(gen)), p});
    }
    const auto m = annotation_to_mass(a, kSeven);
    REQUIRE(validate_mass(m).ok());
    for (const auto& [set, v] : m.focal_elements()) REQUIRE((set.is_singleton() || set == kSeven.full()));

    // raising a weight never lowers that class's mass and never raises m(Theta)
    FusionOptions raised;
    raised.weights.sure = 0.9;
    const auto m2 = annotation_to_mass(a, kSeven, raised);
    for (FocalSet s : kSeven.singletons()) REQUIRE(m2.mass(s) >= m.mass(s) - 1e-15);
    REQUIRE(m2.mass(kSeven.full()) <= m.mass(kSeven.full()) + 1e-15);
  }
}

TEST_CASE("fuse_tile") {
  const auto experts = worked_experts();
  const auto c = fuse_tile(experts, CombinationRule::conjunctive, kAB, worked_options());
  CHECK(c.empty_mass() == doctest::Approx(0.12));
  CHECK(c.mass("A") == doctest::Approx(0.6));
  CHECK(c.mass("B") == doctest::Approx(0.08));
  CHECK(c.mass("A|B") == doctest::Approx(0.2));
  const auto p = fuse_tile(experts, CombinationRule::pcr, kAB, worked_options());
  CHECK(p.mass("A") == doctest::Approx(0.69));
  CHECK(p.mass("B") == doctest::Approx(0.11));
  CHECK(p.mass("A|B") == doctest::Approx(0.2));

  for (auto rule : {CombinationRule::conjunctive, CombinationRule::dubois_prade, CombinationRule::pcr})
    CHECK(fuse_tile(std::span(experts.data(), 1), rule, kAB, worked_options()) ==
          annotation_to_mass(experts[0], kAB, worked_options()));

  FusionOptions zero;
  zero.weights = {0.0, 0.0, 0.0};
  for (auto rule : {CombinationRule::conjunctive, CombinationRule::dubois_prade, CombinationRule::pcr})
    CHECK(fuse_tile(experts, rule, kAB, zero) == vacuous(kAB));

  CHECK_THROWS_AS(fuse_tile({}, CombinationRule::pcr, kAB), std::invalid_argument);
}

TEST_CASE("reference map of the worked example") {
  ReferenceOptions o;
  o.rule = CombinationRule::pcr;
  o.fusion = worked_options();
  o.compare_with = CombinationRule::conjunctive;
  const std::vector<AnnotatedTile> tiles{{"t0", worked_experts()}};
  const auto map = build_reference_map(tiles, kAB, o);
  REQUIRE(map.entries.size() == 1);
  CHECK(map.entries[0].decision == kAB.parse("A"));
  CHECK(map.entries[0].conflict == doctest::Approx(0.12));
  CHECK(map.mean_conflict == doctest::Approx(0.12));
  CHECK(map.disagreement_rate.value() == 0.0);
  CHECK(reference_csv(map) == "tile_id,decided_label,conflict\nt0,A,0.12\n");
}

TEST_CASE("identical certain experts never disagree across rules") {
  std::vector<AnnotatedTile> tiles;
  for (int t = 0; t < 20; ++t) {
    const std::string label = kSeven.label(static_cast<std::size_t>(t % 7));
    AnnotatedTile tile{"t" + std::to_string(t), {}};
    for (int e = 0; e < 3; ++e) tile.experts.push_back({"E" + std::to_string(e), {{label, Certainty::sure, 1.0}}});
    tiles.push_back(tile);
  }
  ReferenceOptions o;
  o.rule = CombinationRule::conjunctive;
  o.compare_with = CombinationRule::pcr;
  const auto map = build_reference_map(tiles, kSeven, o);
  CHECK(map.disagreement_rate.value() == 0.0);
  CHECK(map.mean_conflict == 0.0);
  for (std::size_t i = 0; i < tiles.size(); ++i) CHECK(map.frame.format(map.entries[i].decision) == kSeven.label(i % 7));
}

namespace {

std::vector<AnnotatedTile> random_corpus(std::mt19937_64& gen, int tiles) {
  std::uniform_int_distribution<int> cls(0, 3), cert(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<AnnotatedTile> out;
  for (int t = 0; t < tiles; ++t) {
    AnnotatedTile tile{"t" + std::to_string(t), {}};
    for (int e = 0; e < 3; ++e) {
      const double p = u(gen) < 0.3 ? 0.5 + 0.5 * u(gen) : 1.0;
      TileAnnotation a{"E" + std::to_string(e), {{kSeven.label(std::size_t(cls(gen))), Certainty(cert(gen)), p}}};
      if (p < 1.0) a.entries.push_back({kSeven.label(std::size_t(cls(gen))), Certainty(cert(gen)), 1.0 - p});
      tile.experts.push_back(a);
    }
    out.push_back(tile);
  }
  return out;
}

}  // namespace

TEST_CASE("disagreement rate equals a direct recount") {
  std::mt19937_64 gen(31);
  const auto tiles = random_corpus(gen, 200);
  ReferenceOptions o;
  o.rule = CombinationRule::conjunctive;
  o.compare_with = CombinationRule::pcr;
  const auto map = build_reference_map(tiles, kSeven, o);

  ReferenceOptions pcr_only;
  const auto pcr_map = build_reference_map(tiles, kSeven, pcr_only);
  int differ = 0;
  double conflict_sum = 0.0;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto c = fuse_tile(tiles[i].experts, CombinationRule::conjunctive, kSeven);
    const auto p = fuse_tile(tiles[i].experts, CombinationRule::pcr, kSeven);
    if (decide(c, DecisionCriterion::max_betp) != decide(p, DecisionCriterion::max_betp)) ++differ;
    conflict_sum += c.empty_mass();
  }
  CHECK(map.disagreement_rate.value() == doctest::Approx(differ / 200.0).epsilon(1e-15));
  CHECK(decision_disagreement(map, pcr_map) == doctest::Approx(differ / 200.0).epsilon(1e-15));
  CHECK(map.mean_conflict == doctest::Approx(conflict_sum / 200.0).epsilon(1e-12));
}

TEST_CASE("decisions do not depend on expert order") {
  std::mt19937_64 gen(77);
  auto tiles = random_corpus(gen, 100);
  for (auto rule : {CombinationRule::conjunctive, CombinationRule::dubois_prade, CombinationRule::pcr}) {
    ReferenceOptions o;
    o.rule = rule;
    const auto forward = build_reference_map(tiles, kSeven, o);
    auto shuffled = tiles;
    for (auto& t : shuffled) std::reverse(t.experts.begin(), t.experts.end());
    const auto backward = build_reference_map(shuffled, kSeven, o);
    CHECK(decision_disagreement(forward, backward) == 0.0);
  }
}

TEST_CASE("merge_classes") {
  const Frame abc({"A", "B", "C"});
  const std::map<std::string, std::string> cobble{{"C", "A|B"}};
  CHECK(merge_classes(categorical(abc, abc.parse("C")), cobble) == categorical(abc, abc.parse("A|B")));

  const Frame abcd({"A", "B", "C", "D"});
  const auto m = MassFunction::from_labels(abcd, {{"A", 0.3}, {"C", 0.2}, {"A|B|C|D", 0.5}});
  CHECK(merge_classes(m, {}) == m);
  const auto merged = merge_classes(m, cobble);
  CHECK(merged.mass("A|B") == doctest::Approx(m.mass("A|B") + 0.2));
  CHECK(merged.mass("A") == doctest::Approx(0.3));
  CHECK(merged.mass("A|B|D") == doctest::Approx(0.5));
  CHECK(merged.total() == doctest::Approx(1.0).epsilon(1e-12));

  // onto a smaller target frame
  const Frame ab({"A", "B"});
  const auto small = MassFunction::from_labels(abc, {{"A", 0.3}, {"C", 0.2}, {"A|B|C", 0.5}});
  const auto onto = merge_classes(small, cobble, ab);
  CHECK(onto.mass("A") == doctest::Approx(0.3));
  CHECK(onto.mass("A|B") == doctest::Approx(0.7));

  // a compound candidate can win the decision after merging
  const std::vector<FocalSet> candidates{abcd.parse("A"), abcd.parse("B"), abcd.parse("A|B")};
  CHECK(decide(merged, DecisionCriterion::max_bel, candidates) == abcd.parse("A|B"));

  CHECK_THROWS_AS(merge_classes(m, {{"Z", "A"}}), std::invalid_argument);
  CHECK_THROWS_AS(merge_classes(m, {{"C", "Q"}}), std::invalid_argument);
  CHECK_THROWS_AS(merge_classes(m, {{"C", "{}"}}), std::invalid_argument);
  CHECK_THROWS_AS(merge_classes(small, {}, ab), std::invalid_argument);  // C has no image in {A,B}

  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = oracle::random_mass(abc, gen, true);
    REQUIRE(std::abs(merge_classes(r, cobble).total() - r.total()) < 1e-12);
  }
}

TEST_CASE("boundary pixels split half and half") {
  std::vector<PixelLabel> row;
  for (int i = 0; i < 6; ++i) row.push_back({"A", Certainty::sure, std::nullopt});
  for (int i = 0; i < 2; ++i) row.push_back({"A", Certainty::not_sure, std::string("B")});
  for (int i = 0; i < 2; ++i) row.push_back({"B", Certainty::moderately_sure, std::nullopt});
  const auto entries = proportions_from_pixels(row);
  double total = 0.0;
  std::map<std::pair<std::string, Certainty>, double> got;
  for (const auto& e : entries) {
    got[{e.label, e.certainty}] = e.proportion;
    total += e.proportion;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(got[{"A", Certainty::sure}] == doctest::Approx(0.6));
  CHECK(got[{"A", Certainty::not_sure}] == doctest::Approx(0.1));
  CHECK(got[{"B", Certainty::not_sure}] == doctest::Approx(0.1));
  CHECK(got[{"B", Certainty::moderately_sure}] == doctest::Approx(0.2));
  CHECK(proportions_from_pixels({}).empty());
}

TEST_CASE("annotation JSON") {
  const auto text = R"({"frame":["A","B"],"tiles":[{"id":"r3c7","experts":[
      {"expert":"E1","entries":[{"class":"A","certainty":"sure","p":0.5},{"class":"B","certainty":"not_sure","p":0.5}]},
      {"expert":"E2","entries":[]}]}]})";
  const auto set = annotations_from_json(nlohmann::json::parse(text));
  REQUIRE(set.tiles.size() == 1);
  CHECK(set.tiles[0].id == "r3c7");
  CHECK(set.tiles[0].experts.size() == 2);
  CHECK(set.tiles[0].experts[0].entries[1].certainty == Certainty::not_sure);
  const auto again = annotations_from_json(annotations_to_json(set));
  CHECK(annotations_to_json(again) == annotations_to_json(set));

  CHECK_THROWS_AS(annotations_from_json(nlohmann::json::parse(
                      R"({"frame":["A"],"tiles":[{"id":"x","experts":[{"expert":"E","entries":[{"class":"Q","certainty":"sure","p":1}]}]}]})")),
                  FormatError);
  CHECK_THROWS_AS(annotations_from_json(nlohmann::json::parse(
                      R"({"frame":["A"],"tiles":[{"id":"x","experts":[{"expert":"E","entries":[{"class":"A","certainty":"meh","p":1}]}]}]})")),
                  FormatError);
}

TEST_CASE("reference sidecar round trip") {
  ReferenceOptions o;
  o.fusion = worked_options();
  const std::vector<AnnotatedTile> tiles{{"t0", worked_experts()}, {"t1", {worked_experts()[0]}}};
  const auto map = build_reference_map(tiles, kAB, o);
  const auto back = fused_tiles_from_json(reference_to_json(map));
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "t0");
  CHECK(back[0].mass == map.entries[0].fused);
  CHECK(back[1].mass == map.entries[1].fused);
}
