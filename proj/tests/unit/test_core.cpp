#include <doctest.h>

#include <set>

#include "golden.hpp"
#include "mewl/core.hpp"
#include "mewl/rng.hpp"

using namespace mewl;

TEST_CASE("attribute values round-trip through codes and names") {
  CHECK(AttributeValue::all().size() == 16);
  std::set<std::string> names;
  for (const auto& v : AttributeValue::all()) {
    CHECK(AttributeValue::from_code(v.code()) == v);
    CHECK(*AttributeValue::parse(v.name()) == v);
    names.insert(std::string(v.name()));
  }
  CHECK(names.size() == 16);
  CHECK_FALSE(AttributeValue::parse("teal"));
  CHECK(AttributeValue::all_of(AttributeKind::color).size() == 8);
}

TEST_CASE("object universe has 144 distinct types") {
  auto all = ObjectType::all();
  CHECK(all.size() == 144);
  std::set<int> codes;
  for (const auto& t : all) {
    codes.insert(t.code());
    CHECK(ObjectType::from_code(t.code()) == t);
    CHECK(t.attributes().size() == 4);
  }
  CHECK(codes.size() == 144);
}

TEST_CASE("object descriptions read size color material shape") {
  CHECK(golden::type_of("small cyan metal cylinder").description() == "small cyan metal cylinder");
  auto t = golden::type_of("large red glass cube").with(*AttributeValue::parse("sphere"));
  CHECK(t.description() == "large red glass sphere");
}

TEST_CASE("relations follow the margin on each axis") {
  const double d = Geometry{}.delta;
  CHECK(relations_between(Point{1, 1}, Point{1.8, 1}, d) == [] { RelationSet s; s.insert(Relation::left); return s; }());
  CHECK(relations_between(Point{1, 1}, Point{1.79, 1}, d).empty());
  auto r = relations_between(Point{5, 5}, Point{1, 1}, d);
  CHECK(r.contains(Relation::right));
  CHECK(r.contains(Relation::front));
  CHECK(r.size() == 2);
  Scene s = golden::relation_scene();
  CHECK_THROWS_AS(relations_between(0, 0, s, d), PreconditionError);
  CHECK_THROWS_AS(relations_between(0, 9, s, d), UnknownObjectId);
}

TEST_CASE("relation inverse symmetry over random position pairs") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    Point a{rng.uniform(0, 8), rng.uniform(0, 8)};
    Point b{rng.uniform(0, 8), rng.uniform(0, 8)};
    REQUIRE(relations_between(a, b) == relations_between(b, a).inverted());
    for (Relation r : relations_between(a, b).values()) {
      REQUIRE_FALSE(relations_between(a, b).contains(inverse(r)));
    }
  }
}

TEST_CASE("relation names and inverses") {
  for (Relation r : kRelations) {
    CHECK(*parse_relation(relation_name(r)) == r);
    CHECK(inverse(inverse(r)) == r);
    CHECK(same_axis(r, inverse(r)));
  }
  CHECK_FALSE(same_axis(Relation::left, Relation::front));
}

TEST_CASE("unique attributes and referring phrases") {
  Scene s = golden::pragmatic_scene();
  auto u = unique_attributes(s, 2);
  CHECK(u.size() == 1);
  CHECK(u.contains(*AttributeValue::parse("cyan")));
  CHECK(count_objects(s) == 3);

  Scene r = golden::relation_scene();
  CHECK(referring_phrase(r, 1) == std::pair<std::string, std::string>{"blue", "cube"});
  CHECK(resolve_phrase(r, "cyan", "cylinder") == 2);
  CHECK_FALSE(resolve_phrase(r, "cyan", "cube"));

  Scene twins = golden::scene_of({"small red rubber cube", "large red metal cube"});
  CHECK_THROWS_AS(referring_phrase(twins, 0), AmbiguousReferent);
}

TEST_CASE("scene validation") {
  Scene s = golden::relation_scene();
  CHECK_NOTHROW(s.validate());
  Scene close = s;
  close.objects[1].position = {1.5, 4.2};
  CHECK_THROWS_AS(close.validate(), MalformedScene);
  Scene outside = s;
  outside.objects[0].position = {8.5, 1};
  CHECK_THROWS_AS(outside.validate(), MalformedScene);
  Scene bad_pointer = s;
  bad_pointer.pointed = 5;
  CHECK_THROWS(bad_pointer.validate());
  CHECK_THROWS_AS(s.object(3), UnknownObjectId);
}

TEST_CASE("lexicon rejects duplicate words and meanings") {
  Lexicon lex;
  lex.add(golden::word_of({"a", "lim"}), *AttributeValue::parse("purple"));
  CHECK_THROWS(lex.add(golden::word_of({"a", "lim"}), *AttributeValue::parse("red")));
  CHECK_THROWS(lex.add(golden::word_of({"en", "re"}), *AttributeValue::parse("purple")));
  CHECK(lex.is_injective());
  CHECK(lex.find("alim") != nullptr);
  CHECK(lex.word_for(Concept{*AttributeValue::parse("purple")})->text == "alim");
}

TEST_CASE("familiar tokens") {
  CHECK(is_familiar_token("cyan"));
  CHECK(is_familiar_token("behind"));
  CHECK(is_familiar_token("and"));
  CHECK_FALSE(is_familiar_token("alim"));
}

TEST_CASE("task names and syllable counts") {
  for (Task t : kTasks) CHECK(*parse_task(task_name(t)) == t);
  CHECK(syllables_for(Task::object) == 3);
  CHECK(syllables_for(Task::composite) == 3);
  CHECK(syllables_for(Task::relation) == 3);
  CHECK(syllables_for(Task::bootstrap) == 3);
  CHECK(syllables_for(Task::shape) == 2);
  CHECK(syllables_for(Task::number) == 2);
  CHECK(syllables_for(Task::pragmatic) == 2);
}
