#include <doctest.h>

#include "golden.hpp"
#include "mewl/caption.hpp"
#include "mewl/taskgen.hpp"

using namespace mewl;

TEST_CASE("object caption") {
  CHECK(caption_objects(golden::object_scene()) == golden::kObjectCaption);
  CHECK(caption_scene(Task::object, golden::object_scene()) == golden::kObjectCaption);
  CHECK_THROWS_AS(caption_objects(Scene{}), MalformedScene);
}

TEST_CASE("relation caption") {
  CHECK(caption_relations(golden::relation_scene()) == golden::kRelationCaption);
  CHECK(caption_scene(Task::bootstrap, golden::relation_scene()) == golden::kRelationCaption);
  Scene flat = golden::relation_scene();
  flat.objects[1].position.y = 4.3;
  CHECK_THROWS_AS(caption_relations(flat), MalformedScene);
  Scene two = golden::relation_scene();
  two.objects.pop_back();
  CHECK_THROWS_AS(caption_relations(two), MalformedScene);
}

TEST_CASE("pointing caption") {
  CHECK(caption_pragmatic(golden::pragmatic_scene()) == golden::kPragmaticCaption);
  Scene unpointed = golden::pragmatic_scene();
  unpointed.pointed.reset();
  CHECK_THROWS_AS(caption_pragmatic(unpointed), MissingPointer);
}

TEST_CASE("full prompt") {
  Episode ep = golden::pragmatic_episode();
  CHECK(build_prompt(ep, 3) == golden::kPragmaticPrompt);
  CHECK_THROWS_AS(build_prompt(ep, 5), PreconditionError);
}

TEST_CASE("caption styles per task") {
  CHECK(caption_style(Task::shape) == CaptionStyle::objects);
  CHECK(caption_style(Task::number) == CaptionStyle::objects);
  CHECK(caption_style(Task::relation) == CaptionStyle::relations);
  CHECK(caption_style(Task::bootstrap) == CaptionStyle::relations);
  CHECK(caption_style(Task::pragmatic) == CaptionStyle::pragmatic);
}

TEST_CASE("every generated episode can be captioned") {
  for (Task task : kTasks) {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      Episode ep = generate_certified(task, rng).first;
      for (int o = 0; o < 5; ++o) REQUIRE_NOTHROW(build_prompt(ep, o));
    }
  }
}
