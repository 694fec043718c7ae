#pragma once

// Hand-built scenes and episodes with known captions.

#include <sstream>
#include <string>
#include <vector>

#include "mewl/core.hpp"
#include "mewl/lexicon.hpp"

namespace mewl::golden {

// "large cyan metal cube" -> ObjectType
inline ObjectType type_of(const std::string& description) {
  std::istringstream in(description);
  std::string size, color, material, shape;
  in >> size >> color >> material >> shape;
  return ObjectType(AttributeValue::parse(size)->index(), AttributeValue::parse(color)->index(),
                    AttributeValue::parse(material)->index(), AttributeValue::parse(shape)->index());
}

inline Scene scene_of(const std::vector<std::string>& descriptions, std::optional<int> pointed = {}) {
  // Spread on a diagonal so every pair is well separated.
  static const Point spots[] = {{1, 1}, {3, 3}, {5, 5}, {7, 7}, {2, 6}, {6, 2}};
  Scene s;
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    s.objects.push_back({static_cast<int>(i), type_of(descriptions[i]), spots[i]});
  }
  s.pointed = pointed;
  return s;
}

inline Scene object_scene() {
  return scene_of({"small cyan metal cylinder", "small yellow rubber sphere", "large cyan glass cube"});
}
inline const char* kObjectCaption =
    "A small cyan metal cylinder and a small yellow rubber sphere and a large cyan glass cube.";

inline Scene relation_scene() {
  Scene s;
  s.objects = {{0, type_of("large red metal sphere"), {1, 4}},
               {1, type_of("small blue metal cube"), {4, 2}},
               {2, type_of("large cyan metal cylinder"), {7, 6}}};
  return s;
}
inline const char* kRelationCaption =
    "The large red metal sphere is in front of the small blue metal cube and behind the large cyan "
    "metal cylinder. The small blue metal cube is on the left of the large cyan metal cylinder and "
    "on the right of the large red metal sphere.";

inline Scene pragmatic_scene() {
  return scene_of({"large brown metal cube", "small brown metal cube", "large cyan metal cube"}, 2);
}
inline const char* kPragmaticCaption =
    "A large brown metal cube and a small brown metal cube and a large cyan metal cube and a small "
    "yellow rubber arrow. And a finger is pointing to the large cyan metal cube.";

inline Word word_of(std::vector<std::string> syllables) {
  return make_pseudoword(syllables);
}

// Six pointing contexts naming brown, cylinder, cyan, glass, purple, large.
inline Episode pragmatic_episode() {
  Episode ep;
  ep.episode_id = "golden-pragmatic";
  ep.task = Task::pragmatic;
  auto panel = [](std::vector<std::string> d, int pointed, std::string word) {
    return Panel{scene_of(d, pointed), Utterance{{std::move(word)}}};
  };
  ep.contexts = {
      panel({"small cyan metal cylinder", "small cyan rubber cylinder", "small brown metal cylinder"}, 2, "enre"),
      panel({"large brown metal sphere", "large brown metal cylinder", "large brown rubber sphere"}, 1, "taward"),
      panel({"large brown metal cube", "small brown metal cube", "large cyan metal cube"}, 2, "facset"),
      panel({"large brown rubber sphere", "large brown rubber cube", "large brown glass cube"}, 2, "facov"),
      panel({"small red metal cube", "small purple metal cube", "small red glass cube"}, 1, "alim"),
      panel({"small green glass sphere", "small green rubber sphere", "large green glass sphere"}, 2, "tedfac"),
  };
  ep.query = scene_of({"small yellow rubber cube", "large yellow rubber cube", "large purple rubber cube"}, 2);
  for (const char* w : {"enre", "tedfac", "facset", "alim", "facov"}) ep.options.push_back(Utterance{{w}});
  ep.answer_index = 3;
  ep.lexicon.add(word_of({"en", "re"}), *AttributeValue::parse("brown"));
  ep.lexicon.add(word_of({"ta", "ward"}), *AttributeValue::parse("cylinder"));
  ep.lexicon.add(word_of({"fac", "set"}), *AttributeValue::parse("cyan"));
  ep.lexicon.add(word_of({"fac", "ov"}), *AttributeValue::parse("glass"));
  ep.lexicon.add(word_of({"a", "lim"}), *AttributeValue::parse("purple"));
  ep.lexicon.add(word_of({"ted", "fac"}), *AttributeValue::parse("large"));
  return ep;
}

inline const char* kPragmaticPrompt =
    "Please name the target object according to the above context.\n"
    "\n"
    "Context: A small cyan metal cylinder and a small cyan rubber cylinder and a small brown metal cylinder and a small yellow rubber arrow. And a finger is pointing to the small brown metal cylinder.\n"
    "Name: enre\n"
    "\n"
    "Context: A large brown metal sphere and a large brown metal cylinder and a large brown rubber sphere and a small yellow rubber arrow. And a finger is pointing to the large brown metal cylinder.\n"
    "Name: taward\n"
    "\n"
    "Context: A large brown metal cube and a small brown metal cube and a large cyan metal cube and a small yellow rubber arrow. And a finger is pointing to the large cyan metal cube.\n"
    "Name: facset\n"
    "\n"
    "Context: A large brown rubber sphere and a large brown rubber cube and a large brown glass cube and a small yellow rubber arrow. And a finger is pointing to the large brown glass cube.\n"
    "Name: facov\n"
    "\n"
    "Context: A small red metal cube and a small purple metal cube and a small red glass cube and a small yellow rubber arrow. And a finger is pointing to the small purple metal cube.\n"
    "Name: alim\n"
    "\n"
    "Context: A small green glass sphere and a small green rubber sphere and a large green glass sphere and a small yellow rubber arrow. And a finger is pointing to the large green glass sphere.\n"
    "Name: tedfac\n"
    "\n"
    "Context: A small yellow rubber cube and a large yellow rubber cube and a large purple rubber cube and a small yellow rubber arrow. And a finger is pointing to the large purple rubber cube.\n"
    "Name: alim";

}  // namespace mewl::golden
