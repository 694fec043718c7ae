#include "mewl/caption.hpp"

#include "mewl/solver.hpp"

namespace mewl {
namespace {

std::string objects_clause(const Scene& scene, bool with_marker) {
  std::string out;
  auto append = [&](std::string_view description) {
    out += out.empty() ? "A " : " and a ";
    out += description;
  };
  for (const auto& o : scene.objects) append(o.type.description());
  if (with_marker) append(kPointerMarkerDescription);
  return out;
}

std::string_view depth_phrase(RelationSet rel) {
  if (rel.contains(Relation::front)) return "in front of";
  if (rel.contains(Relation::behind)) return "behind";
  return {};
}

std::string_view lateral_phrase(RelationSet rel) {
  if (rel.contains(Relation::left)) return "on the left of";
  if (rel.contains(Relation::right)) return "on the right of";
  return {};
}

}  // namespace

CaptionStyle caption_style(Task task) {
  switch (task) {
    case Task::relation:
    case Task::bootstrap: return CaptionStyle::relations;
    case Task::pragmatic: return CaptionStyle::pragmatic;
    default: return CaptionStyle::objects;
  }
}

std::string caption_objects(const Scene& scene) {
  if (scene.objects.empty()) throw MalformedScene("cannot caption an empty scene");
  return objects_clause(scene, false) + ".";
}

std::string caption_relations(const Scene& scene, double delta) {
  if (scene.objects.size() != 3) {
    throw MalformedScene("relation captions need exactly 3 objects");
  }
  auto sentence = [&](std::size_t anchor, std::string_view (*phrase)(RelationSet)) {
    const ObjectSpec& a = scene.objects[anchor];
    std::string out = "The " + a.type.description() + " is ";
    for (std::size_t step = 1; step <= 2; ++step) {
      const ObjectSpec& other = scene.objects[(anchor + step) % 3];
      auto words = phrase(relations_between(a.position, other.position, delta));
      if (words.empty()) {
        throw MalformedScene("objects " + std::to_string(a.id) + " and " +
                             std::to_string(other.id) + " lack a relation on the captioned axis");
      }
      if (step == 2) out += " and ";
      out += std::string(words) + " the " + other.type.description();
    }
    return out + ".";
  };
  return sentence(0, depth_phrase) + " " + sentence(1, lateral_phrase);
}

std::string caption_pragmatic(const Scene& scene) {
  if (!scene.pointed) throw MissingPointer("pragmatic caption needs a pointed object");
  const ObjectSpec& target = scene.object(*scene.pointed);
  return objects_clause(scene, true) + ". And a finger is pointing to the " +
         target.type.description() + ".";
}

std::string caption_scene(Task task, const Scene& scene, double delta) {
  switch (caption_style(task)) {
    case CaptionStyle::relations: return caption_relations(scene, delta);
    case CaptionStyle::pragmatic: return caption_pragmatic(scene);
    case CaptionStyle::objects: break;
  }
  return caption_objects(scene);
}

std::string build_prompt(const Episode& episode, int option_index) {
  if (option_index < 0 || option_index >= static_cast<int>(episode.options.size())) {
    throw PreconditionError("option index out of range");
  }
  const double delta = episode_delta(episode);
  std::string out(kPromptHeader);
  out += "\n\n";
  for (const auto& panel : episode.contexts) {
    out += "Context: " + caption_scene(episode.task, panel.scene, delta) + "\n";
    out += "Name: " + panel.utterance.text() + "\n\n";
  }
  out += "Context: " + caption_scene(episode.task, episode.query, delta) + "\n";
  out += "Name: " + episode.options[static_cast<std::size_t>(option_index)].text();
  return out;
}

}  // namespace mewl
