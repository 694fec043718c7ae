#pragma once

// Ground-truth scene captions and the text prompt used for language-only
// agents.

#include <string>

#include "mewl/core.hpp"

namespace mewl {

enum class CaptionStyle { objects, relations, pragmatic };

CaptionStyle caption_style(Task task);

// "A small cyan metal cylinder and a large red metal sphere."
std::string caption_objects(const Scene& scene);

// Two sentences over a three-object scene. Sentence one anchors object 0 on
// the front/behind axis, sentence two anchors object 1 on the left/right
// axis; each relates the anchor to the other two objects in cyclic scene
// order. Throws MalformedScene if a needed relation lacks the margin.
std::string caption_relations(const Scene& scene, double delta = Geometry{}.delta);

// Object caption including the pointer marker, then the pointed object.
std::string caption_pragmatic(const Scene& scene);

std::string caption_scene(Task task, const Scene& scene, double delta = Geometry{}.delta);

inline constexpr std::string_view kPromptHeader =
    "Please name the target object according to the above context.";

// Header, one "Context:/Name:" block per context panel, then the query block
// naming options[option_index]. No trailing newline.
std::string build_prompt(const Episode& episode, int option_index);

}  // namespace mewl
