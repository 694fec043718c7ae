#pragma once

// Deterministic top-down SVG renderings of scenes.

#include <array>
#include <cstdint>
#include <string>

#include "mewl/core.hpp"

namespace mewl {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

enum class Glyph { square, circle, rounded_rect };
enum class Fill { flat, gradient, translucent };

struct RenderOptions {
  int width = 320;
  int height = 240;
  // Indexed by color index (gray..yellow).
  std::array<Rgb, 8> palette = {{{87, 87, 87},
                                 {173, 35, 35},
                                 {42, 75, 215},
                                 {29, 105, 20},
                                 {129, 74, 25},
                                 {129, 38, 192},
                                 {41, 208, 208},
                                 {255, 238, 51}}};
  Rgb arrow = {255, 238, 51};
  Rgb background = {236, 236, 232};
  // Indexed by shape (cube, sphere, cylinder).
  std::array<Glyph, 3> glyphs = {Glyph::square, Glyph::circle, Glyph::rounded_rect};
  // Indexed by material (rubber, metal, glass).
  std::array<Fill, 3> fills = {Fill::flat, Fill::gradient, Fill::translucent};
  // Half-extent of a small glyph in pixels; large glyphs are 1.6x.
  double small_half_extent = 7.0;
  double arena = Geometry{}.arena;
};

// Canvas-space placement of one object's glyph.
struct GlyphBox {
  double cx = 0, cy = 0, half = 0;
};

// Arena coordinates map uniformly onto a centered square viewport; larger y
// (toward the viewer) lands lower on the canvas.
GlyphBox glyph_box(const ObjectSpec& object, const RenderOptions& opts = {});

std::string render_svg(const Scene& scene, const RenderOptions& opts = {});

}  // namespace mewl
