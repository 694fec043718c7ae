#include "mewl/render.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace mewl {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

Rgb shade(Rgb c, double f) {
  auto s = [f](std::uint8_t v) {
    return static_cast<std::uint8_t>(std::clamp(v * f, 0.0, 255.0));
  };
  return {s(c.r), s(c.g), s(c.b)};
}

double scale(const RenderOptions& o) { return std::min(o.width, o.height) / o.arena; }

}  // namespace

GlyphBox glyph_box(const ObjectSpec& object, const RenderOptions& opts) {
  const double s = scale(opts);
  const double ox = (opts.width - s * opts.arena) / 2.0;
  const double oy = (opts.height - s * opts.arena) / 2.0;
  const bool large = object.type.index(AttributeKind::size) == 1;
  return {ox + object.position.x * s, oy + object.position.y * s,
          opts.small_half_extent * (large ? 1.6 : 1.0)};
}

std::string render_svg(const Scene& scene, const RenderOptions& opts) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(opts.width) + "\" height=\"" + std::to_string(opts.height) +
         "\" viewBox=\"0 0 " + std::to_string(opts.width) + " " + std::to_string(opts.height) +
         "\">\n";

  // One gradient per color drawn in metal.
  std::set<int> metal_colors;
  for (const auto& o : scene.objects) {
    if (opts.fills[static_cast<std::size_t>(o.type.index(AttributeKind::material))] == Fill::gradient) {
      metal_colors.insert(o.type.index(AttributeKind::color));
    }
  }
  if (!metal_colors.empty()) {
    out += "  <defs>\n";
    for (int c : metal_colors) {
      Rgb base = opts.palette[static_cast<std::size_t>(c)];
      out += "    <linearGradient id=\"metal-" + std::to_string(c) +
             "\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"1\">";
      out += "<stop offset=\"0\" stop-color=\"" + hex(shade(base, 1.6)) + "\"/>";
      out += "<stop offset=\"1\" stop-color=\"" + hex(shade(base, 0.6)) + "\"/>";
      out += "</linearGradient>\n";
    }
    out += "  </defs>\n";
  }
  out += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" fill=\"" + hex(opts.background) + "\"/>\n";

  for (const auto& o : scene.objects) {
    GlyphBox g = glyph_box(o, opts);
    int color = o.type.index(AttributeKind::color);
    Fill fill = opts.fills[static_cast<std::size_t>(o.type.index(AttributeKind::material))];
    std::string paint = fill == Fill::gradient ? "url(#metal-" + std::to_string(color) + ")"
                                               : hex(opts.palette[static_cast<std::size_t>(color)]);
    std::string style = "fill=\"" + paint + "\" stroke=\"#202020\" stroke-width=\"1\"";
    if (fill == Fill::translucent) style += " fill-opacity=\"0.5\"";
    std::string attrs = " data-id=\"" + std::to_string(o.id) + "\" data-desc=\"" +
                        o.type.description() + "\" ";
    switch (opts.glyphs[static_cast<std::size_t>(o.type.index(AttributeKind::shape))]) {
      case Glyph::circle:
        out += "  <circle" + attrs + "cx=\"" + num(g.cx) + "\" cy=\"" + num(g.cy) + "\" r=\"" +
               num(g.half) + "\" " + style + "/>\n";
        break;
      case Glyph::square:
      case Glyph::rounded_rect: {
        bool rounded = opts.glyphs[static_cast<std::size_t>(o.type.index(AttributeKind::shape))] ==
                       Glyph::rounded_rect;
        out += "  <rect" + attrs + "x=\"" + num(g.cx - g.half) + "\" y=\"" + num(g.cy - g.half) +
               "\" width=\"" + num(2 * g.half) + "\" height=\"" + num(2 * g.half) + "\"";
        if (rounded) out += " rx=\"" + num(g.half * 0.6) + "\"";
        out += " " + style + "/>\n";
        break;
      }
    }
  }

  if (scene.pointed) {
    // Arrow tip touches the pointed glyph from above, or from below when the
    // object sits too close to the top edge.
    GlyphBox g = glyph_box(scene.object(*scene.pointed), opts);
    const double w = 4.0;
    const bool above = g.cy - g.half - 5 * w >= 0;
    const double dir = above ? -1.0 : 1.0;
    const double tip = above ? g.cy - g.half : g.cy + g.half;
    auto pt = [&](double dx, double dy) { return num(g.cx + dx) + "," + num(tip + dir * dy); };
    out += "  <polygon class=\"pointer\" points=\"" + pt(0, 0) + " " + pt(-2 * w, 2 * w) + " " +
           pt(-w, 2 * w) + " " + pt(-w, 5 * w) + " " + pt(w, 5 * w) + " " + pt(w, 2 * w) + " " +
           pt(2 * w, 2 * w) + "\" fill=\"" + hex(opts.arrow) +
           "\" stroke=\"#202020\" stroke-width=\"1\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace mewl
