#include "osculant/gallery.hpp"

namespace osculant {

namespace {

GalleryEntry make(const std::string& id, int n,
                  const std::vector<std::string>& components, int max_order,
                  const Vec& base_point = {}) {
  GalleryEntry entry;
  entry.id = id;
  entry.spec.immersion.name = id;
  entry.spec.immersion.dim_domain = n;
  entry.spec.immersion.dim_ambient = static_cast<int>(components.size());
  for (const std::string& c : components)
    entry.spec.immersion.components.push_back(parse_expression(c, n));
  entry.spec.base_point =
      base_point.empty() ? Vec(static_cast<size_t>(n), 0.0) : base_point;
  entry.spec.max_order = max_order;
  return entry;
}

GalleryEntry make_extremal(int n, int r) {
  GalleryEntry entry;
  entry.id = "extremal_" + std::to_string(n) + "_" + std::to_string(r);
  entry.spec.immersion = extremal_example(n, r);
  entry.spec.immersion.name = entry.id;
  entry.spec.base_point.assign(static_cast<size_t>(n), 0.0);
  entry.spec.max_order = r;
  return entry;
}

std::vector<GalleryEntry> build() {
  std::vector<GalleryEntry> gallery;
  gallery.push_back(make("plane", 2, {"u1", "u2", "0"}, 2));
  gallery.push_back(make("circle", 1, {"2*cos(u1)", "2*sin(u1)"}, 2));
  gallery.push_back(make("parabola", 1, {"u1", "u1^2"}, 2));
  gallery.push_back(make("helix", 1, {"cos(u1)", "sin(u1)", "u1"}, 2));
  // Unit sphere in the stereographic chart; the base point maps to a pole.
  gallery.push_back(make("sphere", 2,
                         {"2*u1/(1 + u1^2 + u2^2)", "2*u2/(1 + u1^2 + u2^2)",
                          "(u1^2 + u2^2 - 1)/(1 + u1^2 + u2^2)"},
                         2));
  gallery.push_back(make("torus", 2,
                         {"(2 + 0.5*cos(u2))*cos(u1)",
                          "(2 + 0.5*cos(u2))*sin(u1)", "0.5*sin(u2)"},
                         2));
  // Quadratic monomial embedding of the plane.
  gallery.push_back(
      make("veronese", 2, {"u1", "u2", "u1^2", "u1*u2", "u2^2"}, 2));
  gallery.push_back(make_extremal(2, 2));
  gallery.push_back(make_extremal(1, 3));
  return gallery;
}

}  // namespace

const std::vector<GalleryEntry>& builtin_gallery() {
  static const std::vector<GalleryEntry> gallery = build();
  return gallery;
}

}  // namespace osculant
