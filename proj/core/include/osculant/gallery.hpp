#pragma once

#include <string>
#include <vector>

#include "osculant/immersion.hpp"

namespace osculant {

struct GalleryEntry {
  std::string id;  // filename stem, e.g. "helix"
  ImmersionSpec spec;
};

/// The bundled surface collection: plane, circle, parabola, helix, sphere,
/// torus, veronese and two extremal instances. The same definitions back the
/// gallery verification suite and the `save-gallery` command.
const std::vector<GalleryEntry>& builtin_gallery();

}  // namespace osculant
