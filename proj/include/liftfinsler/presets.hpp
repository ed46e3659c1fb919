#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftfinsler/instance.hpp"

namespace liftfinsler {

struct Preset {
  std::string_view name;
  std::string_view summary;
  std::string_view text;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = {
      {"abelian3", "R^3 with a Randers drift; everything is flat and Berwald", R"({
  "name": "abelian3",
  "dim": 3,
  "brackets": [],
  "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "drift": [0.2, 0.1, 0.0],
  "phi": {"kind": "randers"}
})"},
      {"heisenberg3-central", "h3, Randers, X = 0.3 e3 (central): not Douglas", R"({
  "name": "heisenberg3-central",
  "dim": 3,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "drift": [0.0, 0.0, 0.3],
  "phi": {"kind": "randers"}
})"},
      {"heisenberg3-randers", "h3, Randers, X = 0.3 e1 (orthogonal to [h3,h3]): Douglas, not Berwald", R"({
  "name": "heisenberg3-randers",
  "dim": 3,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "drift": [0.3, 0.0, 0.0],
  "phi": {"kind": "randers"}
})"},
      {"heisenberg3-generic", "h3, Randers, generic X: not Douglas", R"({
  "name": "heisenberg3-generic",
  "dim": 3,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "drift": [0.2, 0.1, 0.25],
  "phi": {"kind": "randers"}
})"},
      {"so3", "so(3) with metric diag(1,2,3) and zero drift (Riemannian)", R"({
  "name": "so3",
  "dim": 3,
  "brackets": [
    {"i": 1, "j": 2, "k": 3, "c": 1.0},
    {"i": 2, "j": 3, "k": 1, "c": 1.0},
    {"i": 3, "j": 1, "k": 2, "c": 1.0}
  ],
  "metric": [[1, 0, 0], [0, 2, 0], [0, 0, 3]],
  "drift": [0.0, 0.0, 0.0],
  "phi": {"kind": "randers"}
})"},
      {"heisenberg3-plus-r-randers", "h3 + R, Randers, X = 0.4 e4: F, F^c and F^v Berwald", R"({
  "name": "heisenberg3-plus-r-randers",
  "dim": 4,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1.5, 0.2, 0, 0], [0.2, 1, 0, 0], [0, 0, 0.8, 0], [0, 0, 0, 1]],
  "drift": [0.0, 0.0, 0.0, 0.4],
  "phi": {"kind": "randers"}
})"},
      {"matsumoto-berwald", "h3 + R, Matsumoto, X = 0.3 e4: Berwald", R"({
  "name": "matsumoto-berwald",
  "dim": 4,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
  "drift": [0.0, 0.0, 0.0, 0.3],
  "phi": {"kind": "matsumoto"}
})"},
      {"kropina-berwald", "h3 + R, Kropina, X = e4: Berwald, half of the flags undefined", R"({
  "name": "kropina-berwald",
  "dim": 4,
  "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}],
  "metric": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
  "drift": [0.0, 0.0, 0.0, 1.0],
  "phi": {"kind": "kropina"}
})"},
  };
  return all;
}

inline const Preset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

inline InstanceFile load_preset(std::string_view name) {
  const Preset* p = find_preset(name);
  if (p == nullptr) throw ParseError("unknown preset '" + std::string(name) + "'");
  return parse_instance(std::string(p->text));
}

}  // namespace liftfinsler
