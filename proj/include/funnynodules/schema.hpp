#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace funnynodules {

// What an attribute controls in the rendered image. `none` marks
// annotation-only attributes that feed the target rule but not the pixels.
enum class RenderRole {
  roundness,
  spiculation,
  edge_sharpness,
  size,
  intensity,
  internal_structure,
  none,
};

std::string to_string(RenderRole role);
std::optional<RenderRole> render_role_from_string(const std::string& s);

// Value scale of one attribute: ordinal min..max or binary {0, 1}.
struct AttributeScale {
  enum class Kind { ordinal, binary };

  Kind kind = Kind::ordinal;
  int min = 1;
  int max = 5;

  static AttributeScale ordinal(int min, int max) {
    return {Kind::ordinal, min, max};
  }
  static AttributeScale binary() { return {Kind::binary, 0, 1}; }

  bool contains(int v) const { return v >= min && v <= max; }
  int size() const { return max - min + 1; }

  bool operator==(const AttributeScale&) const = default;
};

struct AttributeDef {
  std::string id;
  std::string name;
  AttributeScale scale;
  RenderRole role = RenderRole::none;

  bool operator==(const AttributeDef&) const = default;
};

struct AttributeSchema {
  std::vector<AttributeDef> attributes;

  const AttributeDef* find(const std::string& id) const;
  const AttributeDef* find_role(RenderRole role) const;
  // Throws ValidationError for unknown ids.
  const AttributeDef& attribute(const std::string& id) const;

  // Violations of the schema's own invariants; empty when valid.
  std::vector<std::string> validate() const;

  // Number of points on the full attribute value grid.
  std::uint64_t grid_size() const;

  bool operator==(const AttributeSchema&) const = default;
};

// Attribute id -> value. std::map keeps iteration deterministic.
using AttributeVector = std::map<std::string, int>;

// The six-attribute nodule schema: r, sp, es, s, i ordinal 1..5, is binary.
AttributeSchema default_schema();

// One violation message per missing id, extra id, or out-of-range value.
std::vector<std::string> validate_vector(const AttributeSchema& schema,
                                         const AttributeVector& v);

// Calls fn for every vector on the schema's finite value grid
// (6250 vectors for the default schema).
void for_each_grid_vector(const AttributeSchema& schema,
                          const std::function<void(const AttributeVector&)>& fn);

}  // namespace funnynodules
