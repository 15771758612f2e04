#include "funnynodules/schema.hpp"

#include <algorithm>
#include <set>

#include "funnynodules/errors.hpp"

namespace funnynodules {

std::string to_string(RenderRole role) {
  switch (role) {
    case RenderRole::roundness: return "roundness";
    case RenderRole::spiculation: return "spiculation";
    case RenderRole::edge_sharpness: return "edge_sharpness";
    case RenderRole::size: return "size";
    case RenderRole::intensity: return "intensity";
    case RenderRole::internal_structure: return "internal_structure";
    case RenderRole::none: return "none";
  }
  return "none";
}

std::optional<RenderRole> render_role_from_string(const std::string& s) {
  static const std::map<std::string, RenderRole> lookup = {
      {"roundness", RenderRole::roundness},
      {"spiculation", RenderRole::spiculation},
      {"edge_sharpness", RenderRole::edge_sharpness},
      {"size", RenderRole::size},
      {"intensity", RenderRole::intensity},
      {"internal_structure", RenderRole::internal_structure},
      {"none", RenderRole::none},
  };
  const auto it = lookup.find(s);
  if (it == lookup.end()) return std::nullopt;
  return it->second;
}

const AttributeDef* AttributeSchema::find(const std::string& id) const {
  for (const auto& a : attributes) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const AttributeDef* AttributeSchema::find_role(RenderRole role) const {
  if (role == RenderRole::none) return nullptr;
  for (const auto& a : attributes) {
    if (a.role == role) return &a;
  }
  return nullptr;
}

const AttributeDef& AttributeSchema::attribute(const std::string& id) const {
  const AttributeDef* def = find(id);
  if (!def) throw ValidationError("unknown attribute " + id);
  return *def;
}

std::vector<std::string> AttributeSchema::validate() const {
  std::vector<std::string> violations;
  if (attributes.empty()) violations.push_back("schema has no attributes");
  std::set<std::string> seen;
  std::set<RenderRole> roles;
  for (const auto& a : attributes) {
    if (a.id.empty()) violations.push_back("attribute with empty id");
    if (!seen.insert(a.id).second) {
      violations.push_back("duplicate attribute id " + a.id);
    }
    if (a.scale.kind == AttributeScale::Kind::binary) {
      if (a.scale.min != 0 || a.scale.max != 1) {
        violations.push_back(a.id + ": binary scale must be {0,1}");
      }
    } else if (a.scale.min < 1 || a.scale.max < a.scale.min) {
      violations.push_back(a.id + ": ordinal scale requires max >= min >= 1");
    }
    if (a.role != RenderRole::none && !roles.insert(a.role).second) {
      violations.push_back("render role " + to_string(a.role) +
                           " assigned to more than one attribute");
    }
  }
  return violations;
}

std::uint64_t AttributeSchema::grid_size() const {
  std::uint64_t n = 1;
  for (const auto& a : attributes) {
    n *= static_cast<std::uint64_t>(a.scale.size());
  }
  return n;
}

AttributeSchema default_schema() {
  AttributeSchema schema;
  schema.attributes = {
      {"r", "roundness", AttributeScale::ordinal(1, 5), RenderRole::roundness},
      {"sp", "spiculation", AttributeScale::ordinal(1, 5),
       RenderRole::spiculation},
      {"es", "edge sharpness", AttributeScale::ordinal(1, 5),
       RenderRole::edge_sharpness},
      {"s", "size", AttributeScale::ordinal(1, 5), RenderRole::size},
      {"i", "intensity", AttributeScale::ordinal(1, 5), RenderRole::intensity},
      {"is", "internal structure", AttributeScale::binary(),
       RenderRole::internal_structure},
  };
  return schema;
}

std::vector<std::string> validate_vector(const AttributeSchema& schema,
                                         const AttributeVector& v) {
  std::vector<std::string> violations;
  for (const auto& a : schema.attributes) {
    const auto it = v.find(a.id);
    if (it == v.end()) {
      violations.push_back("missing attribute " + a.id);
      continue;
    }
    if (it->second < a.scale.min) {
      violations.push_back(a.id + " below scale minimum");
    } else if (it->second > a.scale.max) {
      violations.push_back(a.id + " above scale maximum");
    }
  }
  for (const auto& [id, value] : v) {
    (void)value;
    if (!schema.find(id)) violations.push_back("unknown attribute " + id);
  }
  return violations;
}

void for_each_grid_vector(
    const AttributeSchema& schema,
    const std::function<void(const AttributeVector&)>& fn) {
  AttributeVector v;
  for (const auto& a : schema.attributes) v[a.id] = a.scale.min;

  while (true) {
    fn(v);
    // Odometer increment over the attribute scales.
    std::size_t k = 0;
    for (; k < schema.attributes.size(); ++k) {
      const auto& a = schema.attributes[k];
      int& value = v[a.id];
      if (value < a.scale.max) {
        ++value;
        break;
      }
      value = a.scale.min;
    }
    if (k == schema.attributes.size()) return;
  }
}

}  // namespace funnynodules
