#include "funnynodules/rule.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "funnynodules/errors.hpp"
#include "json.hpp"
#include "json_codec.hpp"

namespace funnynodules {

namespace {

std::string vector_to_string(const AttributeVector& v) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [id, value] : v) {
    if (!first) os << ", ";
    os << id << ":" << value;
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace

std::string predicate_to_string(const Predicate& p) {
  std::string op;
  switch (p.op) {
    case Predicate::Op::greater_equal: op = ">="; break;
    case Predicate::Op::less_equal: op = "<="; break;
    case Predicate::Op::equal: op = "="; break;
  }
  return p.attr + op + std::to_string(p.value);
}

Predicate predicate_from_string(const std::string& text) {
  const auto fail = [&] {
    throw ValidationError("malformed predicate \"" + text +
                          "\" (expected attr>=c, attr<=c, or attr=c)");
  };
  std::size_t pos = text.find_first_of("<>=");
  if (pos == 0 || pos == std::string::npos) fail();

  Predicate p;
  p.attr = text.substr(0, pos);
  std::size_t value_pos = pos + 1;
  if (text[pos] == '>' || text[pos] == '<') {
    if (value_pos >= text.size() || text[value_pos] != '=') fail();
    p.op = text[pos] == '>' ? Predicate::Op::greater_equal
                            : Predicate::Op::less_equal;
    ++value_pos;
  } else {
    p.op = Predicate::Op::equal;
  }
  try {
    std::size_t consumed = 0;
    p.value = std::stoi(text.substr(value_pos), &consumed);
    if (value_pos + consumed != text.size()) fail();
  } catch (const std::exception&) {
    fail();
  }
  return p;
}

bool Clause::fires(const AttributeVector& v) const {
  for (const auto& p : when) {
    const auto it = v.find(p.attr);
    if (it == v.end()) {
      throw ValidationError("attribute " + p.attr +
                            " referenced by rule is missing from vector");
    }
    if (!p.matches(it->second)) return false;
  }
  return true;
}

TargetRule default_rule() {
  TargetRule rule;
  const auto ge = [](std::string a, int c) {
    return Predicate{std::move(a), Predicate::Op::greater_equal, c};
  };
  const auto le = [](std::string a, int c) {
    return Predicate{std::move(a), Predicate::Op::less_equal, c};
  };
  const auto eq = [](std::string a, int c) {
    return Predicate{std::move(a), Predicate::Op::equal, c};
  };

  rule.clauses = {
      {{eq("is", 0), ge("r", 4)}, +2, "roundness"},
      {{eq("is", 0), le("r", 2)}, -2, "roundness"},
      {{eq("is", 1), ge("r", 4)}, -2, "roundness"},
      {{eq("is", 1), le("r", 2)}, +2, "roundness"},
      {{ge("sp", 4)}, +2, "spiculation"},
      {{le("sp", 2)}, -2, "spiculation"},
      {{ge("es", 4)}, -2, "edge_sharpness"},
      {{le("es", 2)}, +2, "edge_sharpness"},
      {{ge("s", 4)}, +2, "size"},
      {{le("s", 2)}, -2, "size"},
      {{eq("i", 5)}, -1, "intensity"},
      {{le("i", 2)}, +1, "intensity"},
  };
  rule.bins = {
      {std::nullopt, -1, 1},
      {0, 0, 2},
      {1, 2, 3},
      {3, 4, 4},
      {5, std::nullopt, 5},
  };
  return rule;
}

RuleTrace trace(const TargetRule& rule, const AttributeVector& v) {
  RuleTrace t;
  for (std::size_t k = 0; k < rule.clauses.size(); ++k) {
    if (rule.clauses[k].fires(v)) {
      t.fired.push_back({k, rule.clauses[k].add});
      t.score += rule.clauses[k].add;
    }
  }
  for (const auto& bin : rule.bins) {
    if (bin.contains(t.score)) {
      t.target = bin.target;
      return t;
    }
  }
  throw ValidationError("no bin covers score " + std::to_string(t.score));
}

int evaluate(const TargetRule& rule, const AttributeVector& v) {
  return trace(rule, v).target;
}

namespace detail {

nlohmann::ordered_json rule_to_json(const TargetRule& rule) {
  nlohmann::ordered_json doc;
  doc["clauses"] = nlohmann::ordered_json::array();
  for (const auto& c : rule.clauses) {
    nlohmann::ordered_json jc;
    jc["when"] = nlohmann::ordered_json::array();
    for (const auto& p : c.when) jc["when"].push_back(predicate_to_string(p));
    jc["add"] = c.add;
    if (!c.group.empty()) jc["group"] = c.group;
    doc["clauses"].push_back(std::move(jc));
  }
  doc["bins"] = nlohmann::ordered_json::array();
  for (const auto& b : rule.bins) {
    nlohmann::ordered_json jb;
    if (!b.lo && b.hi) {
      jb["upto"] = *b.hi;
    } else if (b.lo && b.hi && *b.lo == *b.hi) {
      jb["at"] = *b.lo;
    } else {
      if (b.lo) jb["from"] = *b.lo;
      if (b.hi) jb["to"] = *b.hi;
    }
    jb["target"] = b.target;
    doc["bins"].push_back(std::move(jb));
  }
  return doc;
}

// Verifies the bins form a gapless, non-overlapping cover of the integer
// line. Errors carry a concrete counterexample score.
void check_bin_partition(const std::vector<Bin>& bins) {
  if (bins.empty()) throw ValidationError("rule has no bins");
  for (const auto& b : bins) {
    if (b.lo && b.hi && *b.lo > *b.hi) {
      throw ValidationError("bin with empty interval [" +
                            std::to_string(*b.lo) + "," +
                            std::to_string(*b.hi) + "]");
    }
    if (b.target < 1) {
      throw ValidationError("bin target must be a positive integer");
    }
  }
  std::vector<Bin> sorted = bins;
  std::sort(sorted.begin(), sorted.end(), [](const Bin& a, const Bin& b) {
    if (!a.lo) return static_cast<bool>(b.lo);
    if (!b.lo) return false;
    return *a.lo < *b.lo;
  });
  if (sorted.front().lo) {
    throw ValidationError("no bin covers score " +
                          std::to_string(*sorted.front().lo - 1) +
                          " (no bin is unbounded below)");
  }
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
    const Bin& cur = sorted[k];
    const Bin& next = sorted[k + 1];
    if (!next.lo || !cur.hi) {
      const int overlap = next.lo ? *next.lo : (cur.hi ? *cur.hi : 0);
      throw ValidationError("score " + std::to_string(overlap) +
                            " maps to 2 bins");
    }
    if (*next.lo <= *cur.hi) {
      throw ValidationError("score " + std::to_string(*next.lo) +
                            " maps to 2 bins");
    }
    if (*next.lo > *cur.hi + 1) {
      throw ValidationError("no bin covers score " +
                            std::to_string(*cur.hi + 1));
    }
  }
  if (sorted.back().hi) {
    throw ValidationError("no bin covers score " +
                          std::to_string(*sorted.back().hi + 1) +
                          " (no bin is unbounded above)");
  }
}

TargetRule rule_from_json(const nlohmann::json& doc) {
  TargetRule rule;
  if (!doc.is_object()) throw ValidationError("rule document must be an object");
  if (doc.contains("clauses")) {
    for (const auto& jc : doc.at("clauses")) {
      Clause c;
      for (const auto& jp : jc.at("when")) {
        c.when.push_back(predicate_from_string(jp.get<std::string>()));
      }
      c.add = jc.at("add").get<int>();
      if (jc.contains("group")) c.group = jc.at("group").get<std::string>();
      rule.clauses.push_back(std::move(c));
    }
  }
  if (!doc.contains("bins")) throw ValidationError("rule has no bins");
  for (const auto& jb : doc.at("bins")) {
    Bin b;
    if (jb.contains("at")) {
      b.lo = b.hi = jb.at("at").get<int>();
    } else {
      if (jb.contains("upto")) {
        b.hi = jb.at("upto").get<int>();
      } else {
        if (jb.contains("from")) b.lo = jb.at("from").get<int>();
        if (jb.contains("to")) b.hi = jb.at("to").get<int>();
      }
    }
    b.target = jb.at("target").get<int>();
    rule.bins.push_back(b);
  }
  check_bin_partition(rule.bins);
  return rule;
}

}  // namespace detail

std::string serialize_rule(const TargetRule& rule) {
  return detail::rule_to_json(rule).dump(2);
}

TargetRule parse_rule(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("rule parse error: ") + e.what());
  }
  try {
    return detail::rule_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("rule document error: ") + e.what());
  }
}

std::vector<std::string> check_rule(const TargetRule& rule,
                                    const AttributeSchema& schema) {
  std::vector<std::string> violations;
  for (const auto& c : rule.clauses) {
    for (const auto& p : c.when) {
      if (!schema.find(p.attr)) {
        violations.push_back("rule references unknown attribute " + p.attr);
      }
    }
  }
  if (!violations.empty()) return violations;

  try {
    detail::check_bin_partition(rule.bins);
  } catch (const ValidationError& e) {
    violations.push_back(e.what());
  }

  // Group exclusivity, exhaustively over the grid. The grids are tiny, so
  // enumeration beats symbolic reasoning.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < rule.clauses.size(); ++k) {
    if (!rule.clauses[k].group.empty()) {
      groups[rule.clauses[k].group].push_back(k);
    }
  }
  std::set<std::string> reported;
  for_each_grid_vector(schema, [&](const AttributeVector& v) {
    for (const auto& [group, members] : groups) {
      if (reported.count(group)) continue;
      int fired = 0;
      for (const std::size_t k : members) {
        if (rule.clauses[k].fires(v)) ++fired;
      }
      if (fired > 1) {
        reported.insert(group);
        violations.push_back("group " + group + ": " + std::to_string(fired) +
                             " clauses fire for " + vector_to_string(v));
      }
    }
  });
  return violations;
}

std::vector<ReachableTarget> reachable_targets(const TargetRule& rule,
                                               const AttributeSchema& schema) {
  std::map<int, AttributeVector> witnesses;
  for_each_grid_vector(schema, [&](const AttributeVector& v) {
    const int target = evaluate(rule, v);
    witnesses.emplace(target, v);
  });
  std::vector<ReachableTarget> out;
  out.reserve(witnesses.size());
  for (const auto& [target, witness] : witnesses) {
    out.push_back({target, witness});
  }
  return out;
}

}  // namespace funnynodules
