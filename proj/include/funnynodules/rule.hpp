#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "funnynodules/schema.hpp"

namespace funnynodules {

// Atomic predicate over one attribute: attr >= c, attr <= c, or attr = c.
struct Predicate {
  enum class Op { greater_equal, less_equal, equal };

  std::string attr;
  Op op = Op::equal;
  int value = 0;

  bool matches(int v) const {
    switch (op) {
      case Op::greater_equal: return v >= value;
      case Op::less_equal: return v <= value;
      case Op::equal: return v == value;
    }
    return false;
  }

  bool operator==(const Predicate&) const = default;
};

std::string predicate_to_string(const Predicate& p);
Predicate predicate_from_string(const std::string& text);

// Conjunction of predicates contributing a signed score term. Clauses that
// share a group are mutually exclusive alternatives; exclusivity is verified
// exhaustively over the schema grid when the rule is checked.
struct Clause {
  std::vector<Predicate> when;
  int add = 0;
  std::string group;

  bool fires(const AttributeVector& v) const;

  bool operator==(const Clause&) const = default;
};

// Closed integer score interval mapping to one target class; an absent bound
// is unbounded on that side.
struct Bin {
  std::optional<int> lo;
  std::optional<int> hi;
  int target = 1;

  bool contains(int score) const {
    return (!lo || score >= *lo) && (!hi || score <= *hi);
  }

  bool operator==(const Bin&) const = default;
};

struct TargetRule {
  std::vector<Clause> clauses;
  std::vector<Bin> bins;

  bool operator==(const TargetRule&) const = default;
};

struct FiredClause {
  std::size_t clause_index = 0;
  int contribution = 0;
};

struct RuleTrace {
  std::vector<FiredClause> fired;
  int score = 0;
  int target = 0;
};

// The built-in rule: the internal-structure-conditioned roundness clause
// pair, the spiculation / edge / size / intensity clauses, and the five
// score bins.
TargetRule default_rule();

int evaluate(const TargetRule& rule, const AttributeVector& v);
RuleTrace trace(const TargetRule& rule, const AttributeVector& v);

// Structural parse/serialize of the rule document. parse_rule verifies that
// the bins partition the full integer line and throws ValidationError with a
// counterexample score otherwise.
std::string serialize_rule(const TargetRule& rule);
TargetRule parse_rule(const std::string& text);

// Schema-dependent checks: referenced attribute ids exist, and within each
// group at most one clause fires for any vector on the grid. Violations
// carry a counterexample vector.
std::vector<std::string> check_rule(const TargetRule& rule,
                                    const AttributeSchema& schema);

struct ReachableTarget {
  int target = 0;
  AttributeVector witness;
};

// Exhaustive enumeration of the schema grid; one witness per reachable class.
std::vector<ReachableTarget> reachable_targets(const TargetRule& rule,
                                               const AttributeSchema& schema);

}  // namespace funnynodules
