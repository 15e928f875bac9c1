#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lmplan/strips.hpp"

namespace lmplan::pddl {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// Lexical or semantic error in a PDDL file, with the offending location.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLocation loc, const std::string& message);
  SourceLocation location() const { return loc_; }

 private:
  SourceLocation loc_;
};

struct TypedName {
  std::string name;
  std::string type;  // empty when untyped
  friend bool operator==(const TypedName&, const TypedName&) = default;
};

/// Atom over variables ("?x") and constants.
struct AtomSchema {
  std::string predicate;
  std::vector<std::string> terms;
  friend bool operator==(const AtomSchema&, const AtomSchema&) = default;
};

/// (= a b) or (not (= a b)); evaluated at grounding time.
struct Equality {
  std::string lhs;
  std::string rhs;
  bool equal = true;
  friend bool operator==(const Equality&, const Equality&) = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<TypedName> params;
  friend bool operator==(const PredicateDecl&, const PredicateDecl&) = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<AtomSchema> pre;
  std::vector<Equality> equalities;
  std::vector<AtomSchema> add;
  std::vector<AtomSchema> del;
  friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct DomainAst {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<std::string> types;
  std::vector<TypedName> constants;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> actions;

  const PredicateDecl* find_predicate(std::string_view name) const;
  bool typed() const { return !types.empty(); }
  friend bool operator==(const DomainAst&, const DomainAst&) = default;
};

struct ProblemAst {
  std::string name;
  std::string domain;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<Atom> goal;
  friend bool operator==(const ProblemAst&, const ProblemAst&) = default;
};

/// Accepts the :strips, :typing and :equality requirements.
DomainAst parse_domain(std::string_view text);

/// Checks that init/goal atoms only mention declared objects.
ProblemAst parse_problem(std::string_view text);
/// Additionally checks predicates, arities and constants against the domain.
ProblemAst parse_problem(std::string_view text, const DomainAst& domain);

/// Grounds every type-consistent instantiation, compiles away static
/// predicates and equality, and keeps only actions reachable in the
/// delete-relaxed fixpoint from the initial state. Fact ids follow
/// lexicographic atom order; actions follow schema order, then lexicographic
/// argument tuples.
Task ground(const DomainAst& domain, const ProblemAst& problem);

std::string to_pddl(const DomainAst& domain);
std::string to_pddl(const ProblemAst& problem);

std::string read_file(const std::string& path);

}  // namespace lmplan::pddl
