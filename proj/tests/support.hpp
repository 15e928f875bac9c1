#pragma once

#include <cstdint>
#include <string>

#include "lmplan/bench.hpp"
#include "lmplan/pddl.hpp"
#include "lmplan/strips.hpp"

namespace lmplan::testing {

inline std::string fixture(const std::string& name) { return std::string(LMPLAN_FIXTURES) + "/" + name; }

inline Task load_task(const std::string& domain_file, const std::string& problem_file) {
  const auto d = pddl::parse_domain(pddl::read_file(fixture(domain_file)));
  const auto p = pddl::parse_problem(pddl::read_file(fixture(problem_file)), d);
  return pddl::ground(d, p);
}

inline Task ground_text(std::string_view domain, const std::string& problem) {
  const auto d = pddl::parse_domain(domain);
  return pddl::ground(d, pddl::parse_problem(problem, d));
}

inline Task four_blocks() { return load_task("blocksworld-arm.pddl", "four-blocks.pddl"); }
inline Task roadmap() { return load_task("roadmap-domain.pddl", "roadmap.pddl"); }
inline Task seven_fact() { return load_task("seven-fact-domain.pddl", "seven-fact.pddl"); }
inline Task six_fact() { return load_task("six-fact-domain.pddl", "six-fact.pddl"); }
inline Task logistics_2planes() { return load_task("logistics-domain.pddl", "logistics-2planes.pddl"); }

inline Task blocks(int n, BlocksVariant v, std::uint64_t seed) {
  return ground_text(blocksworld_domain(v), gen_blocksworld(n, v, seed));
}

inline Task logistics(int cities, int locs, int planes, int packages, std::uint64_t seed) {
  return ground_text(logistics_domain(), gen_logistics(cities, locs, planes, packages, seed));
}

/// Small instance drawn from the three benchmark families; all enumerable.
inline Task micro_instance(std::uint64_t k) {
  switch (k % 3) {
    case 0: return blocks(3 + static_cast<int>(k / 3 % 3), BlocksVariant::Arm, 1000 + k);
    case 1: return blocks(3 + static_cast<int>(k / 3 % 3), BlocksVariant::NoArm, 2000 + k);
    default: return logistics(2, 2, 1 + static_cast<int>(k / 3 % 2), 1 + static_cast<int>(k / 3 % 3), 3000 + k);
  }
}

}  // namespace lmplan::testing
