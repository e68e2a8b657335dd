#pragma once

// Integer relations among the elements of a finite set: the vectors
// x in [-H, H]^k with sum x_i a_i = 0, and the lattice they span.

#include <cstdint>
#include <span>
#include <vector>

#include "sumset/int_set.hpp"

namespace sumset {

using IntRows = std::vector<std::vector<std::int64_t>>;

struct RelationLattice {
  int k = 0;
  int box = 0;
  IntRows relations;  // lexicographic order
  IntRows basis;      // row Hermite normal form

  friend bool operator==(const RelationLattice&, const RelationLattice&) = default;
};

/// Relations for the elements in the given order (coordinate i pairs with
/// elements[i]). Throws CapacityError if (2H+1)^k exceeds the budget.
RelationLattice relation_set(std::span<const std::int64_t> elements, int box,
                             std::int64_t budget = 10'000'000);

/// Relations for A in increasing element order.
RelationLattice relation_set(const IntSet& a, int box, std::int64_t budget = 10'000'000);

/// Row-style HNF of the span of the rows: pivots strictly move right, pivot
/// entries positive, entries above a pivot reduced into [0, pivot). Zero rows
/// are dropped.
IntRows hermite_normal_form(const IntRows& rows);

/// Membership of v in the row lattice of an HNF basis.
bool lattice_contains(const IntRows& hnf, std::span<const std::int64_t> v);

/// (relation sets equal) implies (growth sequences to H equal). Requires |A| = |B|.
bool lattice_determines_sequence_check(const IntSet& a, const IntSet& b, int box);

}  // namespace sumset
