#pragma once

// Finite sets of integers and their iterated sumsets.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace sumset {

/// A finite set of integers, stored strictly increasing.
class IntSet {
 public:
  IntSet() = default;
  /// Sorts and removes duplicates.
  IntSet(std::initializer_list<std::int64_t> xs);
  explicit IntSet(std::vector<std::int64_t> xs);

  /// Requires `xs` to be strictly increasing; throws DomainError otherwise.
  static IntSet from_sorted(std::vector<std::int64_t> xs);
  /// The integer interval [lo, hi].
  static IntSet interval(std::int64_t lo, std::int64_t hi);

  std::span<const std::int64_t> elements() const noexcept { return elems_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  std::int64_t min() const;
  std::int64_t max() const;
  bool contains(std::int64_t x) const;

  /// c + A
  IntSet translate(std::int64_t c) const;
  /// lambda * A
  IntSet dilate(std::int64_t lambda) const;
  IntSet unite(const IntSet& other) const;

  std::string to_string() const;

  friend bool operator==(const IntSet&, const IntSet&) = default;
  friend auto operator<=>(const IntSet& a, const IntSet& b) { return a.elems_ <=> b.elems_; }

 private:
  std::vector<std::int64_t> elems_;
};

/// |A|, |2A|, ..., |HA|; index 0 holds |1A|.
struct GrowthSequence {
  int horizon = 0;
  std::vector<std::int64_t> sizes;

  friend bool operator==(const GrowthSequence&, const GrowthSequence&) = default;
};

/// The h-fold sumset {a_1 + ... + a_h : a_i in A}.
IntSet hfold(const IntSet& a, int h);

/// The sumset A + B.
IntSet sumset(const IntSet& a, const IntSet& b);

GrowthSequence growth_sequence(const IntSet& a, int horizon);

/// (|hA| - |hB|) for h = 1..H.
std::vector<std::int64_t> delta_sequence(const IntSet& a, const IntSet& b, int horizon);

/// Canonical representative under translation and reflection: the
/// lexicographically smaller of A - min(A) and max(A) - A.
IntSet normalize(const IntSet& a);

std::int64_t diameter(const IntSet& a);

// JSON: a plain array of integers in strictly increasing order.
nlohmann::ordered_json to_json(const IntSet& a);
IntSet int_set_from_json(const nlohmann::ordered_json& j);

}  // namespace sumset
