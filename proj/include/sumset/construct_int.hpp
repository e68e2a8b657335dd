#pragma once

// Integer sets with exactly prescribed sumset-size differences
// |hA| - |hB| = m_h, plus the compact sign-pattern variant.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/int_set.hpp"

namespace sumset {

/// Target differences m_1..m_H.
struct Deltas {
  std::vector<std::int64_t> m;

  int horizon() const { return static_cast<int>(m.size()); }
  std::int64_t abs_sum() const;
};

/// Interval (or ball) multiplicities gamma_1..gamma_H, split into the
/// nonnegative parts alpha (removed from the A side) and beta (B side).
struct GammaVector {
  std::vector<std::int64_t> gamma;

  std::int64_t alpha(int r) const;  // 1-based
  std::int64_t beta(int r) const;   // 1-based
  std::int64_t abs_sum() const;
};

struct Removal {
  std::int64_t left;
  std::int64_t length;

  friend bool operator==(const Removal&, const Removal&) = default;
};

struct IntPlan {
  int horizon = 0;
  std::int64_t constant = 60;
  std::int64_t n = 0;            // range bound N
  std::int64_t interval_lo = 0;  // I = [interval_lo, n]
  std::int64_t middle_lo = 0;    // middle third of I
  std::int64_t middle_hi = 0;
  GammaVector gamma;
  std::vector<Removal> removals_a;
  std::vector<Removal> removals_b;
};

struct ConstructionCertificate {
  IntSet a;
  IntSet b;
  Deltas target;
  std::vector<std::int64_t> measured;
  bool verified = false;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  std::int64_t size_a() const { return static_cast<std::int64_t>(a.size()); }
  std::int64_t size_b() const { return static_cast<std::int64_t>(b.size()); }
  std::int64_t diam_a() const { return diameter(a); }
  std::int64_t diam_b() const { return diameter(b); }
};

/// gamma_H = m_H, gamma_{H-1} = m_{H-1} - 2 m_H,
/// gamma_r = m_r - 2 m_{r+1} + m_{r+2}.
GammaVector solve_gamma(const Deltas& d);

/// sum_{r >= h} gamma_r (r - h + 1), the difference a gamma vector produces.
std::vector<std::int64_t> linear_model(const GammaVector& g);

IntPlan build_plan(const Deltas& d, std::int64_t constant = 60);

struct IntPair {
  IntSet a;
  IntSet b;
};

/// A = {0,1} u (I \ A'), B = {0,1} u (I \ B'); A = B = {0} when m = 0.
IntPair realize(const IntPlan& plan);

/// Builds, realizes and measures with brute-force sumsets. Throws
/// VerificationError if the measured deltas miss the target.
ConstructionCertificate construct_and_verify(const Deltas& d, std::int64_t constant = 60);

/// [0, D'] u {i D' : 0 <= i <= D / D'} u [D - D', D] with D' = floor(sqrt(D)).
IntSet xd_gadget(std::int64_t d);

/// Sign pattern over {-, +}; true means '+'.
struct SignPattern {
  std::vector<bool> plus;

  int horizon() const { return static_cast<int>(plus.size()); }
  std::string to_string() const;
  /// Parses a string over {+,-}; throws DomainError on anything else.
  static SignPattern parse(const std::string& s);
};

struct CompactPlan {
  SignPattern pattern;
  GammaVector gamma;
  IntSet a_seg;  // gaps exactly alpha_r of length r
  IntSet b_seg;
  std::int64_t d = 0;
  std::int64_t d_root = 0;
  IntSet xd;
  IntSet a_tilde;
  IntSet b_tilde;
};

/// Segment {0} u {sum_{i<=j} (s_i + 1)} with gap lengths drawn from mult
/// (mult[r-1] gaps of length r, in increasing r).
IntSet gap_segment(const std::vector<std::int64_t>& mult);

CompactPlan build_compact_plan(const SignPattern& pattern);

/// `verified` records whether |hA| - |hB| = +-1 exactly. Throws
/// VerificationError if any sign disagrees with the pattern.
ConstructionCertificate compact_sign_sets(const SignPattern& pattern);

nlohmann::ordered_json to_json(const ConstructionCertificate& c);

}  // namespace sumset
