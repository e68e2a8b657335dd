#pragma once

// Prescribed sumset-size differences in (Z/pZ)^(H+M).
//
// The ambient group splits as V x W with V = (Z/pZ)^H (first H coordinates)
// and W = (Z/pZ)^M. With e_i the standard basis of V,
//
//   A = U_{i<H} {e_i} x B_i(0)  u  {e_H} x (W \ A')
//
// and likewise B with B'. A' and B' are disjoint unions of l1 balls whose
// radii come from the gap sequence t_r; the counts gamma_r solve an
// upper-triangular unit-diagonal integer system C gamma = m.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/construct_int.hpp"
#include "sumset/zp_lattice.hpp"

namespace sumset {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

struct GapSequences {
  std::vector<std::int64_t> s;  // s_1..s_{H-1}, s_r = ceil(r / (p-1))
  std::vector<std::int64_t> t;  // t_1..t_H, t_r = s_1 + ... + s_{r-1}
};

GapSequences gap_sequences(std::uint32_t p, int horizon);

/// Nondecreasing (h-1)-tuples over [1, H-1] with every index repeated fewer
/// than p times, in lexicographic order.
std::vector<std::vector<int>> star_tuples(std::uint32_t p, int horizon, int h);

/// C[h-1][r-1]: coefficient of gamma_r in |hA| - |hB|. Radius-0 terms count 1.
IntMatrix coefficient_matrix(std::uint32_t p, int horizon, int dim_w);

/// H^(H-1) (3M)^(t_H), as a floating-point magnitude.
long double coefficient_bound(std::uint32_t p, int horizon, int dim_w);

/// Back-substitution for an upper-triangular unit-diagonal system.
GammaVector solve_gamma_zp(const IntMatrix& c, const Deltas& d);

enum class MatrixSource { Enumerated, Probed };

struct BallPlacement {
  ZpVec center;         // in W
  std::int64_t radius;  // some t_r
};

struct ZpPlan {
  std::uint32_t p = 2;
  int horizon = 1;
  int dim_w = 1;
  GapSequences gaps;
  IntMatrix matrix;
  MatrixSource source = MatrixSource::Enumerated;
  SeparationRule rule = SeparationRule::Uniform;
  GammaVector gamma;
  std::vector<BallPlacement> balls_a;
  std::vector<BallPlacement> balls_b;
  long double coeff_bound = 0;

  /// Center separation demanded by the uniform rule: 3 t_H (at least 1).
  std::int64_t uniform_separation() const;
};

struct ZpPair {
  ZpSet a;
  ZpSet b;
  ZpSet a_removed;  // A' in W
  ZpSet b_removed;  // B' in W
};

/// Smallest feasible W-dimension for the given rule and matrix source.
/// Throws CapacityError naming the failing constraint when none exists with
/// p^(H+M) below the dense capacity.
ZpPlan plan_zp(std::uint32_t p, const Deltas& d, SeparationRule rule,
               MatrixSource source = MatrixSource::Enumerated);

/// Smallest feasible M under the uniform rule, falling back to the
/// radius-aware rule only when the uniform rule admits no M.
int choose_M(std::uint32_t p, int horizon, const Deltas& d);

ZpPair realize_zp(const ZpPlan& plan);

/// The ambient sets for explicit removal sets A', B' in W.
ZpPair assemble_zp(std::uint32_t p, int horizon, const ZpSet& a_removed, const ZpSet& b_removed);

/// |S|, |2S|, ..., |HS| by brute-force sumsets.
std::vector<std::int64_t> growth_sequence_zp(const ZpSet& s, int horizon);

/// Measured column r (1-based) of the coefficient matrix: A' empty, B' a
/// single ball of radius t_r at the origin. Throws DomainError unless
/// M >= t_r + 1 and 2|ball| < p^M, where the column is well defined.
std::vector<std::int64_t> empirical_coefficient_probe(std::uint32_t p, int horizon, int dim_w, int r);

IntMatrix probed_matrix(std::uint32_t p, int horizon, int dim_w);

enum class Side { A, B };

/// |hA| (or |hB|) from the three-part decomposition by V-coordinate.
std::int64_t predicted_size_decomposition(const ZpPlan& plan, int h, Side side);

/// H + ceil(10 log_p(1 + H^(H^3) sum|m_h|)), the closed-form dimension.
long double closed_form_dimension(std::uint32_t p, int horizon, std::int64_t abs_sum);

struct ZpCertificate {
  std::uint32_t p = 2;
  ZpSet a{2, 1};
  ZpSet b{2, 1};
  Deltas target;
  std::vector<std::int64_t> measured;
  bool verified = false;
  int m_used = 0;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

/// Plans, realizes and brute-force verifies. Falls back to the probed
/// matrix, then to radius-aware separation, if a construction fails
/// verification. Throws VerificationError if every attempt fails.
ZpCertificate build_and_verify_zp(std::uint32_t p, const Deltas& d);

nlohmann::ordered_json to_json(const ZpCertificate& c);

std::string to_string(SeparationRule rule);
std::string to_string(MatrixSource source);

}  // namespace sumset
