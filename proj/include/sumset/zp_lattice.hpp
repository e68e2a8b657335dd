#pragma once

// Points, l1 geometry and exact sumsets in (Z/pZ)^M.
//
// Sets are dense occupancy arrays over the mixed-radix encoding
//   index(x) = x_0 * p^(M-1) + ... + x_(M-1),
// so ascending index order is lexicographic order on coordinates.

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace sumset {

/// Upper bound on the number of cells of any dense ZpSet.
inline constexpr std::int64_t kZpDenseCapacity = std::int64_t{1} << 26;

bool is_prime(std::int64_t n);

struct ZpVec {
  std::uint32_t p = 2;
  std::vector<std::uint32_t> coords;

  ZpVec() = default;
  /// Reduces every coordinate modulo p.
  ZpVec(std::uint32_t p, std::vector<std::int64_t> coords);
  static ZpVec zero(std::uint32_t p, int dim);

  int dim() const { return static_cast<int>(coords.size()); }

  friend bool operator==(const ZpVec&, const ZpVec&) = default;
};

ZpVec operator+(const ZpVec& a, const ZpVec& b);
ZpVec operator-(const ZpVec& a, const ZpVec& b);

/// min(x, p - x) for a residue x.
std::uint32_t fold_norm(std::uint32_t p, std::uint32_t x);

std::int64_t l1_dist(const ZpVec& x, const ZpVec& y);

class ZpSet {
 public:
  /// Empty subset of (Z/pZ)^dim. Throws CapacityError above kZpDenseCapacity cells.
  ZpSet(std::uint32_t p, int dim);
  static ZpSet full(std::uint32_t p, int dim);

  std::uint32_t p() const { return p_; }
  int dim() const { return dim_; }
  std::int64_t cells() const { return cells_; }
  std::int64_t size() const;
  bool empty() const { return size() == 0; }

  void insert(const ZpVec& x);
  void insert_index(std::int64_t idx) { bits_[idx >> 6] |= std::uint64_t{1} << (idx & 63); }
  void erase_index(std::int64_t idx) { bits_[idx >> 6] &= ~(std::uint64_t{1} << (idx & 63)); }
  bool contains(const ZpVec& x) const;
  bool contains_index(std::int64_t idx) const { return (bits_[idx >> 6] >> (idx & 63)) & 1; }

  std::int64_t index_of(const ZpVec& x) const;
  ZpVec vec_at(std::int64_t idx) const;

  /// Members in lexicographic order.
  std::vector<ZpVec> members() const;
  std::vector<std::int64_t> member_indices() const;

  ZpSet complement() const;
  ZpSet unite(const ZpSet& other) const;
  ZpSet minus(const ZpSet& other) const;

  friend bool operator==(const ZpSet& a, const ZpSet& b) {
    return a.p_ == b.p_ && a.dim_ == b.dim_ && a.bits_ == b.bits_;
  }

  // Raw word access for sumset kernels.
  std::span<const std::uint64_t> words() const { return bits_; }
  std::span<std::uint64_t> words() { return bits_; }

 private:
  std::uint32_t p_;
  int dim_;
  std::int64_t cells_;
  std::vector<std::uint64_t> bits_;
};

/// {y : l1_dist(center, y) <= radius}
ZpSet ball(const ZpVec& center, std::int64_t radius);

/// |B_R(0)| in (Z/pZ)^M, counted by convolving per-coordinate norm weights.
std::int64_t ball_size(std::uint32_t p, int dim, std::int64_t radius);

/// Exact S + T.
ZpSet sumset_zp(const ZpSet& s, const ZpSet& t);

/// Exact h-fold sumset.
ZpSet hfold_zp(const ZpSet& s, int h);

/// Deterministic lexicographic greedy: `count` points with pairwise l1
/// distance >= min_dist. Throws CapacityError carrying the achieved count.
std::vector<ZpVec> separated_points(std::uint32_t p, int dim, std::int64_t count,
                                    std::int64_t min_dist);

/// Rule deciding how far apart two ball centers must be.
enum class SeparationRule {
  Uniform,      // every pair at distance >= min_dist
  RadiusAware,  // radii a, b at distance >= a + b + 2
};

/// Greedy placement of ball centers for the given radii (must be
/// non-increasing). Each radius class rescans from the lexicographic origin.
/// Returns fewer centers than radii when the space runs out.
std::vector<ZpVec> place_centers(std::uint32_t p, int dim, std::span<const std::int64_t> radii,
                                 SeparationRule rule, std::int64_t min_dist);

nlohmann::ordered_json to_json(const ZpVec& x);
nlohmann::ordered_json to_json(const ZpSet& s);
ZpVec zp_vec_from_json(const nlohmann::ordered_json& j);
ZpSet zp_set_from_json(const nlohmann::ordered_json& j);

}  // namespace sumset
