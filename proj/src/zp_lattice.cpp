#include "sumset/zp_lattice.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "sumset/checked.hpp"
#include "sumset/errors.hpp"

namespace sumset {

namespace {

// Place values for a mixed-radix space of `dim` base-p digits.
struct Radix {
  std::uint32_t p;
  int dim;
  std::vector<std::int64_t> place;  // place[i] = p^(dim-1-i)
  std::int64_t cells;

  Radix(std::uint32_t p_, int dim_) : p(p_), dim(dim_), place(dim_), cells(1) {
    for (int i = dim - 1; i >= 0; --i) {
      place[i] = cells;
      cells = checked::mul(cells, p);
    }
  }

  void decode(std::int64_t idx, std::uint32_t* digits) const {
    for (int i = dim - 1; i >= 0; --i) {
      digits[i] = static_cast<std::uint32_t>(idx % p);
      idx /= p;
    }
  }

  std::int64_t add(const std::uint32_t* a, const std::uint32_t* b) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) {
      std::uint32_t d = a[i] + b[i];
      if (d >= p) d -= p;
      idx += d * place[i];
    }
    return idx;
  }

  std::int64_t sub(const std::uint32_t* a, const std::uint32_t* b) const {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) {
      const std::uint32_t d = a[i] >= b[i] ? a[i] - b[i] : a[i] + p - b[i];
      idx += d * place[i];
    }
    return idx;
  }
};

std::int64_t cell_count(std::uint32_t p, int dim) {
  if (p < 2) throw DomainError("modulus must be >= 2");
  if (dim < 1) throw DomainError("dimension must be >= 1");
  std::int64_t cells = 1;
  for (int i = 0; i < dim; ++i) {
    if (cells > kZpDenseCapacity / p)
      throw CapacityError("(Z/pZ)^M exceeds dense capacity of 2^26 cells");
    cells *= p;
  }
  return cells;
}

void require_same_space(const ZpVec& x, const ZpVec& y) {
  if (x.p != y.p || x.coords.size() != y.coords.size())
    throw DomainError("ZpVec modulus/dimension mismatch");
}

// Visits every point within l1 distance `radius` of `center` as (index, distance).
void for_each_in_ball(const Radix& rx, std::span<const std::uint32_t> center, std::int64_t radius,
                      const std::function<void(std::int64_t, std::int64_t)>& fn) {
  const std::uint32_t p = rx.p;
  std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int i, std::int64_t idx,
                                                                  std::int64_t dist) {
    if (i == rx.dim) {
      fn(idx, dist);
      return;
    }
    for (std::uint32_t off = 0; off < p; ++off) {
      const std::int64_t w = fold_norm(p, off);
      if (dist + w > radius) continue;
      std::uint32_t c = center[i] + off;
      if (c >= p) c -= p;
      rec(i + 1, idx + c * rx.place[i], dist + w);
    }
  };
  rec(0, 0, 0);
}

// ---- word-level helpers over a bit array ----

std::int64_t range_popcount(std::span<const std::uint64_t> bits, std::int64_t a, std::int64_t b) {
  std::int64_t c = 0;
  while (a < b && (a & 63)) {
    c += (bits[a >> 6] >> (a & 63)) & 1;
    ++a;
  }
  while (a + 64 <= b) {
    c += __builtin_popcountll(bits[a >> 6]);
    a += 64;
  }
  while (a < b) {
    c += (bits[a >> 6] >> (a & 63)) & 1;
    ++a;
  }
  return c;
}

void set_range(std::span<std::uint64_t> bits, std::int64_t a, std::int64_t b) {
  while (a < b && (a & 63)) {
    bits[a >> 6] |= std::uint64_t{1} << (a & 63);
    ++a;
  }
  while (a + 64 <= b) {
    bits[a >> 6] = ~std::uint64_t{0};
    a += 64;
  }
  while (a < b) {
    bits[a >> 6] |= std::uint64_t{1} << (a & 63);
    ++a;
  }
}

inline bool test_bit(std::span<const std::uint64_t> bits, std::int64_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1;
}

inline void set_bit(std::span<std::uint64_t> bits, std::int64_t i) {
  bits[i >> 6] |= std::uint64_t{1} << (i & 63);
}

std::vector<std::int64_t> range_members(std::span<const std::uint64_t> bits, std::int64_t a,
                                        std::int64_t b, bool want_set) {
  std::vector<std::int64_t> out;
  for (std::int64_t i = a; i < b;) {
    if ((i & 63) == 0 && i + 64 <= b) {
      std::uint64_t w = bits[i >> 6];
      if (!want_set) w = ~w;
      while (w) {
        out.push_back(i + __builtin_ctzll(w) - a);
        w &= w - 1;
      }
      i += 64;
    } else {
      if (test_bit(bits, i) == want_set) out.push_back(i - a);
      ++i;
    }
  }
  return out;
}

// ---- fiber decomposition for sumsets ----
//
// Splitting the first k coordinates off, a set S becomes a family of fibers
// S_u in (Z/pZ)^(n-k), and S + T is the union over fiber pairs of
// {u + v} x (S_u + T_v). Each fiber sum is evaluated by whichever exact method
// is cheapest: pigeonhole fill, translation, pairwise, or complement scan.

enum class FiberMethod { Fill, Translate, Pairwise, Complement };

struct FiberPlan {
  FiberMethod method;
  double cost;
  bool swap;  // evaluate as T_v + S_u
};

FiberPlan plan_fiber(std::int64_t x, std::int64_t y, std::int64_t f, int m) {
  if (x + y > f) return {FiberMethod::Fill, f / 64.0 + 1, false};
  const bool swap = x > y;
  const double small = static_cast<double>(std::min(x, y));
  const double big = static_cast<double>(std::max(x, y));
  const double md = std::max(m, 1);
  FiberPlan best{FiberMethod::Translate, small * f, swap};
  if (small * big * md < best.cost) best = {FiberMethod::Pairwise, small * big * md, swap};
  const double comp = (f - big) * small * md;
  if (comp < best.cost) best = {FiberMethod::Complement, comp, swap};
  return best;
}

struct Fibers {
  std::int64_t size;                          // cells per fiber
  std::vector<std::int64_t> nonempty;         // fiber ids
  std::vector<std::int64_t> counts;           // member count per nonempty fiber
};

Fibers fibers_of(const ZpSet& s, std::int64_t fiber_size) {
  Fibers fb{fiber_size, {}, {}};
  const std::int64_t nf = s.cells() / fiber_size;
  for (std::int64_t u = 0; u < nf; ++u) {
    const std::int64_t c = range_popcount(s.words(), u * fiber_size, (u + 1) * fiber_size);
    if (c) {
      fb.nonempty.push_back(u);
      fb.counts.push_back(c);
    }
  }
  return fb;
}

// Sum of fiber X (at xbase) and fiber Y (at ybase), OR-ed into out at obase.
void fiber_sum(const ZpSet& xs, std::int64_t xbase, std::int64_t xcount, const ZpSet& ys,
               std::int64_t ybase, std::int64_t ycount, const Radix& rx, FiberPlan plan,
               ZpSet& out, std::int64_t obase) {
  const std::int64_t f = rx.cells;
  const int m = rx.dim;
  auto obits = out.words();
  if (plan.method == FiberMethod::Fill) {
    set_range(obits, obase, obase + f);
    return;
  }
  // After the swap, X is the smaller operand.
  const ZpSet* sx = &xs;
  const ZpSet* sy = &ys;
  if (plan.swap) {
    std::swap(sx, sy);
    std::swap(xbase, ybase);
    std::swap(xcount, ycount);
  }
  const auto xmembers = range_members(sx->words(), xbase, xbase + f, true);
  std::vector<std::uint32_t> xdig(xmembers.size() * std::max(m, 1));
  for (std::size_t i = 0; i < xmembers.size(); ++i) rx.decode(xmembers[i], &xdig[i * m]);
  const auto ybits = sy->words();

  switch (plan.method) {
    case FiberMethod::Translate: {
      std::vector<std::uint32_t> y(m), z(m);
      for (std::size_t k = 0; k < xmembers.size(); ++k) {
        const std::uint32_t* x = &xdig[k * m];
        std::fill(y.begin(), y.end(), 0);
        std::int64_t dest = 0;
        for (int i = 0; i < m; ++i) {
          z[i] = x[i];
          dest += z[i] * rx.place[i];
        }
        for (std::int64_t cell = 0; cell < f; ++cell) {
          if (test_bit(ybits, ybase + cell)) set_bit(obits, obase + dest);
          // advance odometer y and keep z = y + x, dest = index(z)
          for (int i = m - 1; i >= 0; --i) {
            ++y[i];
            if (++z[i] == rx.p) {
              z[i] = 0;
              dest -= static_cast<std::int64_t>(rx.p - 1) * rx.place[i];
            } else {
              dest += rx.place[i];
            }
            if (y[i] < rx.p) break;
            y[i] = 0;
          }
        }
      }
      break;
    }
    case FiberMethod::Pairwise: {
      const auto ymembers = range_members(ybits, ybase, ybase + f, true);
      std::vector<std::uint32_t> yd(m);
      for (std::int64_t yi : ymembers) {
        rx.decode(yi, yd.data());
        for (std::size_t k = 0; k < xmembers.size(); ++k)
          set_bit(obits, obase + rx.add(yd.data(), &xdig[k * m]));
      }
      break;
    }
    case FiberMethod::Complement: {
      // z is missing from X + Y iff z - x lies outside Y for every x in X.
      const auto holes = range_members(ybits, ybase, ybase + f, false);
      std::vector<std::uint32_t> cd(m), zd(m);
      std::vector<std::int64_t> excluded;
      for (std::int64_t c : holes) {
        rx.decode(c, cd.data());
        for (int i = 0; i < m; ++i) {
          zd[i] = cd[i] + xdig[i];
          if (zd[i] >= rx.p) zd[i] -= rx.p;
        }
        bool missing = true;
        for (std::size_t k = 1; k < xmembers.size() && missing; ++k)
          missing = !test_bit(ybits, ybase + rx.sub(zd.data(), &xdig[k * m]));
        if (missing) {
          std::int64_t z = 0;
          for (int i = 0; i < m; ++i) z += zd[i] * rx.place[i];
          excluded.push_back(z);
        }
      }
      std::vector<char> before(excluded.size());
      for (std::size_t i = 0; i < excluded.size(); ++i)
        before[i] = test_bit(obits, obase + excluded[i]);
      set_range(obits, obase, obase + f);
      for (std::size_t i = 0; i < excluded.size(); ++i)
        if (!before[i]) out.erase_index(obase + excluded[i]);
      break;
    }
    case FiberMethod::Fill:
      break;
  }
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

ZpVec::ZpVec(std::uint32_t p_, std::vector<std::int64_t> cs) : p(p_) {
  if (p < 2) throw DomainError("modulus must be >= 2");
  coords.reserve(cs.size());
  for (std::int64_t c : cs) {
    std::int64_t r = c % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    coords.push_back(static_cast<std::uint32_t>(r));
  }
}

ZpVec ZpVec::zero(std::uint32_t p, int dim) {
  ZpVec v;
  v.p = p;
  v.coords.assign(dim, 0);
  return v;
}

ZpVec operator+(const ZpVec& a, const ZpVec& b) {
  require_same_space(a, b);
  ZpVec r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = (a.coords[i] + b.coords[i]) % a.p;
  return r;
}

ZpVec operator-(const ZpVec& a, const ZpVec& b) {
  require_same_space(a, b);
  ZpVec r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i)
    r.coords[i] = (a.coords[i] + a.p - b.coords[i]) % a.p;
  return r;
}

std::uint32_t fold_norm(std::uint32_t p, std::uint32_t x) {
  if (x >= p) throw DomainError("fold_norm: residue out of range");
  return std::min(x, p - x);
}

std::int64_t l1_dist(const ZpVec& x, const ZpVec& y) {
  require_same_space(x, y);
  std::int64_t d = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const std::uint32_t diff = (x.coords[i] + x.p - y.coords[i]) % x.p;
    d += fold_norm(x.p, diff);
  }
  return d;
}

// ---- ZpSet ----

ZpSet::ZpSet(std::uint32_t p, int dim)
    : p_(p), dim_(dim), cells_(cell_count(p, dim)), bits_((cells_ + 63) / 64, 0) {}

ZpSet ZpSet::full(std::uint32_t p, int dim) {
  ZpSet s(p, dim);
  set_range(s.bits_, 0, s.cells_);
  return s;
}

std::int64_t ZpSet::size() const {
  std::int64_t c = 0;
  for (std::uint64_t w : bits_) c += __builtin_popcountll(w);
  return c;
}

std::int64_t ZpSet::index_of(const ZpVec& x) const {
  if (x.p != p_ || x.dim() != dim_) throw DomainError("ZpVec does not belong to this space");
  std::int64_t idx = 0;
  for (std::uint32_t c : x.coords) idx = idx * p_ + c;
  return idx;
}

ZpVec ZpSet::vec_at(std::int64_t idx) const {
  ZpVec v = ZpVec::zero(p_, dim_);
  for (int i = dim_ - 1; i >= 0; --i) {
    v.coords[i] = static_cast<std::uint32_t>(idx % p_);
    idx /= p_;
  }
  return v;
}

void ZpSet::insert(const ZpVec& x) { insert_index(index_of(x)); }

bool ZpSet::contains(const ZpVec& x) const { return contains_index(index_of(x)); }

std::vector<std::int64_t> ZpSet::member_indices() const {
  return range_members(bits_, 0, cells_, true);
}

std::vector<ZpVec> ZpSet::members() const {
  std::vector<ZpVec> out;
  for (std::int64_t i : member_indices()) out.push_back(vec_at(i));
  return out;
}

ZpSet ZpSet::complement() const {
  ZpSet r = full(p_, dim_);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~bits_[i];
  return r;
}

ZpSet ZpSet::unite(const ZpSet& other) const {
  if (other.p_ != p_ || other.dim_ != dim_) throw DomainError("ZpSet space mismatch");
  ZpSet r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] |= other.bits_[i];
  return r;
}

ZpSet ZpSet::minus(const ZpSet& other) const {
  if (other.p_ != p_ || other.dim_ != dim_) throw DomainError("ZpSet space mismatch");
  ZpSet r = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] &= ~other.bits_[i];
  return r;
}

ZpSet ball(const ZpVec& center, std::int64_t radius) {
  if (radius < 0) throw DomainError("ball: radius must be >= 0");
  ZpSet s(center.p, center.dim());
  const Radix rx(center.p, center.dim());
  for_each_in_ball(rx, center.coords, radius,
                   [&](std::int64_t idx, std::int64_t) { s.insert_index(idx); });
  return s;
}

std::int64_t ball_size(std::uint32_t p, int dim, std::int64_t radius) {
  if (p < 2) throw DomainError("ball_size: modulus must be >= 2");
  if (dim < 1) throw DomainError("ball_size: dimension must be >= 1");
  if (radius < 0) throw DomainError("ball_size: radius must be >= 0");
  const std::int64_t half = p / 2;
  // weight[w] = number of residues of fold norm w
  std::vector<std::int64_t> weight(half + 1, p == 2 ? 1 : 2);
  weight[0] = 1;
  const std::int64_t cap = std::min<std::int64_t>(radius, half * dim);
  std::vector<std::int64_t> dist(cap + 1, 0), next(cap + 1);
  dist[0] = 1;
  for (int i = 0; i < dim; ++i) {
    std::fill(next.begin(), next.end(), 0);
    for (std::int64_t a = 0; a <= cap; ++a) {
      if (!dist[a]) continue;
      for (std::int64_t w = 0; w <= half && a + w <= cap; ++w)
        next[a + w] = checked::add(next[a + w], checked::mul(dist[a], weight[w]));
    }
    std::swap(dist, next);
  }
  std::int64_t total = 0;
  for (std::int64_t c : dist) total = checked::add(total, c);
  return total;
}

ZpSet sumset_zp(const ZpSet& s, const ZpSet& t) {
  if (s.p() != t.p() || s.dim() != t.dim()) throw DomainError("sumset_zp: space mismatch");
  if (s.empty() || t.empty()) throw DomainError("sumset_zp: sets must be nonempty");
  const std::uint32_t p = s.p();
  const int n = s.dim();

  // Pick the split with the lowest estimated cost.
  constexpr double kMaxPairs = 4e6;
  int best_k = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  std::int64_t fiber_size = s.cells();
  for (int k = 0; k <= n; ++k, fiber_size /= p) {
    if (s.cells() / fiber_size > (std::int64_t{1} << 20)) break;
    const Fibers fs = fibers_of(s, fiber_size);
    const Fibers ft = fibers_of(t, fiber_size);
    if (static_cast<double>(fs.nonempty.size()) * ft.nonempty.size() > kMaxPairs) continue;
    double cost = 0;
    for (std::int64_t xc : fs.counts)
      for (std::int64_t yc : ft.counts) cost += plan_fiber(xc, yc, fiber_size, n - k).cost;
    if (cost < best_cost) {
      best_cost = cost;
      best_k = k;
    }
  }

  const Radix outer(p, best_k);
  const Radix inner(p, n - best_k);
  const std::int64_t f = inner.cells;
  const Fibers fs = fibers_of(s, f);
  const Fibers ft = fibers_of(t, f);
  ZpSet out(p, n);
  std::vector<std::uint32_t> ud(std::max(best_k, 1)), vd(std::max(best_k, 1));
  for (std::size_t a = 0; a < fs.nonempty.size(); ++a) {
    const std::int64_t u = fs.nonempty[a];
    outer.decode(u, ud.data());
    for (std::size_t b = 0; b < ft.nonempty.size(); ++b) {
      const std::int64_t v = ft.nonempty[b];
      outer.decode(v, vd.data());
      const std::int64_t w = outer.add(ud.data(), vd.data());
      if (range_popcount(out.words(), w * f, (w + 1) * f) == f) continue;
      const FiberPlan plan = plan_fiber(fs.counts[a], ft.counts[b], f, inner.dim);
      fiber_sum(s, u * f, fs.counts[a], t, v * f, ft.counts[b], inner, plan, out, w * f);
    }
  }
  return out;
}

ZpSet hfold_zp(const ZpSet& s, int h) {
  if (h < 1) throw DomainError("hfold_zp: h must be >= 1");
  if (s.empty()) throw DomainError("hfold_zp: set must be nonempty");
  ZpSet acc = s;
  for (int k = 2; k <= h; ++k) acc = sumset_zp(acc, s);
  return acc;
}

std::vector<ZpVec> place_centers(std::uint32_t p, int dim, std::span<const std::int64_t> radii,
                                 SeparationRule rule, std::int64_t min_dist) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] > radii[i - 1]) throw DomainError("place_centers: radii must be non-increasing");
  if (!radii.empty() && radii.back() < 0) throw DomainError("place_centers: negative radius");
  const std::int64_t cells = cell_count(p, dim);
  const Radix rx(p, dim);
  min_dist = std::max<std::int64_t>(min_dist, 1);
  constexpr std::int32_t kFar = std::numeric_limits<std::int32_t>::max();

  // slack[y] = min over accepted c of d(y, c) - offset(c); a new center of
  // radius r fits at y iff slack[y] >= need(r).
  std::vector<std::int32_t> slack(cells, kFar);
  const bool uniform = rule == SeparationRule::Uniform;
  auto need = [&](std::int64_t r) { return uniform ? min_dist : r + 2; };

  std::vector<ZpVec> centers;
  std::vector<std::uint32_t> digits(dim);
  std::int64_t cursor = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0 && radii[i] != radii[i - 1]) cursor = 0;
    const std::int64_t want = need(radii[i]);
    while (cursor < cells && slack[cursor] < want) ++cursor;
    if (cursor == cells) break;
    const std::int64_t c = cursor++;
    rx.decode(c, digits.data());
    ZpVec v = ZpVec::zero(p, dim);
    std::copy(digits.begin(), digits.end(), v.coords.begin());
    centers.push_back(std::move(v));
    const std::int64_t offset = uniform ? 0 : radii[i];
    // later radii are <= radii[i], so only points closer than this can be affected
    const std::int64_t reach = uniform ? min_dist - 1 : 2 * radii[i] + 1;
    for_each_in_ball(rx, digits, reach, [&](std::int64_t idx, std::int64_t d) {
      const auto s = static_cast<std::int32_t>(d - offset);
      if (s < slack[idx]) slack[idx] = s;
    });
  }
  return centers;
}

std::vector<ZpVec> separated_points(std::uint32_t p, int dim, std::int64_t count,
                                    std::int64_t min_dist) {
  if (count < 1) throw DomainError("separated_points: count must be >= 1");
  if (min_dist < 1) throw DomainError("separated_points: minDist must be >= 1");
  std::vector<std::int64_t> radii(count, 0);
  auto pts = place_centers(p, dim, radii, SeparationRule::Uniform, min_dist);
  if (static_cast<std::int64_t>(pts.size()) < count)
    throw CapacityError("separated_points: only " + std::to_string(pts.size()) +
                            " points fit at this minimum distance",
                        static_cast<std::int64_t>(pts.size()));
  return pts;
}

// ---- JSON ----

nlohmann::ordered_json to_json(const ZpVec& x) {
  nlohmann::ordered_json j;
  j["p"] = x.p;
  j["coords"] = x.coords;
  return j;
}

nlohmann::ordered_json to_json(const ZpSet& s) {
  nlohmann::ordered_json j;
  j["p"] = s.p();
  j["M"] = s.dim();
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (const ZpVec& v : s.members()) members.push_back(v.coords);
  j["members"] = std::move(members);
  return j;
}

ZpVec zp_vec_from_json(const nlohmann::ordered_json& j) {
  const auto p = j.at("p").get<std::int64_t>();
  if (p < 2 || p > std::numeric_limits<std::uint32_t>::max()) throw DomainError("bad modulus");
  ZpVec v;
  v.p = static_cast<std::uint32_t>(p);
  for (const auto& c : j.at("coords")) {
    const auto x = c.get<std::int64_t>();
    if (x < 0 || x >= p) throw DomainError("ZpVec coordinate not reduced modulo p");
    v.coords.push_back(static_cast<std::uint32_t>(x));
  }
  if (v.coords.empty()) throw DomainError("ZpVec must have dimension >= 1");
  return v;
}

ZpSet zp_set_from_json(const nlohmann::ordered_json& j) {
  const auto p = j.at("p").get<std::int64_t>();
  const auto dim = j.at("M").get<int>();
  if (p < 2 || p > std::numeric_limits<std::uint32_t>::max()) throw DomainError("bad modulus");
  ZpSet s(static_cast<std::uint32_t>(p), dim);
  std::int64_t prev = -1;
  for (const auto& m : j.at("members")) {
    nlohmann::ordered_json vj;
    vj["p"] = p;
    vj["coords"] = m;
    const ZpVec v = zp_vec_from_json(vj);
    if (v.dim() != dim) throw DomainError("ZpSet member has wrong dimension");
    const std::int64_t idx = s.index_of(v);
    if (idx <= prev) throw DomainError("ZpSet members must be sorted and distinct");
    prev = idx;
    s.insert_index(idx);
  }
  return s;
}

}  // namespace sumset
