#include "sumset/construct_zpn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sumset/checked.hpp"
#include "sumset/errors.hpp"

namespace sumset {

namespace {

std::string seq_string(const std::vector<std::int64_t>& xs) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << ')';
  return os.str();
}

void require_prime(std::uint32_t p) {
  if (!is_prime(p)) throw DomainError("p = " + std::to_string(p) + " is not prime");
}

// Nondecreasing tuples of length len over [lo, hi], multiplicity < p.
void multisets(int len, int lo, int hi, std::uint32_t p, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int i = lo; i <= hi; ++i) {
    const auto run = std::count(cur.begin(), cur.end(), i);
    if (static_cast<std::uint32_t>(run) + 1 >= p) continue;
    cur.push_back(i);
    multisets(len, i, hi, p, cur, out);
    cur.pop_back();
  }
}

// Radius of the ball B_{i_1} + ... + B_{i_k}.
std::int64_t weight(const std::vector<int>& tuple) {
  std::int64_t s = 0;
  for (int i : tuple) s += i;
  return s;
}

struct Slot {
  std::int64_t radius;
  Side side;
};

// Balls of both sides, radii descending, A before B within a radius.
std::vector<Slot> slots_for(const GammaVector& g, const GapSequences& gaps) {
  std::vector<Slot> out;
  const int hz = static_cast<int>(g.gamma.size());
  for (int r = hz; r >= 1; --r) {
    for (std::int64_t i = 0; i < g.alpha(r); ++i) out.push_back({gaps.t[r - 1], Side::A});
    for (std::int64_t i = 0; i < g.beta(r); ++i) out.push_back({gaps.t[r - 1], Side::B});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Slot& x, const Slot& y) { return x.radius > y.radius; });
  return out;
}

std::int64_t pow_or_max(std::uint32_t p, int e) {
  try {
    return checked::pow(p, e);
  } catch (const std::overflow_error&) {
    return std::numeric_limits<std::int64_t>::max();
  }
}

std::int64_t v_index(std::uint32_t p, int horizon, int i) {
  return checked::pow(p, horizon - i);  // e_i, coordinate i-1 set to 1
}

}  // namespace

GapSequences gap_sequences(std::uint32_t p, int horizon) {
  require_prime(p);
  if (horizon < 1) throw DomainError("gap_sequences: H must be >= 1");
  GapSequences g;
  const std::int64_t q = p - 1;
  for (int r = 1; r < horizon; ++r) g.s.push_back((r + q - 1) / q);
  std::int64_t acc = 0;
  for (int r = 1; r <= horizon; ++r) {
    g.t.push_back(acc);
    if (r < horizon) acc += g.s[r - 1];
  }
  return g;
}

std::vector<std::vector<int>> star_tuples(std::uint32_t p, int horizon, int h) {
  require_prime(p);
  if (h < 1 || h > horizon) throw DomainError("star_tuples: need 1 <= h <= H");
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  multisets(h - 1, 1, horizon - 1, p, cur, out);
  return out;
}

IntMatrix coefficient_matrix(std::uint32_t p, int horizon, int dim_w) {
  const GapSequences g = gap_sequences(p, horizon);
  IntMatrix c(horizon, std::vector<std::int64_t>(horizon, 0));
  for (int h = 1; h <= horizon; ++h) {
    for (const auto& tuple : star_tuples(p, horizon, h)) {
      const std::int64_t sigma = weight(tuple);
      for (int r = 1; r <= horizon; ++r) {
        if (g.t[r - 1] < sigma) continue;
        c[h - 1][r - 1] = checked::add(c[h - 1][r - 1], ball_size(p, dim_w, g.t[r - 1] - sigma));
      }
    }
  }
  return c;
}

long double coefficient_bound(std::uint32_t p, int horizon, int dim_w) {
  const GapSequences g = gap_sequences(p, horizon);
  return std::pow(static_cast<long double>(horizon), horizon - 1) *
         std::pow(3.0L * dim_w, static_cast<long double>(g.t.back()));
}

GammaVector solve_gamma_zp(const IntMatrix& c, const Deltas& d) {
  const int hz = d.horizon();
  if (hz < 1 || static_cast<int>(c.size()) != hz) throw DomainError("solve_gamma_zp: shape mismatch");
  for (int i = 0; i < hz; ++i) {
    if (static_cast<int>(c[i].size()) != hz) throw DomainError("solve_gamma_zp: shape mismatch");
    if (c[i][i] != 1) throw DomainError("solve_gamma_zp: diagonal must be all ones");
    for (int j = 0; j < i; ++j)
      if (c[i][j] != 0) throw DomainError("solve_gamma_zp: matrix must be upper-triangular");
  }
  GammaVector g{std::vector<std::int64_t>(hz, 0)};
  for (int h = hz - 1; h >= 0; --h) {
    std::int64_t v = d.m[h];
    for (int r = h + 1; r < hz; ++r) v = checked::sub(v, checked::mul(c[h][r], g.gamma[r]));
    g.gamma[h] = v;
  }
  return g;
}

std::int64_t ZpPlan::uniform_separation() const {
  return std::max<std::int64_t>(3 * gaps.t.back(), 1);
}

ZpPlan plan_zp(std::uint32_t p, const Deltas& d, SeparationRule rule, MatrixSource source) {
  require_prime(p);
  const int hz = d.horizon();
  if (hz < 1) throw DomainError("construct zpn: H must be >= 1");
  const GapSequences gaps = gap_sequences(p, hz);
  const bool trivial = std::all_of(d.m.begin(), d.m.end(), [](std::int64_t x) { return x == 0; });

  std::string failure = "p^(H+1) exceeds the dense capacity";
  for (int dim_w = 1;; ++dim_w) {
    if (pow_or_max(p, hz + dim_w) >= kZpDenseCapacity) break;
    const std::int64_t cells_w = checked::pow(p, dim_w);
    const std::string at = "at M=" + std::to_string(dim_w) + ": ";

    ZpPlan plan;
    plan.p = p;
    plan.horizon = hz;
    plan.dim_w = dim_w;
    plan.gaps = gaps;
    plan.source = source;
    plan.rule = rule;
    plan.coeff_bound = coefficient_bound(p, hz, dim_w);
    try {
      plan.matrix = source == MatrixSource::Enumerated ? coefficient_matrix(p, hz, dim_w)
                                                       : probed_matrix(p, hz, dim_w);
      plan.gamma = solve_gamma_zp(plan.matrix, d);
    } catch (const std::overflow_error&) {
      failure = at + "coefficients overflow 64-bit arithmetic";
      continue;
    } catch (const CapacityError&) {
      failure = at + "coefficient probe exceeds the dense capacity";
      continue;
    }
    if (trivial) return plan;

    std::int64_t r_max = 0, removed_a = 0, removed_b = 0, count = 0;
    bool overflow = false;
    try {
      for (int r = 1; r <= hz; ++r) {
        const std::int64_t n = checked::abs(plan.gamma.gamma[r - 1]);
        if (n == 0) continue;
        r_max = std::max(r_max, gaps.t[r - 1]);
        count = checked::add(count, n);
        std::int64_t& acc = plan.gamma.gamma[r - 1] < 0 ? removed_a : removed_b;
        acc = checked::add(acc, checked::mul(n, ball_size(p, dim_w, gaps.t[r - 1])));
      }
    } catch (const std::overflow_error&) {
      overflow = true;
    }
    if (!overflow && dim_w < r_max + 1) {
      failure = at + "ball radius " + std::to_string(r_max) + " needs M >= " + std::to_string(r_max + 1);
      continue;
    }
    if (overflow || removed_a >= cells_w - removed_a || removed_b >= cells_w - removed_b) {
      failure = at + "pigeonhole |A'|, |B'| < p^M/2 fails";
      continue;
    }
    if (rule == SeparationRule::Uniform) {
      const std::int64_t packing_radius = (plan.uniform_separation() - 1) / 2;
      const std::int64_t vol = ball_size(p, dim_w, packing_radius);
      if (count > cells_w / vol) {
        failure = at + "separation: " + std::to_string(count) + " centers at distance " +
                  std::to_string(plan.uniform_separation()) + " exceed the packing bound";
        continue;
      }
    }
    const std::vector<Slot> slots = slots_for(plan.gamma, gaps);
    std::vector<std::int64_t> radii;
    for (const Slot& s : slots) radii.push_back(s.radius);
    const std::vector<ZpVec> centers =
        place_centers(p, dim_w, radii, rule, plan.uniform_separation());
    if (static_cast<std::int64_t>(centers.size()) < count) {
      failure = at + "separation: placed " + std::to_string(centers.size()) + " of " +
                std::to_string(count) + " ball centers";
      continue;
    }
    for (std::size_t i = 0; i < slots.size(); ++i)
      (slots[i].side == Side::A ? plan.balls_a : plan.balls_b).push_back({centers[i], slots[i].radius});
    return plan;
  }
  throw CapacityError("construct zpn: no M with p^(H+M) < 2^26 under " + to_string(rule) +
                      " separation; last failing constraint " + failure);
}

int choose_M(std::uint32_t p, int horizon, const Deltas& d) {
  if (d.horizon() != horizon) throw DomainError("choose_M: H does not match the deltas");
  try {
    return plan_zp(p, d, SeparationRule::Uniform).dim_w;
  } catch (const CapacityError&) {
    return plan_zp(p, d, SeparationRule::RadiusAware).dim_w;
  }
}

ZpPair assemble_zp(std::uint32_t p, int horizon, const ZpSet& a_removed, const ZpSet& b_removed) {
  require_prime(p);
  const int dim_w = a_removed.dim();
  if (b_removed.dim() != dim_w || a_removed.p() != p || b_removed.p() != p)
    throw DomainError("assemble_zp: removal sets must share the space W");
  const std::int64_t cells_w = a_removed.cells();
  ZpSet common(p, horizon + dim_w);
  const ZpVec origin = ZpVec::zero(p, dim_w);
  for (int i = 1; i < horizon; ++i) {
    const std::int64_t base = checked::mul(v_index(p, horizon, i), cells_w);
    for (std::int64_t w : ball(origin, i).member_indices()) common.insert_index(base + w);
  }
  auto slab = [&](const ZpSet& removed) {
    ZpSet out = common;
    const std::int64_t base = checked::mul(v_index(p, horizon, horizon), cells_w);
    for (std::int64_t w : removed.complement().member_indices()) out.insert_index(base + w);
    return out;
  };
  return {slab(a_removed), slab(b_removed), a_removed, b_removed};
}

ZpPair realize_zp(const ZpPlan& plan) {
  ZpSet a_removed(plan.p, plan.dim_w), b_removed(plan.p, plan.dim_w);
  for (const auto& b : plan.balls_a) a_removed = a_removed.unite(ball(b.center, b.radius));
  for (const auto& b : plan.balls_b) b_removed = b_removed.unite(ball(b.center, b.radius));
  return assemble_zp(plan.p, plan.horizon, a_removed, b_removed);
}

std::vector<std::int64_t> growth_sequence_zp(const ZpSet& s, int horizon) {
  if (horizon < 1) throw DomainError("growth_sequence_zp: H must be >= 1");
  std::vector<std::int64_t> out{s.size()};
  ZpSet cur = s;
  for (int h = 2; h <= horizon; ++h) {
    cur = sumset_zp(cur, s);
    out.push_back(cur.size());
  }
  return out;
}

namespace {

std::vector<std::int64_t> measure(const ZpPair& pair, int horizon) {
  const auto ga = growth_sequence_zp(pair.a, horizon);
  const auto gb = growth_sequence_zp(pair.b, horizon);
  std::vector<std::int64_t> out(horizon);
  for (int h = 0; h < horizon; ++h) out[h] = ga[h] - gb[h];
  return out;
}

}  // namespace

std::vector<std::int64_t> empirical_coefficient_probe(std::uint32_t p, int horizon, int dim_w, int r) {
  const GapSequences g = gap_sequences(p, horizon);
  if (r < 1 || r > horizon) throw DomainError("empirical_coefficient_probe: need 1 <= r <= H");
  if (pow_or_max(p, horizon + dim_w) > kZpDenseCapacity)
    throw CapacityError("empirical_coefficient_probe: p^(H+M) exceeds the dense capacity");
  const std::int64_t radius = g.t[r - 1];
  if (dim_w < radius + 1 || 2 * ball_size(p, dim_w, radius) >= checked::pow(p, dim_w))
    throw DomainError("empirical_coefficient_probe: ball of radius " + std::to_string(radius) +
                      " is outside the pigeonhole range for M = " + std::to_string(dim_w));
  ZpSet b_removed = ball(ZpVec::zero(p, dim_w), radius);
  return measure(assemble_zp(p, horizon, ZpSet(p, dim_w), b_removed), horizon);
}

IntMatrix probed_matrix(std::uint32_t p, int horizon, int dim_w) {
  IntMatrix c(horizon, std::vector<std::int64_t>(horizon, 0));
  for (int r = 1; r <= horizon; ++r) {
    const auto col = empirical_coefficient_probe(p, horizon, dim_w, r);
    for (int h = 0; h < horizon; ++h) c[h][r - 1] = col[h];
  }
  return c;
}

std::int64_t predicted_size_decomposition(const ZpPlan& plan, int h, Side side) {
  const int hz = plan.horizon;
  if (h < 1 || h > hz) throw DomainError("predicted_size_decomposition: need 1 <= h <= H");
  const std::uint32_t p = plan.p;
  const int m = plan.dim_w;
  const std::int64_t cells_w = checked::pow(p, m);
  const auto& balls = side == Side::A ? plan.balls_a : plan.balls_b;

  // no index equal to H: disjoint balls of radius sigma
  std::int64_t total = 0;
  {
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    multisets(h, 1, hz - 1, p, cur, tuples);
    for (const auto& t : tuples) total += ball_size(p, m, weight(t));
  }
  // one index equal to H: W minus the shrunken removed balls
  for (const auto& t : star_tuples(p, hz, h)) {
    const std::int64_t sigma = weight(t);
    std::int64_t missing = 0;
    for (const auto& b : balls)
      if (b.radius >= sigma) missing += ball_size(p, m, b.radius - sigma);
    total += cells_w - missing;
  }
  // two or more indices equal to H: full copies of W, one per V-coordinate
  if (h >= 2) {
    std::vector<std::vector<int>> rest;
    std::vector<int> cur;
    multisets(h - 2, 1, hz, std::numeric_limits<std::uint32_t>::max(), cur, rest);
    std::vector<std::vector<std::uint32_t>> coords;
    for (const auto& t : rest) {
      std::vector<std::uint32_t> v(hz, 0);
      v[hz - 1] = 2 % p;
      for (int i : t) v[i - 1] = (v[i - 1] + 1) % p;
      coords.push_back(std::move(v));
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    total += static_cast<std::int64_t>(coords.size()) * cells_w;
  }
  return total;
}

long double closed_form_dimension(std::uint32_t p, int horizon, std::int64_t abs_sum) {
  require_prime(p);
  if (abs_sum == 0) return horizon;
  const long double h = horizon;
  const long double log_x = h * h * h * std::log(h) + std::log(static_cast<long double>(abs_sum));
  const long double log_1px = log_x < 40 ? std::log1p(std::exp(log_x)) : log_x;
  return h + std::ceil(10 * log_1px / std::log(static_cast<long double>(p)));
}

ZpCertificate build_and_verify_zp(std::uint32_t p, const Deltas& d) {
  require_prime(p);
  if (d.horizon() < 1) throw DomainError("construct zpn: H must be >= 1");
  const int hz = d.horizon();
  std::string failures;
  bool built_any = false;
  std::string capacity_msg;

  for (SeparationRule rule : {SeparationRule::Uniform, SeparationRule::RadiusAware}) {
    for (MatrixSource source : {MatrixSource::Enumerated, MatrixSource::Probed}) {
      ZpPlan plan;
      try {
        plan = plan_zp(p, d, rule, source);
      } catch (const CapacityError& e) {
        capacity_msg = e.what();
        break;  // the probed matrix would not change feasibility
      }
      built_any = true;
      ZpPair pair = realize_zp(plan);
      ZpCertificate cert;
      cert.p = p;
      cert.measured = measure(pair, hz);
      cert.target = d;
      cert.verified = cert.measured == d.m;
      cert.m_used = plan.dim_w;
      if (!cert.verified) {
        failures += " [" + to_string(rule) + "/" + to_string(source) + ": measured " +
                    seq_string(cert.measured) + "]";
        continue;
      }
      cert.a = std::move(pair.a);
      cert.b = std::move(pair.b);
      cert.meta["M"] = plan.dim_w;
      cert.meta["gamma"] = plan.gamma.gamma;
      cert.meta["matrix"] = to_string(source);
      cert.meta["coefficients"] = plan.matrix;
      cert.meta["separation"] = to_string(rule);
      cert.meta["closedFormN"] = static_cast<double>(closed_form_dimension(p, hz, d.abs_sum()));
      cert.meta["note"] = "N is the smallest feasible H+M found by search, not the closed form";
      return cert;
    }
  }
  if (!built_any) throw CapacityError(capacity_msg);
  throw VerificationError("construct zpn: target " + seq_string(d.m) + " but" + failures);
}

nlohmann::ordered_json to_json(const ZpCertificate& c) {
  nlohmann::ordered_json j;
  j["p"] = c.p;
  j["N"] = c.a.dim();
  j["A"] = to_json(c.a);
  j["B"] = to_json(c.b);
  j["H"] = c.target.horizon();
  j["target"] = c.target.m;
  j["measured"] = c.measured;
  j["verified"] = c.verified;
  j["Mused"] = c.m_used;
  j["meta"] = c.meta;
  return j;
}

std::string to_string(SeparationRule rule) {
  return rule == SeparationRule::Uniform ? "uniform" : "radius-aware";
}

std::string to_string(MatrixSource source) {
  return source == MatrixSource::Enumerated ? "enumerated" : "probed";
}

}  // namespace sumset
