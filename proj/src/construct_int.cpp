#include "sumset/construct_int.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

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

std::int64_t isqrt(std::int64_t d) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(d)));
  while (r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  return r;
}

IntSet remove_intervals(const IntSet& base, const std::vector<Removal>& removals) {
  std::vector<std::int64_t> out;
  out.reserve(base.size());
  for (std::int64_t x : base.elements()) {
    const bool hit = std::any_of(removals.begin(), removals.end(), [x](const Removal& r) {
      return x >= r.left && x < r.left + r.length;
    });
    if (!hit) out.push_back(x);
  }
  return IntSet::from_sorted(std::move(out));
}

}  // namespace

std::int64_t Deltas::abs_sum() const {
  std::int64_t s = 0;
  for (std::int64_t x : m) s = checked::add(s, checked::abs(x));
  return s;
}

std::int64_t GammaVector::alpha(int r) const {
  const std::int64_t g = gamma.at(r - 1);
  return g < 0 ? -g : 0;
}

std::int64_t GammaVector::beta(int r) const {
  const std::int64_t g = gamma.at(r - 1);
  return g > 0 ? g : 0;
}

std::int64_t GammaVector::abs_sum() const {
  std::int64_t s = 0;
  for (std::int64_t x : gamma) s = checked::add(s, checked::abs(x));
  return s;
}

GammaVector solve_gamma(const Deltas& d) {
  const int hz = d.horizon();
  if (hz < 1) throw DomainError("solve_gamma: H must be >= 1");
  const auto& m = d.m;
  GammaVector g{std::vector<std::int64_t>(hz)};
  g.gamma[hz - 1] = m[hz - 1];
  if (hz >= 2) g.gamma[hz - 2] = checked::sub(m[hz - 2], checked::mul(2, m[hz - 1]));
  for (int r = 0; r + 2 < hz; ++r)
    g.gamma[r] = checked::add(checked::sub(m[r], checked::mul(2, m[r + 1])), m[r + 2]);
  return g;
}

std::vector<std::int64_t> linear_model(const GammaVector& g) {
  const int hz = static_cast<int>(g.gamma.size());
  std::vector<std::int64_t> out(hz, 0);
  for (int h = 1; h <= hz; ++h)
    for (int r = h; r <= hz; ++r)
      out[h - 1] = checked::add(out[h - 1], checked::mul(g.gamma[r - 1], r - h + 1));
  return out;
}

IntPlan build_plan(const Deltas& d, std::int64_t constant) {
  const int hz = d.horizon();
  if (hz < 1) throw DomainError("build_plan: H must be >= 1");
  if (constant < 1) throw DomainError("build_plan: constant must be positive");
  IntPlan plan;
  plan.horizon = hz;
  plan.constant = constant;
  plan.gamma = solve_gamma(d);
  const std::int64_t h = hz;
  const std::int64_t s = d.abs_sum();
  if (s == 0) {
    // nothing to prescribe: A = B = {0}, I empty
    plan.interval_lo = plan.middle_lo = 1;
    return plan;
  }
  plan.n = checked::mul(checked::mul(constant, h * h), s);
  const std::int64_t len = plan.n / (2 * h);  // |I|
  if (len < 1) throw DomainError("build_plan: constant too small, interval I is empty");
  plan.interval_lo = plan.n - len + 1;
  const std::int64_t third = len / 3;
  plan.middle_lo = plan.interval_lo + third;
  plan.middle_hi = plan.middle_lo + third - 1;

  // A' first then B', lengths descending, left endpoints at stride 2H.
  std::int64_t left = plan.middle_lo;
  auto place = [&](std::vector<Removal>& out, bool for_a) {
    for (int r = hz; r >= 1; --r) {
      const std::int64_t count = for_a ? plan.gamma.alpha(r) : plan.gamma.beta(r);
      for (std::int64_t i = 0; i < count; ++i) {
        out.push_back({left, r});
        left = checked::add(left, 2 * h);
      }
    }
  };
  place(plan.removals_a, true);
  place(plan.removals_b, false);

  for (const auto* list : {&plan.removals_a, &plan.removals_b})
    for (const Removal& r : *list)
      if (r.left < plan.middle_lo || r.left + r.length - 1 > plan.middle_hi)
        throw CapacityError("build_plan: removal intervals overflow the middle third of I");
  return plan;
}

IntPair realize(const IntPlan& plan) {
  if (plan.n == 0) return {IntSet{0}, IntSet{0}};
  const IntSet head{0, 1};
  const IntSet interval = IntSet::interval(plan.interval_lo, plan.n);
  return {head.unite(remove_intervals(interval, plan.removals_a)),
          head.unite(remove_intervals(interval, plan.removals_b))};
}

ConstructionCertificate construct_and_verify(const Deltas& d, std::int64_t constant) {
  const IntPlan plan = build_plan(d, constant);
  auto [a, b] = realize(plan);
  ConstructionCertificate cert;
  cert.measured = delta_sequence(a, b, d.horizon());
  cert.a = std::move(a);
  cert.b = std::move(b);
  cert.target = d;
  cert.verified = cert.measured == d.m;
  cert.meta["N"] = plan.n;
  cert.meta["constant"] = plan.constant;
  cert.meta["gamma"] = plan.gamma.gamma;
  if (!cert.verified)
    throw VerificationError("construct_and_verify: target " + seq_string(d.m) + " but measured " +
                            seq_string(cert.measured));
  return cert;
}

IntSet xd_gadget(std::int64_t d) {
  if (d < 1) throw DomainError("xd_gadget: D must be >= 1");
  const std::int64_t r = isqrt(d);
  std::vector<std::int64_t> xs;
  for (std::int64_t x = 0; x <= r; ++x) xs.push_back(x);
  for (std::int64_t i = 0; i <= d / r; ++i) xs.push_back(i * r);
  for (std::int64_t x = d - r; x <= d; ++x) xs.push_back(x);
  return IntSet(std::move(xs));
}

std::string SignPattern::to_string() const {
  std::string s;
  for (bool b : plus) s.push_back(b ? '+' : '-');
  return s;
}

SignPattern SignPattern::parse(const std::string& s) {
  if (s.empty()) throw DomainError("sign pattern must be nonempty");
  SignPattern p;
  for (char c : s) {
    if (c != '+' && c != '-') throw DomainError("sign pattern must use only '+' and '-'");
    p.plus.push_back(c == '+');
  }
  return p;
}

IntSet gap_segment(const std::vector<std::int64_t>& mult) {
  std::vector<std::int64_t> xs{0};
  for (std::size_t r = 1; r <= mult.size(); ++r)
    for (std::int64_t i = 0; i < mult[r - 1]; ++i)
      xs.push_back(xs.back() + static_cast<std::int64_t>(r) + 1);
  return IntSet::from_sorted(std::move(xs));
}

CompactPlan build_compact_plan(const SignPattern& pattern) {
  const int hz = pattern.horizon();
  if (hz < 1) throw DomainError("compact_sign_sets: H must be >= 1");
  CompactPlan plan;
  plan.pattern = pattern;
  Deltas d;
  for (bool b : pattern.plus) d.m.push_back(b ? 1 : -1);
  plan.gamma = solve_gamma(d);
  std::vector<std::int64_t> alphas(hz), betas(hz);
  for (int r = 1; r <= hz; ++r) {
    alphas[r - 1] = plan.gamma.alpha(r);
    betas[r - 1] = plan.gamma.beta(r);
  }
  plan.a_seg = gap_segment(alphas);
  plan.b_seg = gap_segment(betas);
  plan.d = std::max<std::int64_t>({plan.a_seg.max(), plan.b_seg.max(), 1});
  plan.d_root = isqrt(plan.d);
  plan.xd = xd_gadget(plan.d);
  plan.a_tilde = plan.a_seg.unite(IntSet::interval(plan.a_seg.max(), plan.d));
  plan.b_tilde = plan.b_seg.unite(IntSet::interval(plan.b_seg.max(), plan.d));
  return plan;
}

ConstructionCertificate compact_sign_sets(const SignPattern& pattern) {
  const CompactPlan plan = build_compact_plan(pattern);
  const std::int64_t hz = pattern.horizon();
  const std::int64_t d = plan.d;
  auto assemble = [&](const IntSet& core) {
    return IntSet{0, 1}
        .unite(plan.xd.translate(10 * hz * d))
        .unite(core.translate((10 * hz + 1) * d))
        .unite(plan.xd.translate((10 * hz + 2) * d));
  };
  ConstructionCertificate cert;
  cert.a = assemble(plan.a_tilde);
  cert.b = assemble(plan.b_tilde);
  for (bool b : pattern.plus) cert.target.m.push_back(b ? 1 : -1);
  cert.measured = delta_sequence(cert.a, cert.b, pattern.horizon());
  for (int h = 0; h < pattern.horizon(); ++h) {
    const std::int64_t v = cert.measured[h];
    if (v == 0 || (v > 0) != pattern.plus[h])
      throw VerificationError("compact_sign_sets: pattern " + pattern.to_string() +
                              " but measured " + seq_string(cert.measured));
  }
  // Signs are the hard contract; exact +-1 equality is reported through `verified`.
  cert.verified = cert.measured == cert.target.m;
  cert.meta["pattern"] = pattern.to_string();
  cert.meta["D"] = d;
  cert.meta["gamma"] = plan.gamma.gamma;
  cert.meta["signs_ok"] = true;
  return cert;
}

nlohmann::ordered_json to_json(const ConstructionCertificate& c) {
  nlohmann::ordered_json j;
  j["A"] = to_json(c.a);
  j["B"] = to_json(c.b);
  j["H"] = c.target.horizon();
  j["target"] = c.target.m;
  j["measured"] = c.measured;
  j["verified"] = c.verified;
  j["meta"] = c.meta;
  return j;
}

}  // namespace sumset
