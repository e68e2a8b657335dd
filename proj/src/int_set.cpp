#include "sumset/int_set.hpp"

#include <algorithm>
#include <sstream>

#include "sumset/checked.hpp"
#include "sumset/errors.hpp"

namespace sumset {

namespace {

// Largest occupancy array hfold will allocate (bits).
constexpr std::int64_t kMaxDenseBits = std::int64_t{1} << 31;

class Bits {
 public:
  explicit Bits(std::int64_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::int64_t nbits() const { return nbits_; }
  void set(std::int64_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  // this |= src << shift, truncated to this->nbits().
  void or_shifted(const Bits& src, std::int64_t shift) {
    const std::int64_t ws = shift >> 6;
    const int bs = static_cast<int>(shift & 63);
    const auto n = static_cast<std::int64_t>(words_.size());
    const auto m = static_cast<std::int64_t>(src.words_.size());
    for (std::int64_t i = 0; i < m && i + ws < n; ++i) {
      const std::uint64_t w = src.words_[i];
      if (!w) continue;
      words_[i + ws] |= w << bs;
      if (bs && i + ws + 1 < n) words_[i + ws + 1] |= w >> (64 - bs);
    }
    trim();
  }

  // this = this + [0, len], via doubling.
  void dilate(std::int64_t len) {
    std::int64_t covered = 1;  // current set is this + [0, covered-1]
    while (covered <= len) {
      const std::int64_t step = std::min(covered, len + 1 - covered);
      Bits copy = *this;
      or_shifted(copy, step);
      covered += step;
    }
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::int64_t count() const {
    std::int64_t c = 0;
    for (std::uint64_t w : words_) c += __builtin_popcountll(w);
    return c;
  }

  std::vector<std::int64_t> members(std::int64_t offset) const {
    std::vector<std::int64_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x) {
        const int b = __builtin_ctzll(x);
        out.push_back(offset + static_cast<std::int64_t>(w) * 64 + b);
        x &= x - 1;
      }
    }
    return out;
  }

 private:
  void trim() {
    const int tail = static_cast<int>(nbits_ & 63);
    if (tail && !words_.empty()) words_.back() &= (std::uint64_t{1} << tail) - 1;
  }

  std::int64_t nbits_;
  std::vector<std::uint64_t> words_;
};

struct Run {
  std::int64_t start;  // relative to min
  std::int64_t len;    // run covers [start, start + len]
};

std::vector<Run> runs_of(const IntSet& a) {
  std::vector<Run> runs;
  const auto xs = a.elements();
  const std::int64_t lo = xs.front();
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j + 1 < xs.size() && xs[j + 1] == xs[j] + 1) ++j;
    runs.push_back({xs[i] - lo, xs[j] - xs[i]});
    i = j + 1;
  }
  return runs;
}

Bits bits_of(const IntSet& a, std::int64_t nbits) {
  Bits b(nbits);
  const std::int64_t lo = a.min();
  for (std::int64_t x : a.elements()) b.set(x - lo);
  return b;
}

// acc (spanning [0, accDiam]) + B  ->  bits spanning [0, accDiam + diam(B)]
Bits add_runs(const Bits& acc, const std::vector<Run>& runs, std::int64_t nbits) {
  Bits next(nbits);
  Bits tmp(nbits);
  for (const Run& r : runs) {
    tmp.clear();
    tmp.or_shifted(acc, r.start);
    if (r.len > 0) tmp.dilate(r.len);
    next.or_shifted(tmp, 0);
  }
  return next;
}

std::int64_t checked_span(std::int64_t diam, std::int64_t h) {
  std::int64_t span;
  try {
    span = checked::add(checked::mul(diam, h), 1);
  } catch (const std::overflow_error&) {
    throw CapacityError("sumset range overflows 64-bit arithmetic");
  }
  if (span > kMaxDenseBits) throw CapacityError("sumset range exceeds dense occupancy limit");
  return span;
}

void require_nonempty(const IntSet& a, const char* what) {
  if (a.empty()) throw DomainError(std::string(what) + ": set must be nonempty");
}

}  // namespace

IntSet::IntSet(std::initializer_list<std::int64_t> xs) : IntSet(std::vector<std::int64_t>(xs)) {}

IntSet::IntSet(std::vector<std::int64_t> xs) : elems_(std::move(xs)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

IntSet IntSet::from_sorted(std::vector<std::int64_t> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] <= xs[i - 1]) throw DomainError("IntSet elements must be strictly increasing");
  IntSet s;
  s.elems_ = std::move(xs);
  return s;
}

IntSet IntSet::interval(std::int64_t lo, std::int64_t hi) {
  IntSet s;
  for (std::int64_t x = lo; x <= hi; ++x) s.elems_.push_back(x);
  return s;
}

std::int64_t IntSet::min() const {
  require_nonempty(*this, "min");
  return elems_.front();
}

std::int64_t IntSet::max() const {
  require_nonempty(*this, "max");
  return elems_.back();
}

bool IntSet::contains(std::int64_t x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

IntSet IntSet::translate(std::int64_t c) const {
  IntSet s;
  s.elems_.reserve(elems_.size());
  for (std::int64_t x : elems_) s.elems_.push_back(checked::add(x, c));
  return s;
}

IntSet IntSet::dilate(std::int64_t lambda) const {
  std::vector<std::int64_t> out;
  out.reserve(elems_.size());
  for (std::int64_t x : elems_) out.push_back(checked::mul(x, lambda));
  return IntSet(std::move(out));
}

IntSet IntSet::unite(const IntSet& other) const {
  IntSet s;
  std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                 std::back_inserter(s.elems_));
  return s;
}

std::string IntSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < elems_.size(); ++i) os << (i ? "," : "") << elems_[i];
  os << '}';
  return os.str();
}

IntSet hfold(const IntSet& a, int h) {
  require_nonempty(a, "hfold");
  if (h < 1) throw DomainError("hfold: h must be >= 1");
  const std::int64_t diam = a.max() - a.min();
  checked_span(diam, h);
  const std::int64_t base = checked::mul(a.min(), h);
  checked::mul(a.max(), h);

  const auto runs = runs_of(a);
  Bits acc = bits_of(a, diam + 1);
  for (int k = 2; k <= h; ++k) acc = add_runs(acc, runs, diam * k + 1);
  return IntSet::from_sorted(acc.members(base));
}

IntSet sumset(const IntSet& a, const IntSet& b) {
  require_nonempty(a, "sumset");
  require_nonempty(b, "sumset");
  const std::int64_t da = a.max() - a.min();
  const std::int64_t db = b.max() - b.min();
  checked_span(checked::add(da, db), 1);
  const std::int64_t base = checked::add(a.min(), b.min());
  checked::add(a.max(), b.max());
  Bits acc = bits_of(a, da + 1);
  return IntSet::from_sorted(add_runs(acc, runs_of(b), da + db + 1).members(base));
}

GrowthSequence growth_sequence(const IntSet& a, int horizon) {
  require_nonempty(a, "growth_sequence");
  if (horizon < 1) throw DomainError("growth_sequence: horizon must be >= 1");
  const std::int64_t diam = a.max() - a.min();
  checked_span(diam, horizon);
  checked::mul(a.min(), horizon);
  checked::mul(a.max(), horizon);

  GrowthSequence g{horizon, {}};
  g.sizes.reserve(horizon);
  const auto runs = runs_of(a);
  Bits acc = bits_of(a, diam + 1);
  g.sizes.push_back(static_cast<std::int64_t>(a.size()));
  for (int k = 2; k <= horizon; ++k) {
    acc = add_runs(acc, runs, diam * k + 1);
    g.sizes.push_back(acc.count());
  }
  return g;
}

std::vector<std::int64_t> delta_sequence(const IntSet& a, const IntSet& b, int horizon) {
  const auto ga = growth_sequence(a, horizon);
  const auto gb = growth_sequence(b, horizon);
  std::vector<std::int64_t> d(horizon);
  for (int h = 0; h < horizon; ++h) d[h] = ga.sizes[h] - gb.sizes[h];
  return d;
}

IntSet normalize(const IntSet& a) {
  require_nonempty(a, "normalize");
  const std::int64_t lo = a.min();
  const std::int64_t hi = a.max();
  std::vector<std::int64_t> fwd, rev;
  fwd.reserve(a.size());
  rev.reserve(a.size());
  for (std::int64_t x : a.elements()) fwd.push_back(x - lo);
  for (auto it = a.elements().rbegin(); it != a.elements().rend(); ++it) rev.push_back(hi - *it);
  return IntSet::from_sorted(std::min(fwd, rev));
}

std::int64_t diameter(const IntSet& a) {
  require_nonempty(a, "diameter");
  return a.max() - a.min();
}

nlohmann::ordered_json to_json(const IntSet& a) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (std::int64_t x : a.elements()) j.push_back(x);
  return j;
}

IntSet int_set_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_array()) throw DomainError("IntSet JSON must be an array of integers");
  std::vector<std::int64_t> xs;
  xs.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DomainError("IntSet JSON must be an array of integers");
    xs.push_back(v.get<std::int64_t>());
  }
  return IntSet::from_sorted(std::move(xs));
}

}  // namespace sumset
