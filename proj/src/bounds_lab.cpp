#include "sumset/bounds_lab.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "sumset/errors.hpp"

namespace sumset {

namespace {

using Seq = std::vector<std::int64_t>;

// Runs fn(begin, end, worker) over contiguous chunks of [0, n).
template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    fn(std::size_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t step = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers && w * step < n; ++w)
    pool.emplace_back(fn, w * step, std::min(n, (w + 1) * step), static_cast<int>(w));
  for (auto& t : pool) t.join();
}

// Growth sequences of every candidate, deduplicated; each sequence keeps its
// lexicographically smallest set.
struct Family {
  std::vector<IntSet> reps;
  std::vector<Seq> seqs;
};

std::vector<Seq> growth_all(const std::vector<IntSet>& sets, int horizon, int threads) {
  std::vector<Seq> out(sets.size());
  parallel_chunks(sets.size(), threads, [&](std::size_t lo, std::size_t hi, int) {
    for (std::size_t i = lo; i < hi; ++i) out[i] = growth_sequence(sets[i], horizon).sizes;
  });
  return out;
}

template <class Keep>
Family dedupe(const std::vector<IntSet>& sets, const std::vector<Seq>& seqs, Keep keep) {
  std::map<Seq, std::size_t> best;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!keep(sets[i])) continue;
    auto [it, fresh] = best.emplace(seqs[i], i);
    if (!fresh && sets[i] < sets[it->second]) it->second = i;
  }
  Family f;
  for (const auto& [seq, i] : best) {
    f.reps.push_back(sets[i]);
    f.seqs.push_back(seq);
  }
  return f;
}

// Pattern index with position 0 most significant and '-' as bit 1, so index
// order equals ASCII order of the pattern strings.
int pattern_index(const Seq& deltas) {
  int idx = 0;
  for (std::int64_t d : deltas) {
    if (d == 0) return -1;
    idx = 2 * idx + (d < 0 ? 1 : 0);
  }
  return idx;
}

bool pair_less(const Witness& x, const Witness& y) {
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

Seq diff(const Seq& x, const Seq& y) {
  Seq out(x.size());
  for (std::size_t h = 0; h < x.size(); ++h) out[h] = x[h] - y[h];
  return out;
}

// Lexicographically smallest witness per pattern over ordered pairs of the family.
std::vector<std::optional<Witness>> best_witnesses(const Family& f, int horizon, int threads) {
  const std::size_t np = std::size_t{1} << horizon;
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  std::vector<std::vector<std::optional<Witness>>> local(workers,
                                                         std::vector<std::optional<Witness>>(np));
  parallel_chunks(f.reps.size(), threads, [&](std::size_t lo, std::size_t hi, int w) {
    auto& mine = local[w];
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < f.reps.size(); ++j) {
        if (i == j) continue;
        Seq d = diff(f.seqs[i], f.seqs[j]);
        const int idx = pattern_index(d);
        if (idx < 0) continue;
        auto& slot = mine[idx];
        if (slot && (f.reps[i] > slot->a || (f.reps[i] == slot->a && f.reps[j] >= slot->b))) continue;
        slot = Witness{f.reps[i], f.reps[j], std::move(d)};
      }
  });
  std::vector<std::optional<Witness>> merged(np);
  for (const auto& mine : local)
    for (std::size_t k = 0; k < np; ++k)
      if (mine[k] && (!merged[k] || pair_less(*mine[k], *merged[k]))) merged[k] = mine[k];
  return merged;
}

std::string join(std::span<const std::int64_t> xs, char sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << sep;
    os << xs[i];
  }
  return os.str();
}

nlohmann::ordered_json witness_json(const Witness& w) {
  nlohmann::ordered_json j;
  j["A"] = to_json(w.a);
  j["B"] = to_json(w.b);
  j["deltas"] = w.deltas;
  return j;
}

void require_horizon(int horizon) {
  if (horizon < 1 || horizon > 20) throw DomainError("search: H must be in [1, 20]");
}

}  // namespace

std::int64_t default_budget() {
  const char* env = std::getenv("SUMSET_BUDGET");
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (*end != '\0' || v <= 0) throw DomainError("SUMSET_BUDGET must be a positive integer");
  return v;
}

LinearityCertificate khovanskii_fit(const IntSet& a, int window_end, std::optional<std::int64_t> ambient) {
  if (a.empty()) throw DomainError("khovanskii_fit: the set must be nonempty");
  const IntSet base = a.translate(-a.min());
  const std::int64_t diam = diameter(base);
  if (ambient && *ambient < diam) throw DomainError("khovanskii_fit: set does not fit in [0, N]");
  const std::int64_t n = std::max<std::int64_t>(ambient.value_or(diam), 3);
  if (window_end < n) throw DomainError("khovanskii_fit: window end must be >= N");
  LinearityCertificate c;
  c.h_start = static_cast<int>(n - 2);
  c.window_end = window_end;
  const Seq sizes = growth_sequence(base, window_end).sizes;
  auto at = [&](int h) { return sizes[h - 1]; };
  c.a = at(c.h_start + 1) - at(c.h_start);
  c.b = at(c.h_start) - c.a * c.h_start;
  c.fits = true;
  for (int h = c.h_start; h <= window_end; ++h)
    if (at(h) != c.a * h + c.b) c.fits = false;
  return c;
}

std::vector<IntSet> anchored_subsets(int n, int min_size, int max_size) {
  if (n < 0 || n > 30) throw DomainError("anchored_subsets: need 0 <= N <= 30");
  std::vector<IntSet> out;
  const std::uint64_t masks = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < masks; ++m) {
    const int size = 1 + std::popcount(m);
    if (size < min_size || size > max_size) continue;
    std::vector<std::int64_t> xs{0};
    for (int i = 0; i < n; ++i)
      if ((m >> i) & 1) xs.push_back(i + 1);
    out.push_back(IntSet::from_sorted(std::move(xs)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CensusReport census(int k, int horizon, int range, std::int64_t budget) {
  if (k < 1) throw DomainError("census: k must be >= 1");
  if (horizon < 1) throw DomainError("census: H must be >= 1");
  if (range < 0) throw DomainError("census: R must be >= 0");
  CensusReport r;
  r.k = k;
  r.horizon = horizon;
  r.range = range;
  r.bound = std::pow(static_cast<long double>(2 * horizon + 1), static_cast<long double>(k) * k);
  // C(R, k-1) anchored sets before reflection
  long double candidates = 1;
  for (int i = 0; i < k - 1; ++i) candidates = candidates * (range - i) / (i + 1);
  if (candidates > static_cast<long double>(budget))
    throw CapacityError("census: enumeration exceeds the budget");
  std::set<Seq> seen;
  for (const IntSet& s : anchored_subsets(range, k, k)) {
    if (normalize(s) != s) continue;
    ++r.sets;
    seen.insert(growth_sequence(s, horizon).sizes);
  }
  r.distinct = static_cast<std::int64_t>(seen.size());
  return r;
}

std::vector<SignPattern> all_patterns(int horizon) {
  std::vector<SignPattern> out;
  for (std::uint32_t idx = 0; idx < (1u << horizon); ++idx) {
    SignPattern p;
    for (int h = horizon - 1; h >= 0; --h) p.plus.push_back(((idx >> h) & 1) == 0);
    out.push_back(std::move(p));
  }
  return out;
}

std::optional<Witness> forbidden_tail_witness(int horizon, int n, const SearchOptions& opt) {
  if (horizon < 3) throw DomainError("forbidden tail needs H >= 3");
  const auto sets = anchored_subsets(n, 1, n + 1);
  if (static_cast<std::int64_t>(sets.size()) > opt.budget)
    throw CapacityError("forbidden tail check exceeds the budget");
  const auto seqs = growth_all(sets, horizon, opt.threads);
  const Family f = dedupe(sets, seqs, [](const IntSet&) { return true; });
  std::optional<Witness> best;
  for (std::size_t i = 0; i < f.reps.size(); ++i)
    for (std::size_t j = 0; j < f.reps.size(); ++j) {
      const Seq d = diff(f.seqs[i], f.seqs[j]);
      if (d[horizon - 3] < 0 && d[horizon - 2] > 0 && d[horizon - 1] > 0) {
        Witness w{f.reps[i], f.reps[j], d};
        if (!best || pair_less(w, *best)) best = std::move(w);
      }
    }
  return best;
}

SearchReport search_nu(int horizon, int n_max, const SearchOptions& opt) {
  require_horizon(horizon);
  if (n_max < 0 || n_max > 24) throw DomainError("search nu: Nmax must be in [0, 24]");
  SearchReport r;
  r.kind = "nu";
  r.horizon = horizon;
  r.param_lo = 0;
  r.requested_hi = n_max;
  r.param_hi = -1;
  r.note = "rows list, for each N, the lexicographically first pair A, B in [0, N] realizing each pattern";

  const std::size_t np = std::size_t{1} << horizon;
  std::vector<bool> done(np, false);
  for (int n = 0; n <= n_max; ++n) {
    const auto sets = anchored_subsets(n, 1, n + 1);
    if (r.evaluations + static_cast<std::int64_t>(sets.size()) > opt.budget) {
      r.exhaustive = false;
      r.note += "; budget exhausted before N = " + std::to_string(n);
      break;
    }
    r.evaluations += static_cast<std::int64_t>(sets.size());
    const auto seqs = growth_all(sets, horizon, opt.threads);
    const Family f = dedupe(sets, seqs, [](const IntSet&) { return true; });
    const auto best = best_witnesses(f, horizon, opt.threads);
    const auto patterns = all_patterns(horizon);
    bool all = true;
    for (std::size_t k = 0; k < np; ++k) {
      r.rows.push_back({n, patterns[k], best[k]});
      all = all && best[k].has_value();
    }
    r.param_hi = n;
    if (all && !r.minimal_value) r.minimal_value = n;
  }
  if (horizon >= 3 && n_max >= 0) {
    TailCheck t;
    t.max_n = std::min(horizon, n_max);
    t.counterexample = forbidden_tail_witness(horizon, t.max_n, opt);
    t.absent = !t.counterexample.has_value();
    r.tail = t;
  }
  return r;
}

SearchReport search_kappa(int horizon, int k_max, int n_max, const SearchOptions& opt) {
  require_horizon(horizon);
  if (k_max < 1) throw DomainError("search kappa: kmax must be >= 1");
  if (n_max < 0 || n_max > 24) throw DomainError("search kappa: Nmax must be in [0, 24]");
  SearchReport r;
  r.kind = "kappa";
  r.horizon = horizon;
  r.param_lo = 1;
  r.requested_hi = k_max;
  r.param_hi = 0;
  r.diameter_cap = n_max;
  r.note = "sets restricted to [0, " + std::to_string(n_max) +
           "]; an unknown pattern is inconclusive and gives no lower bound on kappa";

  const auto sets = anchored_subsets(n_max, 1, k_max);
  if (static_cast<std::int64_t>(sets.size()) > opt.budget) {
    r.exhaustive = false;
    r.note += "; budget exhausted before enumeration";
    return r;
  }
  r.evaluations = static_cast<std::int64_t>(sets.size());
  const auto seqs = growth_all(sets, horizon, opt.threads);
  const std::size_t np = std::size_t{1} << horizon;
  const auto patterns = all_patterns(horizon);
  for (int k = 1; k <= k_max; ++k) {
    const Family f = dedupe(sets, seqs, [k](const IntSet& s) { return static_cast<int>(s.size()) <= k; });
    const auto best = best_witnesses(f, horizon, opt.threads);
    bool all = true;
    for (std::size_t i = 0; i < np; ++i) {
      r.rows.push_back({k, patterns[i], best[i]});
      all = all && best[i].has_value();
    }
    r.param_hi = k;
    if (all && !r.minimal_value) r.minimal_value = k;
  }
  return r;
}

nlohmann::ordered_json to_json(const SearchReport& r) {
  const bool nu = r.kind == "nu";
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  j["H"] = r.horizon;
  nlohmann::ordered_json grid;
  grid["parameter"] = nu ? "N" : "k";
  grid["lo"] = r.param_lo;
  grid["hi"] = r.param_hi;
  grid["requestedHi"] = r.requested_hi;
  if (!nu) grid["diameterCap"] = r.diameter_cap;
  j["grid"] = grid;
  j["exhaustive"] = r.exhaustive;
  j["evaluations"] = r.evaluations;
  if (r.minimal_value)
    j["minimalValue"] = *r.minimal_value;
  else
    j["minimalValue"] = "not found";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["parameter"] = row.parameter;
    e["pattern"] = row.pattern.to_string();
    if (row.witness)
      e["witness"] = witness_json(*row.witness);
    else
      e["witness"] = nu ? "none" : "unknown";
    rows.push_back(std::move(e));
  }
  j["results"] = std::move(rows);
  if (r.tail) {
    nlohmann::ordered_json t;
    t["tail"] = "-++";
    t["maxN"] = r.tail->max_n;
    t["absent"] = r.tail->absent;
    if (r.tail->counterexample) t["counterexample"] = witness_json(*r.tail->counterexample);
    j["forbiddenTail"] = std::move(t);
  }
  j["note"] = r.note;
  return j;
}

std::string to_csv(const SearchReport& r) {
  const bool nu = r.kind == "nu";
  std::ostringstream os;
  os << "kind,H,parameter,pattern,status,A,B,deltas\n";
  for (const auto& row : r.rows) {
    os << r.kind << ',' << r.horizon << ',' << row.parameter << ',' << row.pattern.to_string() << ',';
    if (row.witness)
      os << "achieved," << join(row.witness->a.elements(), ' ') << ',' << join(row.witness->b.elements(), ' ')
         << ',' << join(row.witness->deltas, ' ');
    else
      os << (nu ? "none" : "unknown") << ",,,";
    os << '\n';
  }
  return os.str();
}

nlohmann::ordered_json to_json(const CensusReport& r) {
  nlohmann::ordered_json j;
  j["k"] = r.k;
  j["H"] = r.horizon;
  j["R"] = r.range;
  j["sets"] = r.sets;
  j["distinct"] = r.distinct;
  j["bound"] = static_cast<double>(r.bound);
  j["exhaustive"] = r.exhaustive;
  return j;
}

std::string to_csv(const CensusReport& r) {
  std::ostringstream os;
  os << "k,H,R,sets,distinct,bound,exhaustive\n";
  os << r.k << ',' << r.horizon << ',' << r.range << ',' << r.sets << ',' << r.distinct << ','
     << static_cast<double>(r.bound) << ',' << (r.exhaustive ? "true" : "false") << '\n';
  return os.str();
}

nlohmann::ordered_json to_json(const LinearityCertificate& c) {
  nlohmann::ordered_json j;
  j["a"] = c.a;
  j["b"] = c.b;
  j["hStart"] = c.h_start;
  j["windowEnd"] = c.window_end;
  j["fits"] = c.fits;
  return j;
}

}  // namespace sumset
