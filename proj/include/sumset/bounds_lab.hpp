#pragma once

// Desk-scale exploration of sign patterns of |hA| - |hB|, the eventual
// linearity of |hA|, and how many growth sequences small sets produce.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumset/construct_int.hpp"
#include "sumset/int_set.hpp"

namespace sumset {

inline constexpr std::int64_t kDefaultBudget = 10'000'000;

/// SUMSET_BUDGET if set (must be a positive integer), otherwise 10^7.
std::int64_t default_budget();

struct LinearityCertificate {
  std::int64_t a = 0;
  std::int64_t b = 0;
  int h_start = 0;
  int window_end = 0;
  bool fits = false;
};

/// Fits |hA| = a h + b from h = N-2 and N-1, then checks every h up to
/// window_end. N is the ambient bound when given, else the diameter, and is
/// raised to 3 when smaller.
LinearityCertificate khovanskii_fit(const IntSet& a, int window_end,
                                    std::optional<std::int64_t> ambient = std::nullopt);

/// All subsets of [0, n] that contain 0, with size in [min_size, max_size].
std::vector<IntSet> anchored_subsets(int n, int min_size, int max_size);

struct CensusReport {
  int k = 0;
  int horizon = 0;
  int range = 0;
  std::int64_t sets = 0;      // canonical k-subsets examined
  std::int64_t distinct = 0;  // distinct growth sequences
  long double bound = 0;      // (2H+1)^(k^2)
  bool exhaustive = true;
};

/// Distinct (|A|, ..., |HA|) over k-subsets of [0, R] containing 0, taken up
/// to reflection.
CensusReport census(int k, int horizon, int range, std::int64_t budget = kDefaultBudget);

/// All 2^H patterns in ASCII order ('+' before '-').
std::vector<SignPattern> all_patterns(int horizon);

struct Witness {
  IntSet a;
  IntSet b;
  std::vector<std::int64_t> deltas;
};

struct PatternRow {
  int parameter = 0;  // N for nu, k for kappa
  SignPattern pattern;
  std::optional<Witness> witness;
};

struct TailCheck {
  int max_n = 0;  // checked for every N <= max_n
  bool absent = true;
  std::optional<Witness> counterexample;
};

struct SearchReport {
  std::string kind;  // "nu" or "kappa"
  int horizon = 0;
  int param_lo = 0;
  int param_hi = 0;  // last parameter actually completed
  int requested_hi = 0;
  int diameter_cap = 0;  // kappa only
  std::vector<PatternRow> rows;
  std::optional<int> minimal_value;
  bool exhaustive = true;
  std::int64_t evaluations = 0;
  std::optional<TailCheck> tail;
  std::string note;
};

struct SearchOptions {
  int threads = 1;
  std::int64_t budget = kDefaultBudget;
};

/// Patterns realized by A, B in [0, N] for each N <= n_max. Also checks
/// that the tail (-, +, +) never occurs for N <= H when H >= 3.
SearchReport search_nu(int horizon, int n_max, const SearchOptions& opt = {});

/// Patterns realized by sets of size <= k inside [0, n_max].
SearchReport search_kappa(int horizon, int k_max, int n_max, const SearchOptions& opt = {});

/// First pair (lexicographic) of subsets of [0, n] whose deltas have signs
/// (-, +, +) at h = H-2, H-1, H.
std::optional<Witness> forbidden_tail_witness(int horizon, int n, const SearchOptions& opt = {});

nlohmann::ordered_json to_json(const SearchReport& r);
std::string to_csv(const SearchReport& r);
nlohmann::ordered_json to_json(const CensusReport& r);
std::string to_csv(const CensusReport& r);
nlohmann::ordered_json to_json(const LinearityCertificate& c);

}  // namespace sumset
