#include "sumset/relation_lattice.hpp"

#include <algorithm>
#include <numeric>

#include "sumset/checked.hpp"
#include "sumset/errors.hpp"

namespace sumset {

namespace {

struct ExtGcd {
  std::int64_t g, u, v;  // u a + v b = g >= 0
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    r0 = checked::sub(r0, checked::mul(q, r1));
    std::swap(r0, r1);
    s0 = checked::sub(s0, checked::mul(q, s1));
    std::swap(s0, s1);
    t0 = checked::sub(t0, checked::mul(q, t1));
    std::swap(t0, t1);
  }
  if (r0 < 0) return {-r0, -s0, -t0};
  return {r0, s0, t0};
}

// out = x * a + y * b
std::vector<std::int64_t> combine(std::int64_t x, const std::vector<std::int64_t>& a, std::int64_t y,
                                  const std::vector<std::int64_t>& b) {
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = checked::add(checked::mul(x, a[i]), checked::mul(y, b[i]));
  return out;
}

int pivot_of(const std::vector<std::int64_t>& row) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) return static_cast<int>(i);
  return -1;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Reduce entries above each pivot into [0, pivot).
void reduce_above(IntRows& basis) {
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const int c = pivot_of(basis[j]);
    for (std::size_t i = 0; i < j; ++i) {
      const std::int64_t q = floor_div(basis[i][c], basis[j][c]);
      if (q != 0) basis[i] = combine(1, basis[i], -q, basis[j]);
    }
  }
}

void insert_row(IntRows& basis, std::vector<std::int64_t> v) {
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const int pv = pivot_of(v);
    if (pv < 0) return;
    const int c = pivot_of(basis[j]);
    if (pv < c) {
      if (v[pv] < 0)
        for (auto& x : v) x = -x;
      basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(j), std::move(v));
      return;
    }
    if (pv > c) continue;
    const std::int64_t a = basis[j][c], b = v[c];
    const ExtGcd e = ext_gcd(a, b);
    auto row = combine(e.u, basis[j], e.v, v);
    v = combine(a / e.g, v, -(b / e.g), basis[j]);
    basis[j] = std::move(row);
  }
  const int pv = pivot_of(v);
  if (pv < 0) return;
  if (v[pv] < 0)
    for (auto& x : v) x = -x;
  basis.push_back(std::move(v));
}

}  // namespace

IntRows hermite_normal_form(const IntRows& rows) {
  IntRows basis;
  std::size_t width = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw DomainError("hermite_normal_form: ragged rows");
    insert_row(basis, r);
    reduce_above(basis);
  }
  return basis;
}

bool lattice_contains(const IntRows& hnf, std::span<const std::int64_t> v) {
  std::vector<std::int64_t> rest(v.begin(), v.end());
  for (const auto& row : hnf) {
    if (row.size() != rest.size()) throw DomainError("lattice_contains: dimension mismatch");
    const int c = pivot_of(row);
    for (int i = 0; i < c; ++i)
      if (rest[i] != 0) return false;
    if (rest[c] % row[c] != 0) return false;
    rest = combine(1, rest, -(rest[c] / row[c]), row);
  }
  return std::all_of(rest.begin(), rest.end(), [](std::int64_t x) { return x == 0; });
}

RelationLattice relation_set(std::span<const std::int64_t> elements, int box, std::int64_t budget) {
  const int k = static_cast<int>(elements.size());
  if (k < 1) throw DomainError("relation_set: the set must be nonempty");
  if (box < 0) throw DomainError("relation_set: H must be >= 0");
  const std::int64_t side = 2 * std::int64_t{box} + 1;
  std::int64_t total = 1;
  for (int i = 0; i < k; ++i) {
    if (total > budget / side) throw CapacityError("relation_set: (2H+1)^k exceeds the enumeration budget");
    total *= side;
  }

  RelationLattice out;
  out.k = k;
  out.box = box;
  // odometer over [-H, H]^k, last coordinate fastest: lexicographic order
  std::vector<std::int64_t> x(k, -box);
  std::int64_t dot = 0;
  for (int i = 0; i < k; ++i) dot = checked::add(dot, checked::mul(x[i], elements[i]));
  for (;;) {
    if (dot == 0) out.relations.push_back(x);
    int i = k - 1;
    while (i >= 0 && x[i] == box) {
      dot = checked::sub(dot, checked::mul(2 * std::int64_t{box}, elements[i]));
      x[i] = -box;
      --i;
    }
    if (i < 0) break;
    ++x[i];
    dot = checked::add(dot, elements[i]);
  }
  out.basis = hermite_normal_form(out.relations);
  return out;
}

RelationLattice relation_set(const IntSet& a, int box, std::int64_t budget) {
  return relation_set(a.elements(), box, budget);
}

bool lattice_determines_sequence_check(const IntSet& a, const IntSet& b, int box) {
  if (a.size() != b.size()) throw DomainError("lattice_determines_sequence_check: need |A| = |B|");
  if (box < 1) throw DomainError("lattice_determines_sequence_check: H must be >= 1");
  if (relation_set(a, box) != relation_set(b, box)) return true;
  return growth_sequence(a, box) == growth_sequence(b, box);
}

}  // namespace sumset
