#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sumset/errors.hpp"
#include "sumset/zp_lattice.hpp"

using namespace sumset;

TEST_CASE("primes and vectors") {
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK(is_prime(65521));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  CHECK_FALSE(is_prime(91));
  const ZpVec v(5, {-1, 7});
  CHECK(v.coords == std::vector<std::uint32_t>{4, 2});
  CHECK((v + ZpVec(5, {1, 3})).coords == std::vector<std::uint32_t>{0, 0});
  CHECK((ZpVec(5, {0, 0}) - ZpVec(5, {1, 2})).coords == std::vector<std::uint32_t>{4, 3});
}

TEST_CASE("fold norm and l1 distance") {
  CHECK(fold_norm(5, 3) == 2);
  CHECK(fold_norm(2, 1) == 1);
  CHECK(fold_norm(7, 0) == 0);
  CHECK(l1_dist(ZpVec(5, {0, 0}), ZpVec(5, {3, 1})) == 3);
  CHECK(l1_dist(ZpVec(2, {1, 1, 1}), ZpVec(2, {0, 0, 0})) == 3);
  const ZpVec x(7, {3, 5, 6});
  CHECK(l1_dist(x, x) == 0);
  CHECK_THROWS_AS(l1_dist(ZpVec(5, {0}), ZpVec(5, {0, 0})), DomainError);
  CHECK_THROWS_AS(l1_dist(ZpVec(5, {0}), ZpVec(3, {0})), DomainError);
}

TEST_CASE("ZpSet basics") {
  ZpSet s(3, 2);
  CHECK(s.cells() == 9);
  CHECK(s.empty());
  s.insert(ZpVec(3, {1, 2}));
  s.insert(ZpVec(3, {0, 1}));
  CHECK(s.size() == 2);
  CHECK(s.index_of(ZpVec(3, {1, 2})) == 5);
  CHECK(s.vec_at(5) == ZpVec(3, {1, 2}));
  const auto m = s.members();
  REQUIRE(m.size() == 2);
  CHECK(m[0] == ZpVec(3, {0, 1}));
  CHECK(s.complement().size() == 7);
  CHECK(s.unite(s.complement()) == ZpSet::full(3, 2));
  CHECK(s.minus(s).empty());
  CHECK_THROWS_AS(ZpSet(2, 27), CapacityError);
  CHECK_THROWS_AS(ZpSet(1, 2), DomainError);
  CHECK_THROWS_AS(ZpSet(2, 0), DomainError);
}

TEST_CASE("balls match a full scan") {
  CHECK(ball(ZpVec(5, {0, 0}), 1).size() == 5);
  CHECK(ball(ZpVec(5, {0, 0}), 1) == oracle::ball_scan(ZpVec(5, {0, 0}), 1));
  CHECK(ball(ZpVec(2, {0, 0, 0}), 3) == ZpSet::full(2, 3));
  CHECK(ball(ZpVec(7, {3, 4}), 0).size() == 1);
  for (std::uint32_t p : {2u, 3u, 5u, 7u})
    for (int dim = 1; dim <= 4; ++dim)
      for (int r = 0; r <= 6; ++r) {
        std::vector<std::int64_t> c(dim);
        for (int i = 0; i < dim; ++i) c[i] = (i * 3 + r) % p;
        const ZpVec center(p, c);
        const ZpSet b = ball(center, r);
        CHECK(b == oracle::ball_scan(center, r));
        CHECK(ball_size(p, dim, r) == b.size());
      }
}

TEST_CASE("ball sizes") {
  CHECK(ball_size(5, 2, 1) == 5);
  CHECK(ball_size(3, 1, 1) == 3);
  CHECK(ball_size(11, 9, 0) == 1);
  CHECK(ball_size(2, 10, 2) == 56);
  for (int m = 1; m <= 12; ++m)
    for (int r = 1; r <= 5; ++r) {
      long double cap = 1;
      for (int i = 0; i < r; ++i) cap *= 3.0L * m;
      CHECK(static_cast<long double>(ball_size(3, m, r)) <= cap);
    }
}

TEST_CASE("sumset_zp small cases") {
  ZpSet zero(3, 2);
  zero.insert_index(0);
  CHECK(hfold_zp(zero, 5) == zero);
  CHECK(hfold_zp(ZpSet::full(2, 2), 2) == ZpSet::full(2, 2));
  ZpSet s(3, 1);
  s.insert(ZpVec(3, {0}));
  s.insert(ZpVec(3, {1}));
  CHECK(hfold_zp(s, 2) == ZpSet::full(3, 1));
  CHECK_THROWS_AS(hfold_zp(ZpSet(3, 1), 2), DomainError);
}

TEST_CASE("sumset_zp matches pairwise sums") {
  std::mt19937_64 rng(3);
  struct Shape {
    std::uint32_t p;
    int dim;
  };
  for (const Shape sh : {Shape{2, 3}, Shape{2, 7}, Shape{2, 10}, Shape{3, 4}, Shape{3, 6}, Shape{5, 3},
                         Shape{7, 3}}) {
    for (double density : {0.01, 0.05, 0.3, 0.6, 0.95}) {
      const ZpSet s = oracle::random_zp_set(rng, sh.p, sh.dim, density);
      const ZpSet t = oracle::random_zp_set(rng, sh.p, sh.dim, density / 2);
      CHECK(sumset_zp(s, t) == oracle::sumset_pairs(s, t));
    }
  }
}

TEST_CASE("sumset_zp on structured sets") {
  // slabs and punctured slabs exercise the fill and complement kernels
  const std::uint32_t p = 2;
  const int dim = 12;
  ZpSet a(p, dim);
  for (std::int64_t w = 0; w < 256; ++w) a.insert_index((std::int64_t{1} << 8) + w);
  for (std::int64_t w : ball(ZpVec::zero(p, 8), 2).member_indices()) a.insert_index((std::int64_t{2} << 8) + w);
  ZpSet punctured = ZpSet::full(p, 8).minus(ball(ZpVec::zero(p, 8), 1));
  for (std::int64_t w : punctured.member_indices()) a.insert_index((std::int64_t{4} << 8) + w);
  CHECK(sumset_zp(a, a) == oracle::sumset_pairs(a, a));
  const ZpSet twice = sumset_zp(a, a);
  CHECK(sumset_zp(twice, a) == oracle::sumset_pairs(twice, a));
}

TEST_CASE("separated points") {
  const auto pts = separated_points(5, 2, 2, 4);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == ZpVec(5, {0, 0}));
  CHECK(pts[1] == ZpVec(5, {2, 2}));
  CHECK(separated_points(3, 4, 1, 9) == std::vector<ZpVec>{ZpVec::zero(3, 4)});
  try {
    separated_points(2, 3, 2, 4);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(e.achieved() == 1);
  }
  const auto many = separated_points(2, 8, 10, 3);
  for (std::size_t i = 0; i < many.size(); ++i)
    for (std::size_t j = i + 1; j < many.size(); ++j) CHECK(l1_dist(many[i], many[j]) >= 3);
}

TEST_CASE("radius-aware placement keeps balls apart") {
  const std::vector<std::int64_t> radii{3, 3, 2, 1, 1, 1, 0, 0};
  const auto c = place_centers(2, 12, radii, SeparationRule::RadiusAware, 0);
  REQUIRE(c.size() == radii.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) CHECK(l1_dist(c[i], c[j]) >= radii[i] + radii[j] + 2);
  const std::vector<std::int64_t> up{1, 2};
  CHECK_THROWS_AS(place_centers(2, 4, up, SeparationRule::Uniform, 3), DomainError);
}

TEST_CASE("ZpSet JSON round trip") {
  ZpSet s(3, 2);
  s.insert(ZpVec(3, {2, 1}));
  s.insert(ZpVec(3, {0, 2}));
  const auto j = to_json(s);
  CHECK(j.dump() == R"({"p":3,"M":2,"members":[[0,2],[2,1]]})");
  CHECK(zp_set_from_json(j) == s);
  CHECK(zp_vec_from_json(to_json(ZpVec(3, {1, 2}))) == ZpVec(3, {1, 2}));
  auto bad = j;
  bad["members"] = nlohmann::ordered_json::parse("[[2,1],[0,2]]");
  CHECK_THROWS_AS(zp_set_from_json(bad), DomainError);
}
