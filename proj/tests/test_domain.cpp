#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "asclt/region.hpp"
#include "asclt/sampling.hpp"
#include "test_support.hpp"

using namespace asclt;

TEST_CASE("box volume and invariants") {
  CHECK(Region::box({0, 0}, {1, 1}).volume() == 1.0);
  CHECK(Region::box({0, 0}, {2, 3}).volume() == 6.0);
  CHECK_THROWS_AS(Region::box({0, 0}, {0, 1}), domain_error);
  CHECK_THROWS_AS(Region::box({0}, {1, 1}), domain_error);
}

TEST_CASE("ball volume") {
  CHECK(Region::ball({0, 0}, 0.25).volume() == Catch::Approx(M_PI / 16.0).epsilon(1e-12));
  CHECK(Region::ball({1, 2, 3}, 1.0).volume() == Catch::Approx(4.0 / 3.0 * M_PI).epsilon(1e-12));
  CHECK_THROWS_AS(Region::ball({0, 0}, 0.0), domain_error);
}

TEST_CASE("polytope construction, volume, containment") {
  // triangle x >= 0, y >= 0, x + y <= 1
  const Region tri = Region::polytope({-1, 0, 0, -1, 1, 1}, {0, 0, 1}, 2);
  CHECK(tri.volume() == Catch::Approx(0.5).epsilon(1e-9));
  CHECK(tri.contains(Vec{0.25, 0.25}));
  CHECK_FALSE(tri.contains(Vec{0.8, 0.8}));

  // cube [-1,1]^3 from six halfspaces
  const Region cube =
      Region::polytope({1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1},
                       {1, 1, 1, 1, 1, 1}, 3);
  CHECK(cube.volume() == Catch::Approx(8.0).epsilon(1e-9));
  CHECK(cube.polytope_vertices().size() == 8);

  // unbounded: missing a face
  CHECK_THROWS_AS(Region::polytope({1, 0, 0, 1, -1, 0}, {1, 1, 1}, 2), domain_error);
  // empty: x <= -1 and x >= 1
  CHECK_THROWS_AS(Region::polytope({1, 0, -1, 0, 0, 1, 0, -1}, {-1, -1, 1, 1}, 2), domain_error);
}

TEST_CASE("distance to targets") {
  const Region y = Region::box({-0.5, -0.5}, {0.5, 0.5});
  const auto whole = DistanceTarget::whole(y);
  CHECK(distance_to_target(Vec{0.2, -0.3}, whole) == 0.0);
  CHECK(distance_to_target(Vec{1.5, 0.0}, whole) == Catch::Approx(1.0));

  const auto shell = DistanceTarget::boundary(Region::ball({0, 0}, 0.25));
  CHECK(distance_to_target(Vec{0.0, 0.0}, shell) == Catch::Approx(0.25));
  CHECK(distance_to_target(Vec{0.5, 0.0}, shell) == Catch::Approx(0.25));

  const auto box_shell = DistanceTarget::boundary(Region::box({0, 0}, {1, 1}));
  CHECK(distance_to_target(Vec{0.5, 0.9}, box_shell) == Catch::Approx(0.1));
  CHECK(distance_to_target(Vec{0.5, 1.7}, box_shell) == Catch::Approx(0.7));
  CHECK(distance_to_target(Vec{2.0, 2.0}, box_shell) == Catch::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(DistanceTarget::boundary(Region::polytope({-1, 0, 0, -1, 1, 1}, {0, 0, 1}, 2)),
                  unsupported_error);
}

TEST_CASE("polytope exterior distance is exact in d = 2") {
  const Region tri = Region::polytope({-1, 0, 0, -1, 1, 1}, {0, 0, 1}, 2);
  CHECK(tri.distance_to(Vec{-1.0, 0.5}) == Catch::Approx(1.0));
  CHECK(tri.distance_to(Vec{1.0, 1.0}) == Catch::Approx(std::sqrt(2.0) / 2.0));
  CHECK(tri.distance_to(Vec{-3.0, -4.0}) == Catch::Approx(5.0));
}

TEST_CASE("sample_poisson: zero intensity, mean count, general box") {
  const Region sq = Region::box({0, 0}, {1, 1});
  CHECK(sample_poisson(0.0, sq, RngStream{1, 2}).size() == 0);

  double sum = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r)
    sum += static_cast<double>(sample_poisson(100.0, sq, RngStream{7, static_cast<std::uint64_t>(r)}).size());
  const double mean = sum / reps;
  CHECK(std::abs(mean - 100.0) < 0.3);  // 3 sigma of the mean, sigma = 10/100

  double sum2 = 0.0;
  for (int r = 0; r < 2000; ++r)
    sum2 += static_cast<double>(
        sample_poisson(50.0, Region::box({0, 0}, {2, 1}), RngStream{8, static_cast<std::uint64_t>(r)}).size());
  CHECK(std::abs(sum2 / 2000 - 100.0) < 4.0 * 10.0 / std::sqrt(2000.0));
}

TEST_CASE("sample_uniform basics") {
  const Region sq = Region::box({0, 0}, {1, 1});
  CHECK(sample_uniform(sq, 0, RngStream{3, 4}).empty());

  const auto pts = sample_uniform(sq, 100000, RngStream{5, 6});
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p[0];
    my += p[1];
  }
  CHECK(std::abs(mx / 1e5 - 0.5) < 0.003);
  CHECK(std::abs(my / 1e5 - 0.5) < 0.003);

  const Region ball = Region::ball({0.3, -0.2}, 0.7);
  for (const auto& p : sample_uniform(ball, 2000, RngStream{9, 1}))
    CHECK(distance(p, std::get<Ball>(ball.shape()).center) <= 0.7);
}

TEST_CASE("restrict_scaled examples") {
  const Region y = Region::box({-0.5, -0.5}, {0.5, 0.5});

  SECTION("origin is scale-fixed") {
    PointConfiguration m(y.scaled(8.0), {0.0, 0.0}, std::nullopt, 0);
    for (std::int64_t n : {1, 5, 33}) {
      const auto r = restrict_scaled(m, n, y);
      REQUIRE(r.size() == 1);
      CHECK(r.point(0)[0] == 0.0);
      CHECK(r.point(0)[1] == 0.0);
      CHECK(r.scale_index() == n);
    }
  }

  SECTION("n = 1 is the identity on master cap Y") {
    PointConfiguration m(y.scaled(2.0), {0.1, 0.2, 0.8, 0.3, -0.4, -0.45}, std::nullopt, 0);
    const auto r = restrict_scaled(m, 1, y);
    REQUIRE(r.size() == 2);  // (0.8, 0.3) falls outside Y
    CHECK(r.point(0)[0] == 0.1);
    CHECK(r.point(1)[0] == -0.4);
  }

  SECTION("hand-computed scaling in d = 2") {
    PointConfiguration m(y.scaled(4.0), {2.0, 0.0}, std::nullopt, 0);
    CHECK(restrict_scaled(m, 4, y).size() == 0);   // window [-1,1]^2 excludes scaled point
    const auto r16 = restrict_scaled(m, 16, y);    // window [-2,2]^2 includes it
    REQUIRE(r16.size() == 1);
    CHECK(r16.point(0)[0] == Catch::Approx(0.5).margin(1e-15));
    CHECK(r16.point(0)[1] == 0.0);
  }

  SECTION("coverage error instead of silent truncation") {
    PointConfiguration m(y.scaled(2.0), {0.1, 0.1}, std::nullopt, 0);
    CHECK_THROWS_AS(restrict_scaled(m, 16, y), coverage_error);
  }
}

TEST_CASE("restriction nesting and expected counts") {
  const Region y = Region::box({-0.5, -0.5}, {0.5, 0.5});
  const std::int64_t n_max = 64;

  SECTION("nesting of pre-images") {
    const auto master = sample_master(n_max, y, RngStream{11, stream_purpose::master_sample});
    const auto big = restrict_scaled(master, 64, y);
    const auto small = restrict_scaled(master, 16, y);
    // every pre-image generating the small restriction also generates one in
    // the large whenever it lands inside Y (here all of 16^{1/2} Y lies inside
    // 64^{1/2} Y, so all do)
    std::set<std::pair<double, double>> big_pre;
    for (std::size_t i = 0; i < big.size(); ++i)
      big_pre.insert({big.point(i)[0] * 8.0, big.point(i)[1] * 8.0});
    for (std::size_t i = 0; i < small.size(); ++i) {
      const double px = small.point(i)[0] * 4.0;
      const double py = small.point(i)[1] * 4.0;
      bool found = false;
      for (const auto& [bx, by] : big_pre)
        if (std::abs(bx - px) < 1e-9 && std::abs(by - py) < 1e-9) found = true;
      CHECK(found);
    }
  }

  SECTION("mean restricted count is n vol(Y)") {
    const std::int64_t n = 40;
    double sum = 0.0;
    const int masters = 1000;
    for (int r = 0; r < masters; ++r) {
      const auto master =
          sample_master(n_max, y, RngStream{static_cast<std::uint64_t>(1000 + r), 1});
      sum += static_cast<double>(restrict_scaled(master, n, y).size());
    }
    const double se = std::sqrt(static_cast<double>(n) / masters);
    CHECK(std::abs(sum / masters - static_cast<double>(n)) < 4.0 * se);
  }
}

TEST_CASE("rng streams are deterministic and order-free") {
  const Region sq = Region::box({0, 0}, {1, 1});
  const auto a = sample_poisson(20.0, sq, RngStream{42, 7});
  const auto b = sample_poisson(20.0, sq, RngStream{42, 7});
  REQUIRE(a.size() == b.size());
  CHECK(a.coords() == b.coords());
  const auto c = sample_poisson(20.0, sq, RngStream{42, 8});
  CHECK(a.coords() != c.coords());
  CHECK(RngStream{1, 2}.derive(3).stream_id == RngStream{1, 2}.derive(3).stream_id);
}

TEST_CASE("point configuration invariants") {
  const Region sq = Region::box({0, 0}, {1, 1});
  CHECK_THROWS_AS(PointConfiguration(sq, {0.5, 0.5, 0.5, 0.5}, 1, 0), domain_error);
  CHECK_THROWS_AS(PointConfiguration(sq, {2.0, 0.5}, 1, 0), domain_error);
  const PointConfiguration ok(sq, {0.5, 0.5}, 1, 0);
  CHECK_THROWS_AS(ok.with_points({Vec{0.5, 0.5}}), domain_error);
}

TEST_CASE("region scaling and containment") {
  const Region y = Region::box({-0.5, -0.5}, {0.5, 0.5});
  CHECK(y.scaled(4.0).contains_region(y.scaled(2.0)));
  CHECK_FALSE(y.scaled(2.0).contains_region(y.scaled(4.0)));
  const Region ball = Region::ball({0.1, 0.0}, 0.2);
  CHECK(y.contains_region(ball));
  CHECK(Region::ball({0, 0}, 3.0).contains_region(y.scaled(2.0)));
}

TEST_CASE("poisson sampling on a ball uses rejection correctly") {
  const Region ball = Region::ball({0.2, -0.1}, 0.4);
  double sum = 0.0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const auto cfg = sample_poisson(60.0, ball, RngStream{313, static_cast<std::uint64_t>(r)});
    sum += static_cast<double>(cfg.size());
    if (r == 0)
      for (std::size_t i = 0; i < cfg.size(); ++i)
        CHECK(distance(cfg.point(i), std::get<Ball>(ball.shape()).center) <= 0.4);
  }
  const double lambda = 60.0 * ball.volume();
  CHECK(std::abs(sum / reps - lambda) < 4.0 * std::sqrt(lambda / reps));
}

TEST_CASE("3-D polytope volume agrees with Monte Carlo hit counting") {
  // octahedron |x| + |y| + |z| <= 1: volume 4/3
  std::vector<double> normals, offsets;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) {
        normals.insert(normals.end(), {static_cast<double>(sx), static_cast<double>(sy),
                                       static_cast<double>(sz)});
        offsets.push_back(1.0);
      }
  const Region octa = Region::polytope(normals, offsets, 3);
  CHECK(octa.volume() == Catch::Approx(4.0 / 3.0).epsilon(1e-9));
  std::size_t hits = 0;
  const std::size_t q = 200000;
  const Region bb = Region::box({-1, -1, -1}, {1, 1, 1});
  for (const auto& p : sample_uniform(bb, q, RngStream{99, 99}))
    if (octa.contains(p)) ++hits;
  const double mc = 8.0 * static_cast<double>(hits) / static_cast<double>(q);
  CHECK(std::abs(mc - octa.volume()) < 0.02);
}

TEST_CASE("polytope translation preserves geometry") {
  const Region tri = Region::polytope({-1, 0, 0, -1, 1, 1}, {0, 0, 1}, 2);
  const Region moved = tri.translated(Vec{2.0, -1.0});
  CHECK(moved.volume() == Catch::Approx(tri.volume()).epsilon(1e-12));
  CHECK(moved.contains(Vec{2.25, -0.75}));
  CHECK_FALSE(moved.contains(Vec{0.25, 0.25}));
}
