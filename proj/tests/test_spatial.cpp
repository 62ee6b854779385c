#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "asclt/grid_index.hpp"
#include "asclt/voronoi.hpp"
#include "test_support.hpp"

using namespace asclt;

namespace {

// Oracle: full linear scan with the same deterministic ordering key.
std::vector<std::uint32_t> knn_scan(const PointConfiguration& cfg, PointView x, std::size_t k,
                                    bool exclude_self) {
  std::vector<detail::NeighborKey> keys;
  for (std::uint32_t i = 0; i < cfg.size(); ++i) {
    const double d2 = squared_distance(x, cfg.point(i));
    if (exclude_self && d2 == 0.0) continue;
    keys.push_back({d2, i});
  }
  std::sort(keys.begin(), keys.end(), [&](const detail::NeighborKey& a, const detail::NeighborKey& b) {
    return detail::neighbor_less(a, b, cfg);
  });
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < std::min(k, keys.size()); ++i) out.push_back(keys[i].index);
  return out;
}

std::vector<std::uint32_t> range_scan(const PointConfiguration& cfg, PointView x, double r) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < cfg.size(); ++i)
    if (squared_distance(x, cfg.point(i)) <= r * r) out.push_back(i);
  return out;
}

Region window_for_dim(int d) { return Region::box(Vec(d, -0.5), Vec(d, 0.5)); }

}  // namespace

TEST_CASE("empty and tiny indexes") {
  const Region w = window_for_dim(2);
  const PointConfiguration empty(w, {}, 1, 0);
  const GridIndex ix(empty);
  CHECK(ix.occupied_buckets() == 0);
  CHECK(ix.knn(Vec{0.0, 0.0}, 3, false).empty());
  CHECK(ix.range(Vec{0.0, 0.0}, 10.0).empty());
}

TEST_CASE("knn hand examples") {
  const Region w = Region::box({-10.0}, {10.0});
  const auto cfg = testsupport::config_from_points(w, {{0.0}, {1.0}, {3.0}});
  const GridIndex ix(cfg);

  SECTION("closest of {0,3} to 1 is 0") {
    const auto r = ix.knn(cfg.point(1), 1, true);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 0);
  }
  SECTION("k >= N-1 with exclude_self returns all others") {
    const auto r = ix.knn(cfg.point(0), 5, true);
    REQUIRE(r.size() == 2);
    CHECK(r[0] == 1);
    CHECK(r[1] == 2);
  }
  SECTION("equidistant tie broken lexicographically") {
    const auto cfg2 = testsupport::config_from_points(w, {{1.0}, {-1.0}});
    const GridIndex ix2(cfg2);
    const auto r = ix2.knn(Vec{0.0}, 1, false);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == 1);  // the point at -1
  }
}

TEST_CASE("range query closed-ball convention") {
  const Region w = window_for_dim(2);
  const auto cfg = testsupport::config_from_points(w, {{0.1, 0.1}, {0.3, 0.3}});
  const GridIndex ix(cfg);
  CHECK(ix.range(Vec{0.2, 0.2}, 0.0).empty());
  const auto hit = ix.range(Vec{0.1, 0.1}, 0.0);
  REQUIRE(hit.size() == 1);
  CHECK(hit[0] == 0);
  // exactly at distance: closed ball includes it
  const auto at = ix.range(Vec{0.1, 0.1}, std::sqrt(0.08));
  CHECK(at.size() == 2);
}

TEST_CASE("oracle equivalence on random configurations") {
  // scaled-down version of the acceptance sweep
  for (int d = 1; d <= 3; ++d) {
    const Region w = window_for_dim(d);
    for (int rep = 0; rep < 40; ++rep) {
      const auto cfg = testsupport::random_config(w, 1, 120, 1000 * d + rep);
      const GridIndex ix(cfg);
      auto qeng = RngStream{77, static_cast<std::uint64_t>(rep)}.engine();
      for (int q = 0; q < 10; ++q) {
        const auto xs = sample_uniform(w, 1, RngStream{88, static_cast<std::uint64_t>(rep * 100 + q)});
        const std::size_t k = 1 + qeng() % 6;
        CHECK(ix.knn(xs[0], k, false) == knn_scan(cfg, xs[0], k, false));
        const double r = 0.05 + 0.2 * static_cast<double>(qeng() % 100) / 100.0;
        CHECK(ix.range(xs[0], r) == range_scan(cfg, xs[0], r));
        if (cfg.size() > 1) {
          const std::uint32_t i = qeng() % cfg.size();
          CHECK(ix.knn(cfg.point(i), k, true) == knn_scan(cfg, cfg.point(i), k, true));
        }
      }
    }
  }
}

TEST_CASE("knn degree bound") {
  const Region w = window_for_dim(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto cfg = testsupport::random_config(w, 9, 60, 500 + rep);
    const GridIndex ix(cfg);
    const std::size_t k = 4;
    if (cfg.size() >= k + 1)
      for (std::uint32_t i = 0; i < cfg.size(); ++i)
        CHECK(ix.knn(cfg.point(i), k, true).size() == k);
  }
}

TEST_CASE("voronoi cells: hand cases") {
  const Region w = window_for_dim(2);

  SECTION("single point owns the window") {
    const auto cfg = testsupport::config_from_points(w, {{0.1, -0.2}});
    const auto cell = voronoi_cell_2d(cfg, 0, w);
    CHECK(cell.area() == Catch::Approx(1.0).epsilon(1e-12));
  }

  SECTION("two symmetric points split the window in half") {
    const auto cfg = testsupport::config_from_points(w, {{-0.2, 0.0}, {0.2, 0.0}});
    CHECK(voronoi_cell_2d(cfg, 0, w).area() == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(voronoi_cell_2d(cfg, 1, w).area() == Catch::Approx(0.5).epsilon(1e-12));
  }

  SECTION("three random cells match hit-counting Monte Carlo") {
    const auto cfg = testsupport::random_config(w, 3, 3, 4242);
    const GridIndex ix(cfg);
    const std::size_t q = 1000000;
    const auto samples = sample_uniform(w, q, RngStream{31337, 1});
    std::vector<std::int64_t> hits(3, 0);
    for (const auto& s : samples) ++hits[ix.knn(s, 1, false)[0]];
    for (std::uint32_t i = 0; i < 3; ++i) {
      const double p = static_cast<double>(hits[i]) / static_cast<double>(q);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(q));
      CHECK(std::abs(voronoi_cell_2d(cfg, i, w).area() - p) <= 3.0 * se + 1e-6);
    }
  }
}

TEST_CASE("voronoi partition of unity") {
  const Region w = window_for_dim(2);
  for (int rep = 0; rep < 10; ++rep) {
    const auto cfg = testsupport::random_config(w, 5, 120, 900 + rep);
    const GridIndex ix(cfg);
    double total = 0.0;
    for (std::uint32_t i = 0; i < cfg.size(); ++i)
      total += voronoi_cell_2d_prefiltered(ix, i, w).area();
    CHECK(total == Catch::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("prefiltered cells are bit-identical to the naive path") {
  const Region w = window_for_dim(2);
  for (int rep = 0; rep < 15; ++rep) {
    const auto cfg = testsupport::random_config(w, 2, 300, 7100 + rep);
    const GridIndex ix(cfg);
    for (std::uint32_t i = 0; i < cfg.size(); ++i) {
      const auto naive = voronoi_cell_2d(cfg, i, w);
      const auto fast = voronoi_cell_2d_prefiltered(ix, i, w);
      REQUIRE(naive.vertices.size() == fast.vertices.size());
      for (std::size_t v = 0; v < naive.vertices.size(); ++v) {
        CHECK(naive.vertices[v][0] == fast.vertices[v][0]);
        CHECK(naive.vertices[v][1] == fast.vertices[v][1]);
      }
    }
  }
}

TEST_CASE("disk overlap area: exact branches and the general case") {
  // window square as a polygon
  const std::vector<Pt2> square{{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};

  SECTION("polygon inside the disk") {
    CHECK(disk_overlap_area(square, Pt2{0.0, 0.0}, 2.0) == polygon_area(square));
  }
  SECTION("disjoint gives exact zero") {
    CHECK(disk_overlap_area(square, Pt2{5.0, 5.0}, 1.0) == 0.0);
  }
  SECTION("disk strictly inside") {
    CHECK(disk_overlap_area(square, Pt2{0.0, 0.0}, 0.25) == Catch::Approx(M_PI / 16.0).epsilon(1e-12));
  }
  SECTION("half overlap") {
    // disk centered on an edge: half the disk is inside
    const double r = 0.2;
    CHECK(disk_overlap_area(square, Pt2{0.5, 0.0}, r) ==
          Catch::Approx(M_PI * r * r / 2.0).epsilon(1e-9));
  }
  SECTION("random polygons against hit counting") {
    const Region w = Region::box({-0.5, -0.5}, {0.5, 0.5});
    for (int rep = 0; rep < 5; ++rep) {
      const auto cfg = testsupport::random_config(w, 6, 12, 3200 + rep);
      const GridIndex ix(cfg);
      const auto cell = voronoi_cell_2d_prefiltered(ix, 0, w);
      const Pt2 c{0.05, -0.1};
      const double r = 0.3;
      const std::size_t q = 200000;
      std::int64_t hits = 0;
      for (const auto& s : sample_uniform(w, q, RngStream{static_cast<std::uint64_t>(64 + rep), 5})) {
        const double dx = s[0] - c[0], dy = s[1] - c[1];
        if (dx * dx + dy * dy > r * r) continue;
        // inside the cell: nearest nucleus is 0
        if (ix.knn(s, 1, false)[0] == 0) ++hits;
      }
      const double p = static_cast<double>(hits) / static_cast<double>(q);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(q));
      CHECK(std::abs(disk_overlap_area(cell.vertices, c, r) - p) <= 3.0 * se + 1e-5);
    }
  }
}

TEST_CASE("cells export as CSV vertex lists") {
  const Region w = Region::box({-0.5, -0.5}, {0.5, 0.5});
  const auto cfg = testsupport::config_from_points(w, {{0.0, 0.0}});
  const std::string csv = cell_csv(voronoi_cell_2d(cfg, 0, w));
  CHECK(csv.rfind("x,y\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 corners
}
