#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "asclt/malliavin.hpp"
#include "test_support.hpp"

using namespace asclt;

namespace {

Region square_window() { return Region::box({-0.5, -0.5}, {0.5, 0.5}); }

std::vector<ScoreModel> all_models() {
  const Region w = square_window();
  return {count_model(w), knn_model(w, 1, 1.0), clique_model(w, 1, 0.8),
          voronoi_model(Region::ball({0.0, 0.0}, 0.25))};
}

}  // namespace

TEST_CASE("count model difference operators") {
  const ScoreModel model = count_model(square_window());
  for (int rep = 0; rep < 30; ++rep) {
    const auto cfg = testsupport::random_config(model.y, 0, 30, 100 + rep);
    const auto y = sample_uniform(model.y, 2, RngStream{55, static_cast<std::uint64_t>(rep)});
    CHECK(add_one_cost(model, cfg, y[0]) == 1.0);
    CHECK(second_difference(model, cfg, y[0], y[1]) == 0.0);
  }
}

TEST_CASE("points outside Y contribute exactly zero") {
  for (const auto& model : all_models()) {
    const auto cfg = testsupport::random_config(model.y, 5, 20, 7);
    const Vec outside{1.7, -2.3};
    CHECK(add_one_cost(model, cfg, outside) == 0.0);
    const Vec inside{0.1, 0.1};
    CHECK(second_difference(model, cfg, outside, inside) == 0.0);
  }
}

TEST_CASE("duplicate insertion is a precondition error") {
  const ScoreModel model = count_model(square_window());
  const auto cfg = testsupport::config_from_points(model.y, {{0.1, 0.1}});
  CHECK_THROWS_AS(add_one_cost(model, cfg, Vec{0.1, 0.1}), domain_error);
  CHECK_THROWS_AS(second_difference(model, cfg, Vec{0.2, 0.2}, Vec{0.2, 0.2}), domain_error);
}

TEST_CASE("second difference is exactly symmetric") {
  for (const auto& model : all_models()) {
    for (int rep = 0; rep < 25; ++rep) {
      const auto cfg = testsupport::random_config(model.y, 2, 25, 9000 + rep);
      const auto y = sample_uniform(model.y, 2, RngStream{66, static_cast<std::uint64_t>(rep)});
      const double a = second_difference(model, cfg, y[0], y[1]);
      const double b = second_difference(model, cfg, y[1], y[0]);
      CHECK(a == b);
    }
  }
}

TEST_CASE("adding a point never destroys cliques") {
  const ScoreModel model = clique_model(square_window(), 2, 0.9);
  for (int rep = 0; rep < 40; ++rep) {
    const auto cfg = testsupport::random_config(model.y, 2, 30, 400 + rep);
    const auto y = sample_uniform(model.y, 1, RngStream{77, static_cast<std::uint64_t>(rep)});
    CHECK(add_one_cost(model, cfg, y[0]) >= 0.0);
  }
}

TEST_CASE("one new triangle from a completing vertex") {
  const ScoreModel model = clique_model(square_window(), 2, 0.3);
  const auto cfg = testsupport::config_from_points(square_window(), {{-0.05, 0.0}, {0.05, 0.0}});
  // scale 1 so the graph radius is 0.3; the new point is within range of both
  CHECK(add_one_cost(model, cfg, Vec{0.0, 0.05}) == 1.0);
}

TEST_CASE("clique second difference vanishes for far-apart insertions") {
  const ScoreModel model = clique_model(square_window(), 1, 0.4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto cfg = testsupport::random_config(model.y, 0, 10, 800 + rep);
    // farther apart than 2 r n^{-1/d} = 0.8 is impossible inside the unit
    // square along one axis alone; use the diagonal corners
    const Vec y1{-0.45, -0.45};
    const Vec y2{0.45, 0.45};
    bool clean = true;  // no config point adjacent to both
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      if (distance(cfg.point(i), PointView(y1)) <= 0.4 &&
          distance(cfg.point(i), PointView(y2)) <= 0.4)
        clean = false;
    }
    if (clean && distance(PointView(y1), PointView(y2)) > 0.8)
      CHECK(second_difference(model, cfg, y1, y2) == 0.0);
  }
}

TEST_CASE("indicator reduction: total route equals score route") {
  for (const auto& model : all_models()) {
    for (int rep = 0; rep < 6; ++rep) {
      const auto base = testsupport::random_config(model.y, 3, 20, 300 + rep);
      const PointConfiguration cfg(model.y, std::vector<double>(base.coords()), 2, 17);
      const auto y = sample_uniform(model.y, 1, RngStream{88, static_cast<std::uint64_t>(rep)});
      const double via_total = add_one_cost(model, cfg, y[0]);
      const double via_scores = add_one_cost_scorewise(model, cfg, y[0]);
      CHECK(via_total == Catch::Approx(via_scores).margin(1e-9));
    }
  }
}

TEST_CASE("stabilization radius proxy") {
  const Region w = square_window();

  SECTION("count model stabilizes at the smallest grid value") {
    const ScoreModel model = count_model(w);
    const auto cfg = testsupport::random_config(w, 5, 15, 3100);
    const auto proxy = stabilization_radius_proxy(model, cfg, 0, {0.1, 0.5, 1.0, 1.5}, {});
    CHECK(proxy.stable);
    CHECK(proxy.radius == 0.1);
  }

  SECTION("kNN mutuality on the line {0,1,3}") {
    const Region line = Region::box({-10.0}, {10.0});
    const ScoreModel model = knn_model(line, 1, 1.0);
    const auto cfg = testsupport::config_from_points(line, {{0.0}, {1.0}, {3.0}});
    const std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 5.0, 20.0};
    // the middle point settles once it sees its mutual partner at distance 1
    const auto mid = stabilization_radius_proxy(model, cfg, 1, grid, {});
    CHECK(mid.stable);
    CHECK(mid.radius == 1.0);
    // the outlier at 3 must see point 0 (distance 3) to learn that its edge
    // to 1 is one-sided and carries full weight
    const auto far = stabilization_radius_proxy(model, cfg, 2, grid, {});
    CHECK(far.stable);
    CHECK(far.radius == 3.0);
  }

  SECTION("clique proxy never exceeds the graph radius") {
    const ScoreModel model = clique_model(w, 2, 0.8);
    for (int rep = 0; rep < 50; ++rep) {
      const auto base = testsupport::random_config(w, 2, 60, 4600 + rep);
      const PointConfiguration cfg(model.y, std::vector<double>(base.coords()), 4, 0);
      const double r_eff = 0.8 * std::pow(4.0, -0.5);
      std::vector<double> grid;
      for (int j = 1; j <= 8; ++j) grid.push_back(r_eff * j / 4.0);  // includes r_eff
      grid.push_back(2.0);
      auto eng = RngStream{1234, static_cast<std::uint64_t>(rep)}.engine();
      const std::uint32_t i = eng() % cfg.size();
      const auto extras =
          sample_uniform(w, eng() % 8, RngStream{4321, static_cast<std::uint64_t>(rep)});
      const auto proxy = stabilization_radius_proxy(model, cfg, i, grid, extras);
      CHECK(proxy.stable);
      CHECK(proxy.radius <= r_eff);
    }
  }

  SECTION("monotonicity under extra points, statistically") {
    const ScoreModel model = clique_model(w, 1, 0.6);
    int violations = 0, trials = 0;
    for (int rep = 0; rep < 60; ++rep) {
      const auto cfg = testsupport::random_config(w, 4, 30, 5200 + rep);
      std::vector<double> grid;
      for (int j = 1; j <= 12; ++j) grid.push_back(0.6 * j / 8.0);
      auto eng = RngStream{999, static_cast<std::uint64_t>(rep)}.engine();
      const std::uint32_t i = eng() % cfg.size();
      const auto extras = sample_uniform(w, 3, RngStream{998, static_cast<std::uint64_t>(rep)});
      const auto without = stabilization_radius_proxy(model, cfg, i, grid, {});
      const auto with = stabilization_radius_proxy(model, cfg, i, grid, extras);
      if (without.stable && with.stable) {
        ++trials;
        if (with.radius < without.radius) ++violations;
      }
    }
    INFO("proxy monotonicity violations: " << violations << "/" << trials);
    CHECK(trials > 30);
    CHECK(violations <= trials / 4);
  }

  SECTION("empty grid rejected") {
    const auto cfg = testsupport::random_config(w, 3, 5, 1);
    CHECK_THROWS_AS(stabilization_radius_proxy(count_model(w), cfg, 0, {}, {}), domain_error);
  }
}

TEST_CASE("nonzero score probabilities") {
  const Region w = square_window();

  SECTION("count score is never zero") {
    const auto est = nonzero_score_prob(count_model(w), 10, Vec{0.0, 0.0}, {}, 200, RngStream{5, 5});
    CHECK(est.p_hat == 1.0);
  }

  SECTION("kNN closed form 1 - exp(-n vol(Y))") {
    const ScoreModel model = knn_model(w, 1, 1.0);
    const std::int64_t n = 3;
    const double truth = 1.0 - std::exp(-3.0);
    const auto est = nonzero_score_prob(model, n, Vec{0.1, 0.1}, {}, 3000, RngStream{6, 6});
    CHECK(std::abs(est.p_hat - truth) <= 4.0 * est.standard_error + 1e-12);
  }

  SECTION("needs enough replications") {
    CHECK_THROWS_AS(nonzero_score_prob(count_model(w), 5, Vec{0.0, 0.0}, {}, 50, RngStream{7, 7}),
                    precision_error);
  }
}

TEST_CASE("decay fitting") {
  SECTION("exact exponential recovered") {
    std::vector<double> d{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
    std::vector<double> p;
    for (double x : d) p.push_back(std::exp(-2.0 * x));
    const auto fit = fit_decay(d, p, 1, 1);
    CHECK(fit.alpha == 1.0);
    CHECK(fit.c_rate == Catch::Approx(2.0).epsilon(1e-10));
    CHECK(fit.c_big == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(fit.residual < 1e-10);
  }

  SECTION("five percent multiplicative noise keeps c within 15 percent") {
    std::vector<double> d{0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 2.8};
    std::vector<double> p;
    auto eng = RngStream{808, 1}.engine();
    std::normal_distribution<double> nd(0.0, 0.05);
    for (double x : d) p.push_back(std::exp(-2.0 * x) * std::exp(nd(eng)));
    const auto fit = fit_decay(d, p, 1, 1);
    CHECK(std::abs(fit.c_rate - 2.0) / 2.0 < 0.15);
  }

  SECTION("flat data rejected") {
    CHECK_THROWS_AS(fit_decay({1, 2, 3, 4, 5}, {0.3, 0.3, 0.3, 0.3, 0.3}, 1, 1), flat_data_error);
  }

  SECTION("probabilities must lie in (0,1]") {
    CHECK_THROWS_AS(fit_decay({1, 2, 3, 4}, {0.5, 0.2, 0.0, 0.1}, 1, 1), domain_error);
  }

  SECTION("needs four points below one half") {
    CHECK_THROWS_AS(fit_decay({1, 2, 3, 4}, {0.9, 0.8, 0.7, 0.3}, 1, 1), precision_error);
  }
}

TEST_CASE("voronoi score probability deep inside the target set") {
  // at boundary distance 0.2 and n = 1e4 the cell of x never reaches the
  // boundary; the estimate must be statistically compatible with < 0.01
  const ScoreModel model = voronoi_model(Region::ball({0.0, 0.0}, 0.25));
  const Vec x{0.05, 0.0};  // d(x, boundary) = 0.2
  const auto est = nonzero_score_prob(model, 10000, x, {}, 400, RngStream{787, 0});
  CHECK(est.p_hat <= 0.01 + 3.0 * est.standard_error);
}
