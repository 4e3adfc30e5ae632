#include <doctest.h>

#include <cmath>
#include <random>

#include "dgril/genrank.hpp"
#include "dgril/gril.hpp"
#include "test_support.hpp"

using namespace dgril;

TEST_CASE("sample_centers") {
  CHECK(sample_centers(100, 10).size() == 100);
  CHECK(sample_centers(2, 1).size() == 4);
  CHECK(sample_centers(100, 100).size() == 1);
  CHECK_THROWS_AS(sample_centers(10, 11), std::invalid_argument);
  CHECK_THROWS_AS(sample_centers(10, 0), std::invalid_argument);
  auto c = sample_centers(100, 10);
  CHECK(c[13].x == doctest::Approx(0.3));
  CHECK(c[13].y == doctest::Approx(0.1));
}

TEST_CASE("single vertex landscape") {
  auto k = build_complex(1, {});
  std::vector<double> v{0.0, 0.3};
  CHECK(gril_value(k, v, {1, 1}, 1, 1, 0) == doctest::Approx(0.7));
  CHECK(gril_value(k, v, {1, 1}, 2, 1, 0) == 0.0);
  // Length 2: the outer square's lower-left corner sits at 2d below p in y.
  CHECK(gril_value(k, v, {1, 1}, 1, 2, 0) == doctest::Approx(0.35));
  CHECK(gril_value(k, v, {1, 1}, 1, 1, 0, SearchMode::grid, 100) == doctest::Approx(0.7));
}

TEST_CASE("unfilled cycle landscape") {
  auto k = build_complex(3, {{0, 1}, {1, 2}, {0, 2}});
  std::vector<double> v(2 * k.size());
  const double vx[] = {0.0, 0.2, 0.0}, vy[] = {0.0, 0.0, 0.1};
  for (Vertex i = 0; i < 3; ++i) {
    v[coord(i, Axis::x)] = vx[i];
    v[coord(i, Axis::y)] = vy[i];
  }
  for (std::size_t e = 3; e < 6; ++e) {
    v[coord(e, Axis::x)] = 0.2;
    v[coord(e, Axis::y)] = 0.1;
  }
  CHECK(gril_value(k, v, {0.5, 0.5}, 1, 1, 1) == doctest::Approx(0.3));
  CHECK(gril_value(k, v, {0.5, 0.5}, 2, 1, 1) == 0.0);
}

TEST_CASE("empty filtration gives the zero vector; duplicate centers duplicate entries") {
  auto k = build_complex(2, {{0, 1}});
  std::vector<double> v(2 * k.size(), 5.0);
  GrilConfig cfg;
  cfg.centers = sample_centers(4, 1);
  cfg.centers.push_back(cfg.centers[5]);
  auto g = gril_vector(k, v, cfg);
  for (double x : g.values) CHECK(x == 0.0);

  std::mt19937_64 rng(3);
  auto k2 = testing::random_complex(rng, 7, 0.5, 0.3);
  auto v2 = testing::random_monotone(rng, k2);
  auto g2 = gril_vector(k2, v2, cfg);
  for (std::size_t di = 0; di < 2; ++di)
    for (std::size_t ki = 0; ki < 3; ++ki)
      CHECK(g2.values[cfg.index(di, ki, 5)] == g2.values[cfg.index(di, ki, 16)]);
}

TEST_CASE("parallel and serial vectors agree bitwise") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto k = testing::random_complex(rng, 8, 0.4, 0.3);
    auto v = testing::random_monotone(rng, k);
    GrilConfig cfg;
    cfg.centers = sample_centers(10, 2);
    CHECK(gril_vector(k, v, cfg).values == gril_vector_serial(k, v, cfg).values);
  }
}

TEST_CASE("landscape is monotone in k and exact/grid agree within a step") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 40; ++t) {
    auto k = testing::random_complex(rng, 7, 0.5, 0.3);
    auto v = testing::random_monotone(rng, k);
    const Point p{u(rng), u(rng)};
    for (int deg = 0; deg <= 1; ++deg) {
      for (int len = 1; len <= 2; ++len) {
        double prev = INFINITY;
        for (int kk = 1; kk <= 3; ++kk) {
          const double lam = gril_value(k, v, p, kk, len, deg);
          CHECK(lam <= prev);
          prev = lam;
          const double grid = gril_value(k, v, p, kk, len, deg, SearchMode::grid, 100);
          CHECK(std::abs(grid - lam) <= 0.01 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("lambda is the supremum of qualifying widths") {
  // Checked against a dense sweep of widths evaluated with the oracle.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 25; ++t) {
    auto k = testing::random_complex(rng, 6, 0.5, 0.3);
    auto v = testing::random_monotone(rng, k, 8);
    const Point p{std::round(u(rng) * 8) / 8, std::round(u(rng) * 8) / 8};
    const int len = 1 + t % 3;
    const int deg = t % 2;
    const double lam = gril_value(k, v, p, 1, len, deg);
    double best = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double d = i * 1e-3;
      if (genrank_oracle(k, v, WormSpec{p, d, len}, deg) >= 1) best = d;
    }
    INFO("trial " << t);
    CHECK(lam >= best - 1e-12);
    CHECK(lam <= best + 1e-3 + 1e-12);
  }
}
