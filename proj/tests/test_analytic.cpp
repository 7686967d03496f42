#include "lambda_train/analytic.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace lambda_train;

namespace {

constexpr double pi = std::numbers::pi;
const Complexd I(0, 1);

Propagator3d matrix(std::initializer_list<std::initializer_list<Complexd>> rows) {
  Propagator3d m;
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (const auto& v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

double max_diff(const Propagator3d& a, const Propagator3d& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single_pair_propagator examples") {
  SUBCASE("equal fields, full area swap 1 and 3") {
    const auto u = single_pair_propagator(pi / 4, 2 * pi);
    CHECK(max_diff(u, matrix({{0, 0, -1}, {0, -1, 0}, {-1, 0, 0}})) < 1e-15);
  }
  SUBCASE("theta = 0 leaves state 1 alone") {
    const double a = 1.3;
    const auto u = single_pair_propagator(0.0, a);
    const auto expected = matrix({{1, 0, 0},
                                  {0, std::cos(a / 2), -I * std::sin(a / 2)},
                                  {0, -I * std::sin(a / 2), std::cos(a / 2)}});
    CHECK(max_diff(u, expected) < 1e-15);
  }
  SUBCASE("U21 at theta = pi/6, area = pi") {
    const auto u = single_pair_propagator(pi / 6, pi);
    CHECK(std::abs(u(1, 0) - Complexd(0, -0.5)) < 1e-15);
  }
  SUBCASE("rejects bad arguments") {
    CHECK_THROWS_AS(single_pair_propagator(std::numeric_limits<double>::quiet_NaN(), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(single_pair_propagator(0.1, std::numeric_limits<double>::infinity()), std::invalid_argument);
    CHECK_THROWS_AS(single_pair_propagator(-0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(single_pair_propagator(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(single_pair_propagator(0.5, -1.0), std::invalid_argument);
  }
}

TEST_CASE("single_pair_final_populations examples") {
  CHECK((single_pair_final_populations(pi / 4, 2 * pi) - Populationsd(0, 0, 1)).cwiseAbs().maxCoeff() < 1e-15);
  for (double theta : {0.0, 0.4, pi / 2}) {
    CHECK(single_pair_final_populations(theta, 0.0) == Populationsd(1, 0, 0));
  }
  const auto p = single_pair_final_populations(pi / 8, 2 * pi);
  const auto via_matrix = state_populations(single_pair_propagator(pi / 8, 2 * pi) * ground_state());
  CHECK((p - Populationsd(0.5, 0, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((via_matrix - Populationsd(0.5, 0, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mixing_angles examples") {
  CHECK(mixing_angles(1) == std::vector<double>{pi / 4});
  const auto two = mixing_angles(2);
  CHECK(two[0] == doctest::Approx(pi / 8).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(3 * pi / 8).epsilon(1e-15));
  const auto three = mixing_angles(3);
  CHECK(three[0] == doctest::Approx(pi / 12).epsilon(1e-15));
  CHECK(three[1] == pi / 4);
  CHECK(three[2] == doctest::Approx(5 * pi / 12).epsilon(1e-15));
  CHECK_THROWS_AS(mixing_angles(0), std::invalid_argument);
  CHECK_THROWS_AS(p2_max_bound(0), std::invalid_argument);
}

TEST_CASE("mixing_angles are anagram-symmetric") {
  for (int n = 1; n <= 64; ++n) {
    const auto a = mixing_angles(n);
    for (int k = 0; 2 * (k + 1) <= n; ++k) CHECK(a[n - 1 - k] == pi / 2 - a[k]);
    for (int k = 0; k < n; ++k) {
      CHECK(std::abs(a[n - 1 - k] - (pi / 2 - a[k])) < 1e-15);
      CHECK(std::abs(a[k] - (2 * k + 1) * pi / (4 * n)) < 1e-15);
    }
  }
}

TEST_CASE("cascade examples") {
  SUBCASE("optimal schedules transfer completely") {
    for (int n = 1; n <= 10; ++n) {
      const auto u = cascade(mixing_angles(n), 2 * pi);
      CHECK(std::abs(std::norm(u(2, 0)) - 1.0) < 1e-12);
      CHECK(std::abs(u(1, 0)) < 1e-12);
    }
  }
  SUBCASE("single factor") {
    CHECK(max_diff(cascade(std::vector<double>{pi / 4}, 2 * pi), single_pair_propagator(pi / 4, 2 * pi)) == 0.0);
  }
  SUBCASE("two pairs, hand product of the {1,3} reflections") {
    // [[cos 2a, -sin 2a], [-sin 2a, -cos 2a]] at a = 3pi/8 times the same at a = pi/8.
    const auto u = cascade(std::vector<double>{pi / 8, 3 * pi / 8}, 2 * pi);
    CHECK(max_diff(u, matrix({{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}})) < 1e-15);
  }
  SUBCASE("order is right to left") {
    const std::vector<double> a{0.2, 0.9};
    const auto expected = single_pair_propagator(0.9, 2.5) * single_pair_propagator(0.2, 2.5);
    CHECK(max_diff(cascade(a, 2.5), expected) < 1e-15);
  }
  CHECK_THROWS_AS(cascade(std::vector<double>{}, 2 * pi), std::invalid_argument);
}

TEST_CASE("p2_max_bound examples") {
  CHECK(p2_max_bound(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(p2_max_bound(2) - 0.14645) < 5e-6);
  CHECK(std::abs(p2_max_bound(8) - 0.00960) < 1e-5);
  CHECK(p2_max_bound(8) < 0.01);
}

TEST_CASE("propagator properties over sampled angles and areas") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0, pi / 2);
  std::uniform_real_distribution<double> area(0, 4 * pi);
  for (int i = 0; i < 2000; ++i) {
    const double theta = angle(rng);
    const double a = area(rng);
    const auto u = single_pair_propagator(theta, a);
    CHECK(unitarity_defect(u) < 1e-12);
    const auto direct = single_pair_final_populations(theta, a);
    const auto via_matrix = state_populations(u * ground_state());
    CHECK((direct - via_matrix).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(direct.sum() - 1.0) < 1e-12);
    CHECK(std::abs(single_pair_propagator(theta, 2 * pi)(1, 0)) < 1e-15);
  }
}

TEST_CASE("partial cascade states follow the product") {
  const auto angles = mixing_angles(5);
  const auto states = partial_cascade_states<double>(angles, 2 * pi);
  REQUIRE(states.size() == 5);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::vector<double> head(angles.begin(), angles.begin() + static_cast<long>(k) + 1);
    CHECK((states[k] - cascade(head, 2 * pi) * ground_state()).cwiseAbs().maxCoeff() < 1e-15);
  }
  // Stepwise transfer: P3 increases after every pair.
  for (std::size_t k = 1; k < states.size(); ++k) CHECK(std::norm(states[k](2)) > std::norm(states[k - 1](2)));
}

TEST_CASE("p2 bound scales as 1/N^2") {
  for (int n = 16; n <= 1024; n *= 2) {
    const double scaled = n * n * p2_max_bound(n);
    CHECK(std::abs(scaled / (pi * pi / 16) - 1.0) < 0.01);
  }
}

TEST_CASE("long double instantiation agrees with double") {
  const auto ud = cascade(mixing_angles(4), 2 * pi);
  const auto ul = cascade(mixing_angles<long double>(4), 2 * std::numbers::pi_v<long double>);
  CHECK((ud - ul.cast<Complexd>()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(unitarity_defect(ul) < 1e-17L);
}
