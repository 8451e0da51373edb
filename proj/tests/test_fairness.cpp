#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fairtt/fairness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fairtt;
using support::error_of;
using V = std::vector<int>;

namespace {

constexpr double kDelta = 1e-3;

MMOrder cmp(const V& x, const V& y) { return mm_compare(x, y); }

V random_vector(std::mt19937& gen, std::size_t n) {
  std::uniform_int_distribution<int> value(0, 20);
  V v(n);
  for (auto& x : v) x = value(gen);
  return v;
}

V shuffled(V v, std::mt19937& gen) {
  std::shuffle(v.begin(), v.end(), gen);
  return v;
}

}  // namespace

TEST_CASE("mm_compare examples") {
  CHECK(cmp({0, 5}, {0, 7}) == MMOrder::Better);
  CHECK(cmp({5, 0, 3}, {3, 5, 0}) == MMOrder::Equal);
  CHECK(cmp(support::rle("4^20,2^11,1^5,0^16"), support::rle("17,15,14,13,11,10,9^2,5^19,2^2,0^23")) ==
        MMOrder::Better);
  CHECK(cmp({0, 7}, {0, 5}) == MMOrder::Worse);
  CHECK(error_of([] { cmp({1, 2}, {1}); }) == ErrorCode::LengthMismatch);
  CHECK(error_of([] { cmp({}, {}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("jain index") {
  CHECK(jain_index(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(1.0));
  CHECK(jain_index(std::vector<double>{1, 0, 0, 0}) == doctest::Approx(0.25));
  CHECK(jain_index(std::span<const int>(support::rle("0^2,5^12"))) == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  CHECK(error_of([] { jain_index(std::vector<double>{0, 0, 0}); }) == ErrorCode::AllZero);
  CHECK(error_of([] { jain_index(std::vector<double>{}); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("delta_e_lex worked values") {
  CHECK(delta_e_lex(V{5, 0}, V{7, 0}) == doctest::Approx(1.0));
  CHECK(delta_e_lex(V{5, 3, 0, 0}, V{5, 4, 0, 0}) == doctest::Approx(0.75));
  CHECK(delta_e_lex(V{5, 0}, V{5, 2}) == doctest::Approx(0.5));
  CHECK(delta_e_lex(V{5, 3, 0, 0}, V{5, 4, 0, 0}) == doctest::Approx(oracle::delta_lex({5, 3, 0, 0}, {5, 4, 0, 0})));
}

TEST_CASE("delta_e_cw worked values") {
  CHECK(delta_e_cw(V{0, 5}, V{0, 7}, kDelta) == doctest::Approx(7.001 / 5.001 - 1.0).epsilon(1e-12));
  CHECK(delta_e_cw(V{0, 5}, V{0, 7}, kDelta) == doctest::Approx(0.39992).epsilon(1e-4));
  CHECK(delta_e_cw(V{0, 5}, V{2, 5}, kDelta) == doctest::Approx(2000.0).epsilon(1e-9));
  CHECK(delta_e_cw(V{5, 3}, V{5, 4}, kDelta) == doctest::Approx(1000.0).epsilon(1e-9));
  for (auto [x, y] : {std::pair<V, V>{{0, 5}, {0, 7}}, {{0, 5}, {2, 5}}, {{5, 3}, {5, 4}}})
    CHECK(delta_e_cw(x, y, kDelta) == doctest::Approx(oracle::delta_cw(x, y, kDelta)).epsilon(1e-12));
}

TEST_CASE("delta_e_ps worked values") {
  CHECK(delta_e_ps(V{5, 0}, V{7, 0}, kDelta) == doctest::Approx(7.001 / 5.001 - 1.0).epsilon(1e-12));
  CHECK(delta_e_ps(V{5, 3}, V{5, 4}, kDelta) == doctest::Approx(3.002 / 2.002 - 1.0).epsilon(1e-12));
  // m = 0; prefix sums (5,7,7) against (5,8,8); the i = 2 ratio dominates.
  CHECK(delta_e_ps(V{5, 2, 0}, V{5, 3, 0}, kDelta) == doctest::Approx(8.002 / 7.002 - 1.0).epsilon(1e-12));
  for (auto [x, y] : {std::pair<V, V>{{5, 0}, {7, 0}}, {{5, 3}, {5, 4}}, {{5, 2, 0}, {5, 3, 0}}})
    CHECK(delta_e_ps(x, y, kDelta) == doctest::Approx(oracle::delta_ps(x, y, kDelta)).epsilon(1e-12));
}

TEST_CASE("energy differences reject candidates that are not worse") {
  for (auto [x, y] : {std::pair<V, V>{{0, 7}, {0, 5}}, {{3, 5}, {5, 3}}}) {
    CHECK(error_of([&] { delta_e_lex(x, y); }) == ErrorCode::NotWorse);
    CHECK(error_of([&] { delta_e_cw(x, y, kDelta); }) == ErrorCode::NotWorse);
    CHECK(error_of([&] { delta_e_ps(x, y, kDelta); }) == ErrorCode::NotWorse);
  }
}

TEST_CASE("energy measure names") {
  CHECK(parse_energy_measure("cw") == EnergyMeasure::Cw);
  CHECK(parse_energy_measure("lex") == EnergyMeasure::Lex);
  CHECK(parse_energy_measure("ps") == EnergyMeasure::Ps);
  CHECK(error_of([] { parse_energy_measure("gini"); }) == ErrorCode::InvalidArgument);
  CHECK(energy_difference(V{0, 5}, V{0, 7}, {EnergyMeasure::Lex, kDelta}) == doctest::Approx(1.0));
}

TEST_CASE("fairness properties on random vectors") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<std::size_t> length(1, 8);
  int worse_pairs = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const std::size_t n = length(gen);
    const V x = random_vector(gen, n);
    const V y = random_vector(gen, n);
    const MMOrder o = cmp(x, y);

    REQUIRE(static_cast<int>(o) - 1 == oracle::mm(x, y));
    REQUIRE(cmp(shuffled(x, gen), shuffled(y, gen)) == o);
    REQUIRE(cmp(y, x) == (o == MMOrder::Better ? MMOrder::Worse : o == MMOrder::Worse ? MMOrder::Better : o));
    REQUIRE((o == MMOrder::Equal) == (sorted_descending(x) == sorted_descending(y)));

    // Pareto consistency: raise at least one entry of the sorted vector.
    V raised = sorted_descending(x);
    const std::size_t bumps = std::uniform_int_distribution<std::size_t>(1, n)(gen);
    for (std::size_t b = 0; b < bumps; ++b) raised[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)] += 1;
    REQUIRE(cmp(x, shuffled(raised, gen)) == MMOrder::Better);

    if (o == MMOrder::Better) {
      ++worse_pairs;
      const double lex = delta_e_lex(x, y);
      const double cw = delta_e_cw(x, y, kDelta);
      const double ps = delta_e_ps(x, y, kDelta);
      REQUIRE(cw > 0.0);
      REQUIRE(ps > 0.0);
      const double steps = lex * static_cast<double>(n);
      REQUIRE(std::abs(steps - std::round(steps)) < 1e-9);
      REQUIRE(std::round(steps) >= 1.0);
      REQUIRE(std::round(steps) <= static_cast<double>(n));
      REQUIRE(lex == doctest::Approx(oracle::delta_lex(x, y)));
      REQUIRE(cw == doctest::Approx(oracle::delta_cw(x, y, kDelta)).epsilon(1e-10));
      REQUIRE(ps == doctest::Approx(oracle::delta_ps(x, y, kDelta)).epsilon(1e-10));
      REQUIRE(delta_e_cw(shuffled(x, gen), shuffled(y, gen), kDelta) == cw);
      REQUIRE(delta_e_ps(shuffled(x, gen), shuffled(y, gen), kDelta) == ps);
      REQUIRE(delta_e_lex(shuffled(x, gen), shuffled(y, gen)) == lex);
    }

    if (std::any_of(x.begin(), x.end(), [](int v) { return v != 0; })) {
      const double j = jain_index(std::span<const int>(x));
      REQUIRE(j >= 1.0 / static_cast<double>(n) - 1e-12);
      REQUIRE(j <= 1.0 + 1e-12);
      std::vector<double> scaled;
      const double c = std::uniform_real_distribution<double>(0.01, 100.0)(gen);
      for (int v : x) scaled.push_back(c * v);
      REQUIRE(jain_index(scaled) == doctest::Approx(j).epsilon(1e-12));
      std::vector<double> as_double(x.begin(), x.end());
      REQUIRE(j == doctest::Approx(oracle::jain(as_double)).epsilon(1e-12));
      REQUIRE(jain_index(std::span<const int>(shuffled(x, gen))) == doctest::Approx(j).epsilon(1e-12));
    }
  }
  CHECK(worse_pairs > 5000);
}
