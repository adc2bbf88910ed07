#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pauli2d/config.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/fields.hpp"

using namespace pauli2d;

namespace {

FieldDescriptor dog() {
  return FieldDescriptor::linear_combination(
      {{1.0, FieldDescriptor::gaussian(1, 1)}, {-1.0, FieldDescriptor::gaussian(0.25, 2)}});
}

}  // namespace

TEST_CASE("pointwise values") {
  const auto g = FieldDescriptor::gaussian(1, 1);
  CHECK(evaluate(g, {0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate(g, {2 * std::cos(0.3), 2 * std::sin(0.3)}) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(evaluate(dog(), {0, 0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(evaluate(FieldDescriptor::bump(2, 1), {1.0, 0.0}) == 0.0);
  CHECK(evaluate(FieldDescriptor::power_tail(1, 1, 1), {1, 0}) ==
        doctest::Approx(std::pow(2.0, -1.5)));
  // centred components are translated copies
  const auto c = FieldDescriptor::gaussian(1, 1, {3, -1});
  CHECK(evaluate(c, {3.5, -1.2}) == doctest::Approx(evaluate(g, {0.5, -0.2})));
}

TEST_CASE("analytic flux against a radial quadrature oracle") {
  CHECK(*flux(FieldDescriptor::gaussian(1, 1)) ==
        doctest::Approx(oracle::radial_flux([](double r) { return std::exp(-r * r / 2); })));
  CHECK(*flux(FieldDescriptor::gaussian(1, 1)) == doctest::Approx(1.0));
  CHECK(*flux(FieldDescriptor::bump(3, 2)) ==
        doctest::Approx(oracle::radial_flux([](double r) {
          double v = 1 - r * r / 4;
          return r < 2 ? 3 * v * v * v : 0.0;
        })).epsilon(1e-9));
  CHECK(*flux(FieldDescriptor::power_tail(1, 1, 1)) ==
        doctest::Approx(oracle::radial_flux([](double r) { return std::pow(1 + r * r, -1.5); }))
            .epsilon(1e-9));
  CHECK(*flux(FieldDescriptor::power_tail(2, 1.5, 0.5)) ==
        doctest::Approx(oracle::radial_flux([](double r) {
          return 2 * std::pow(1 + r * r / 2.25, -1.25);
        })).epsilon(1e-6));
  CHECK(std::abs(*flux(dog())) < 1e-15);
}

TEST_CASE("quadrature flux matches analytic flux on every closed-form family") {
  const std::vector<FieldDescriptor> fields{
      FieldDescriptor::gaussian(1, 1),
      FieldDescriptor::gaussian(2.5, 1, {1, 2}),
      FieldDescriptor::bump(2, 2),
      FieldDescriptor::power_tail(1, 1, 1),
      FieldDescriptor::power_tail(1, 2, 0.5),
      FieldDescriptor::angular_power_tail(1, 1, 1, 0),
      FieldDescriptor::angular_power_tail(1, 1, 1, 2),
      dog()};
  for (const auto& f : fields) {
    const auto a = flux(f);
    REQUIRE(a.has_value());
    const auto q = quadrature_flux(f);
    CHECK(std::abs(q.value - *a) <= 1e-6 * std::max(1.0, std::abs(*a)));
    CHECK(q.error < 1e-6);
  }
}

TEST_CASE("linear combination flux is the weighted sum") {
  const auto a = FieldDescriptor::gaussian(1, 1), b = FieldDescriptor::power_tail(1, 1, 1);
  const auto c = FieldDescriptor::linear_combination({{2.0, a}, {-0.5, b}});
  CHECK(*flux(c) == doctest::Approx(2.0 * *flux(a) - 0.5 * *flux(b)));
  CHECK(quadrature_flux(c).value == doctest::Approx(*flux(c)).epsilon(1e-8));
}

TEST_CASE("flux in a box approaches the total flux") {
  const auto g = FieldDescriptor::gaussian(1, 1);
  CHECK(flux_in_box(g, 10) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(flux_in_box(g, 1) < flux_in_box(g, 2));
}

TEST_CASE("decay envelope holds") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 1);
  const std::vector<FieldDescriptor> fields{
      FieldDescriptor::gaussian(1, 1), FieldDescriptor::gaussian(-2, 3, {4, 0}),
      FieldDescriptor::bump(2, 2), FieldDescriptor::power_tail(1, 1, 1),
      FieldDescriptor::angular_power_tail(1, 2, 0.5, 3), dog()};
  for (const auto& f : fields) {
    const double d = f.decay_exponent(), C = f.decay_constant();
    for (int s = 0; s < 2000; ++s) {
      const double r = std::pow(1000.0, u(rng)) - 1.0, t = 2 * M_PI * u(rng);
      const double b = std::abs(f(r * std::cos(t), r * std::sin(t)));
      CHECK(std::isfinite(b));
      CHECK(b <= C * std::pow(1 + r, -2 - d) * (1 + 1e-12));
    }
  }
}

TEST_CASE("sample_to_grid symmetries") {
  const GridSpec g{1.0, 4};
  const auto s = sample_to_grid(FieldDescriptor::gaussian(1, 1), g);
  REQUIRE(s.values.size() == 16);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      CHECK(s.values[g.index(i, j)] == doctest::Approx(s.values[g.index(3 - i, 3 - j)]));
  const auto z = sample_to_grid(FieldDescriptor::gaussian(0, 1), g);
  for (double v : z.values) CHECK(v == 0.0);
  const GridSpec g8{3.0, 8};
  const auto a = sample_to_grid(FieldDescriptor::angular_power_tail(1, 1, 1, 1), g8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i)
      CHECK(a.values[g8.index(i, j)] == doctest::Approx(-a.values[g8.index(7 - i, 7 - j)]));
}

TEST_CASE("invalid parameters are configuration errors") {
  CHECK_THROWS_AS(FieldDescriptor::gaussian(1, 0), ConfigError);
  CHECK_THROWS_AS(FieldDescriptor::bump(1, -1), ConfigError);
  CHECK_THROWS_AS(FieldDescriptor::power_tail(1, 1, 0), ConfigError);
  CHECK_THROWS_AS(FieldDescriptor::angular_power_tail(1, 1, 1, -1), ConfigError);
  CHECK_THROWS_AS(FieldDescriptor::gaussian(std::nan(""), 1), ConfigError);
  CHECK_THROWS_AS(FieldDescriptor::linear_combination({}), ConfigError);
}

TEST_CASE("JSON descriptors") {
  const Json j = Json::parse(R"({"kind": "linear_combination", "terms": [
      {"weight": 1, "field": {"kind": "gaussian", "params": {"B0": 1, "sigma": 1}}},
      {"weight": -1, "field": {"kind": "gaussian", "params": {"B0": 0.25, "sigma": 2}}}]})");
  const auto f = field_from_json(j);
  CHECK(evaluate(f, {0, 0}) == doctest::Approx(0.75));
  const auto back = field_from_json(field_to_json(f));
  CHECK(evaluate(back, {1.3, -0.4}) == evaluate(f, {1.3, -0.4}));

  CHECK_THROWS_AS(field_from_json(Json::parse(
                      R"({"kind": "gaussian", "params": {"B0": 1, "sigma": 1, "colour": 2}})")),
                  ConfigError);
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"kind": "gaussian", "params": {"B0": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"kind": "solenoid", "params": {}})")),
                  ConfigError);
  CHECK_THROWS_AS(
      field_from_json(Json::parse(R"({"kind": "power_tail", "params": {"B0": 1, "sigma": 1}})")),
      ConfigError);
  CHECK_THROWS_AS(field_from_json(Json::parse(
                      R"({"kind": "gaussian", "params": {"B0": 1, "sigma": -1}})")),
                  ConfigError);
}
