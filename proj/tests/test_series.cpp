#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ptlz/series.hpp"

using namespace ptlz;

namespace {

TruncatedSeries random_series(std::mt19937& rng, Var v, int order) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s(v, order);
  for (int k = 0; k <= order; ++k) s.set_coeff(k, {u(rng), u(rng)});
  return s;
}

double dist(const TruncatedSeries& a, const TruncatedSeries& b) {
  double m = 0;
  int n = std::max(a.order(), b.order());
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
  return m;
}

}  // namespace

TEST_CASE("product of (1+t) and (1-t)") {
  auto a = TruncatedSeries::constant(Var::t, 1.0, 8) +
           TruncatedSeries::monomial(Var::t, 1.0, 1, 8);
  auto b = TruncatedSeries::constant(Var::t, 1.0, 8) -
           TruncatedSeries::monomial(Var::t, 1.0, 1, 8);
  auto p = a * b;
  CHECK(p.coeff(0) == cplx{1.0, 0.0});
  CHECK(p.coeff(1) == cplx{0.0, 0.0});
  CHECK(p.coeff(2) == cplx{-1.0, 0.0});
  for (int k = 3; k <= p.order(); ++k) CHECK(std::abs(p.coeff(k)) == 0.0);
}

TEST_CASE("variable tags do not mix") {
  TruncatedSeries a(Var::t, 4), b(Var::z, 4);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("binary ops truncate to the smaller order") {
  TruncatedSeries a(Var::t, 9), b(Var::t, 3);
  CHECK((a + b).order() == 3);
  CHECK((a * b).order() == 3);
}

TEST_CASE("ring axioms on random series") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_series(rng, Var::t, 24);
    auto b = random_series(rng, Var::t, 24);
    auto c = random_series(rng, Var::t, 24);
    CHECK(dist(a + b, b + a) == 0.0);
    CHECK(dist(a * b, b * a) < 1e-14);
    CHECK(dist((a + b) + c, a + (b + c)) < 1e-15);
    CHECK(dist((a * b) * c, a * (b * c)) < 1e-13);
    CHECK(dist(a * (b + c), a * b + a * c) < 1e-13);
  }
}

TEST_CASE("Leibniz rule for the Cauchy product") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_series(rng, Var::z, 20);
    auto b = random_series(rng, Var::z, 20);
    auto lhs = (a * b).differentiate();
    auto rhs = a.differentiate() * b + a * b.differentiate();
    CHECK(dist(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("differentiate undoes integrate") {
  std::mt19937 rng(31);
  auto s = random_series(rng, Var::t, 40);
  CHECK(dist(s.integrate().differentiate(), s) < 1e-15);
}

TEST_CASE("integrate 1 + 2t + 3t^2") {
  TruncatedSeries s(Var::t, 2);
  s.set_coeff(0, 1.0);
  s.set_coeff(1, 2.0);
  s.set_coeff(2, 3.0);
  auto q = s.integrate();
  CHECK(q.order() == 3);
  CHECK(q.coeff(0) == cplx{0.0, 0.0});
  CHECK(q.coeff(1) == cplx{1.0, 0.0});
  CHECK(q.coeff(2) == cplx{1.0, 0.0});
  CHECK(q.coeff(3) == cplx{1.0, 0.0});
}

TEST_CASE("geometric series evaluation at 0.5") {
  TruncatedSeries s(Var::t, 60);
  for (int k = 0; k <= 60; ++k) s.set_coeff(k, 1.0);
  auto ev = s.evaluate(0.5);
  CHECK(std::abs(ev.value - 2.0) < 1e-12);
  CHECK(ev.within_radius);
}

TEST_CASE("exp series tail estimate and radius flag") {
  TruncatedSeries s(Var::t, 20);
  double f = 1.0;
  for (int k = 0; k <= 20; ++k) {
    s.set_coeff(k, 1.0 / f);
    f *= (k + 1);
  }
  auto ev = s.evaluate(1.0, 2.0);
  CHECK(std::abs(ev.value - std::exp(1.0)) < 1e-15);
  CHECK(ev.tail == doctest::Approx(1.0 / 2.43290200817664e18).epsilon(1e-10));
  CHECK(ev.within_radius);
  auto out = s.evaluate(3.0, 2.0);
  CHECK_FALSE(out.within_radius);
}

TEST_CASE("dump format is one 'k re im' line per coefficient") {
  TruncatedSeries s(Var::t, 2);
  s.set_coeff(0, {1.0, 0.0});
  s.set_coeff(1, {0.0, -0.5});
  s.set_coeff(2, {0.25, 0.0});
  std::ostringstream os;
  s.dump(os);
  CHECK(os.str() == "0 1 0\n1 0 -0.5\n2 0.25 0\n");
}

TEST_CASE("scaling") {
  auto s = TruncatedSeries::monomial(Var::t, {2.0, 0.0}, 3, 5);
  auto r = cplx{0.0, 1.0} * s;
  CHECK(r.coeff(3) == cplx{0.0, 2.0});
}
