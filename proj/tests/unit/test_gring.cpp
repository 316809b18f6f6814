#include "doctest.h"

#include <random>

#include "galmod/error.hpp"
#include "galmod/gring.hpp"

using namespace galmod;

namespace {

GroupRingElement random_element(const RingParams &params, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::int64_t> d(0, params.p() - 1);
  std::vector<std::int64_t> c(params.order());
  for (auto &x : c)
    x = d(rng);
  return GroupRingElement(params, c);
}

// every element of F_p[G_n] for tiny p^n
std::vector<GroupRingElement> all_elements(const RingParams &params) {
  std::vector<GroupRingElement> out;
  std::uint64_t total = 1;
  for (std::uint32_t k = 0; k < params.order(); ++k)
    total *= params.p();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<std::int64_t> c(params.order());
    std::uint64_t rest = idx;
    for (auto &x : c) {
      x = static_cast<std::int64_t>(rest % params.p());
      rest /= params.p();
    }
    out.emplace_back(params, c);
  }
  return out;
}

} // namespace

TEST_CASE("ring parameters are validated") {
  CHECK_THROWS_AS(RingParams(2, 1), ParamError);
  CHECK_THROWS_AS(RingParams(9, 1), ParamError);
  CHECK_THROWS_AS(RingParams(3, 0), ParamError);
  CHECK_THROWS_AS(RingParams(3, 20), ParamError);
  CHECK(RingParams(3, 19).order() == 1162261467u);
  CHECK(RingParams(5, 2).order() == 25u);
}

TEST_CASE("addition examples") {
  const RingParams r(3, 1);
  const GroupRingElement f(r, {1, 1, 0}), g(r, {2, 1, 0});
  CHECK(add(f, g) == GroupRingElement(r, {0, 2, 0}));
  CHECK(f + GroupRingElement::zero(r) == f);
  CHECK((f + (-f)).is_zero());
}

TEST_CASE("multiplication examples") {
  const RingParams r(3, 1);
  const auto t = GroupRingElement::t(r);
  CHECK(mul(t, t) == GroupRingElement::t_power(r, 2));
  CHECK(mul(GroupRingElement::t_power(r, 2), t).is_zero());
  const auto sigma = GroupRingElement::sigma_power(r, 1);
  CHECK(sigma.pow(r.order()) == GroupRingElement::one(r));
  CHECK_THROWS_AS(mul(t, GroupRingElement::t(RingParams(5, 1))), ParamError);
}

TEST_CASE("sigma has exact order p^n") {
  for (auto [p, n] : {std::pair{3u, 1u}, {3u, 2u}, {5u, 1u}, {3u, 3u}}) {
    const RingParams r(p, n);
    const auto sigma = GroupRingElement::one(r) + GroupRingElement::t(r);
    auto cur = sigma;
    for (std::uint32_t m = 1; m < r.order(); ++m) {
      CHECK_FALSE(cur == GroupRingElement::one(r));
      cur = cur * sigma;
    }
    CHECK(cur == GroupRingElement::one(r));
  }
}

TEST_CASE("valuation examples") {
  CHECK(valuation(GroupRingElement::zero(RingParams(3, 1))).is_inf());
  CHECK(valuation(GroupRingElement::t_power(RingParams(3, 1), 2)) == LValue(2));
  const RingParams r(3, 2);
  CHECK(valuation(GroupRingElement::t(r) + GroupRingElement::t_power(r, 3)) == LValue(1));
}

TEST_CASE("lstar examples") {
  const RingParams r(3, 1);
  CHECK(lstar(LValue(2), LValue(2), r).is_inf());
  CHECK(lstar(LValue(0), LValue(2), r) == LValue(2));
  CHECK(lstar(LValue::inf(), LValue(0), r).is_inf());
  CHECK(lstar(LValue(1), LValue(1), r) == LValue(2));
  CHECK(LValue(7) < LValue::inf());
  CHECK(LValue::inf().to_string() == "inf");
}

TEST_CASE("units") {
  const RingParams r(3, 1);
  CHECK(is_unit(GroupRingElement::one(r) + GroupRingElement::t(r)));
  CHECK_FALSE(is_unit(GroupRingElement::t(r)));
  const std::vector<std::int64_t> norm{1, 1, 1};
  CHECK_FALSE(is_unit(from_sigma_basis(r, norm)));
  CHECK_THROWS_AS(unit_inverse(GroupRingElement::t(r)), DomainError);
}

TEST_CASE("sigma basis conversion") {
  const RingParams r(3, 1);
  const std::vector<std::int64_t> s{0, 1, 0};
  CHECK(from_sigma_basis(r, s) == GroupRingElement(r, {1, 1}));
  const std::vector<std::int64_t> norm{1, 1, 1};
  CHECK(from_sigma_basis(r, norm) == GroupRingElement::t_power(r, 2));
  const std::vector<std::int64_t> bad{1, 1};
  CHECK_THROWS_AS(from_sigma_basis(r, bad), ParamError);

  std::mt19937_64 rng(11);
  for (auto [p, n] : {std::pair{3u, 2u}, {5u, 1u}, {7u, 1u}}) {
    const RingParams q(p, n);
    for (int trial = 0; trial < 50; ++trial) {
      const auto f = random_element(q, rng);
      const auto sig = to_sigma_basis(f);
      const std::vector<std::int64_t> back(sig.begin(), sig.end());
      CHECK(from_sigma_basis(q, back) == f);
    }
  }
}

TEST_CASE("valuation is multiplicative and ultrametric, exhaustively at p=3, n=1") {
  const RingParams r(3, 1);
  const auto all = all_elements(r);
  REQUIRE(all.size() == 27);
  for (const auto &f : all)
    for (const auto &g : all) {
      CHECK(valuation(f * g) == lstar(valuation(f), valuation(g), r));
      CHECK(valuation(f + g) >= std::min(valuation(f), valuation(g)));
    }
}

TEST_CASE("local ring: nonunits form an ideal, units invert") {
  const RingParams r(3, 1);
  const auto all = all_elements(r);
  for (const auto &f : all) {
    CHECK(is_unit(f) == (valuation(f) == LValue(0)));
    if (is_unit(f))
      CHECK(f * unit_inverse(f) == GroupRingElement::one(r));
    if (!is_unit(f))
      for (const auto &g : all) {
        CHECK_FALSE(is_unit(f * g));
        if (!is_unit(g))
          CHECK_FALSE(is_unit(f + g));
      }
  }
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(3);
  for (auto [p, n] : {std::pair{3u, 2u}, {5u, 1u}, {5u, 2u}}) {
    const RingParams r(p, n);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = random_element(r, rng), b = random_element(r, rng),
                 c = random_element(r, rng);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
    }
  }
}

TEST_CASE("sigma powers multiply like exponents") {
  const RingParams r(3, 2);
  for (int i = -10; i < 10; ++i)
    for (int j = -10; j < 10; ++j)
      CHECK(GroupRingElement::sigma_power(r, i) * GroupRingElement::sigma_power(r, j) ==
            GroupRingElement::sigma_power(r, i + j));
}
