#include "doctest.h"

#include <random>

#include "../support/oracle.hpp"
#include "galmod/error.hpp"
#include "galmod/jmodel.hpp"

using namespace galmod;

namespace {

const ChiLevel kNegInf = std::nullopt;

JModel free_rank2_line() { return JModel(RingParams(3, 1), kNegInf, {0, 1}); }

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--)
    r *= b;
  return r;
}

} // namespace

TEST_CASE("model layout") {
  const JModel m(RingParams(3, 2), 0u, {1, 2, 1});
  CHECK(m.chi_length() == 2);
  CHECK(m.shape().block_count() == 5);
  CHECK(m.shape().block_length(m.y_block(1, 1)) == 3);
  CHECK(m.shape().block_length(m.y_block(2, 0)) == 9);
  CHECK_THROWS_AS(m.y_block(0, 1), ParamError);
  CHECK(chi_level_to_string(kNegInf) == "neg_inf");
  CHECK(chi_level_to_string(ChiLevel{1}) == "1");
  CHECK_THROWS_AS(JModel(RingParams(3, 1), kNegInf, {1}), ParamError);
  CHECK_THROWS(JModel(RingParams(3, 1), 1u, {0, 0}));
}

TEST_CASE("validate") {
  const auto m = free_rank2_line();
  CHECK(validate(m).ok);

  const JModel y0(RingParams(3, 1), kNegInf, {1, 1});
  const auto bad = validate(y0.with_functional_value(y0.shape().offset(y0.y_block(0, 0)), 1));
  CHECK_FALSE(bad.ok);
  CHECK(bad.violation == "Y_i ⊆ ker e for i<n");

  // s = 0 gives l(chi) = 2; t^2 alpha has length 1 < 2
  const JModel s0(RingParams(3, 1), 0u, {0, 1});
  CHECK(validate(s0).ok);
  const auto min = validate(s0.with_tail(0, 2, 1));
  CHECK_FALSE(min.ok);
  CHECK(min.violation == "χ-minimality");

  CHECK(validate(m.with_functional_value(0, 2)).violation == "normalization");
  CHECK(validate(s0.with_functional_value(1, 1)).violation == "e vanishes on (sigma-1)<chi>");
  CHECK_THROWS_AS(m.with_functional_value(m.shape().offset(1), 1), ParamError);
  CHECK_THROWS_AS(require_valid(s0.with_tail(0, 2, 1)), ModelInconsistency);
}

TEST_CASE("index") {
  const JModel m(RingParams(3, 1), kNegInf, {2, 1});
  CHECK(index(m, m.chi()) == 1);
  for (std::uint32_t c = 0; c < 2; ++c)
    CHECK(index(m, ModuleElement::generator(m.shape(), m.y_block(0, c))) == 0);
  CHECK_THROWS_AS(index(m, ModuleElement::generator(m.shape(), m.y_block(1, 0))), DomainError);
  const auto a = ModuleElement::basis(m.shape(), m.y_block(1, 0), 1);
  CHECK(index(m, a) == 1);
  CHECK(index(m, a + m.chi()) == 2);
}

TEST_CASE("solution counts on the free-rank-2 line model") {
  const auto m = free_rank2_line();
  CHECK(count_solutions(m, 2, ExtFlavor::Split).count == 1);
  CHECK(count_solutions(m, 2, ExtFlavor::Bullet).count == 2);
  const auto top = count_solutions(m, 3, ExtFlavor::Split);
  CHECK(top.raw == 54);
  CHECK(top.count == 3);
  CHECK_THROWS_AS(count_solutions(m, 3, ExtFlavor::Bullet), ParamError);
  CHECK_THROWS_AS(count_solutions(m, 0, ExtFlavor::Split), ParamError);
  CHECK_THROWS_AS(count_solutions(m, 2, ExtFlavor::Split, 80), GuardError);
}

TEST_CASE("census agrees with the brute-force tally on random models") {
  std::mt19937_64 rng(21);
  for (auto [p, n, bound] : {std::tuple{3u, 1u, 6561ull}, {3u, 2u, 6561ull}, {5u, 1u, 15625ull}}) {
    const RingParams r(p, n);
    for (int trial = 0; trial < 8; ++trial) {
      const JModel m = randomize_tail(random_model(r, bound, rng), rng);
      if (!validate(m).ok)
        continue;
      const auto c = census(m);
      const auto t = oracle::tally(m);
      CHECK(c.total == m.cardinality(bound));
      CHECK(c.full == t.at(r.order(), true));
      for (std::uint32_t l = 0; l < r.order(); ++l) {
        CHECK(c.zero[l] == t.at(l, true));
        CHECK(c.nonzero[l] == t.at(l, false));
      }
      for (std::uint32_t l = 1; l <= r.order(); ++l) {
        const auto g = oracle::generators_of_cyclic(p, l);
        const auto s = count_from_census(c, r, l, ExtFlavor::Split);
        const std::uint64_t raw = t.at(l, true);
        CHECK(s.raw == raw);
        CHECK(s.raw % g == 0);
        CHECK(s.count == raw / g);
        if (l < r.order())
          CHECK(count_from_census(c, r, l, ExtFlavor::Bullet).count == t.at(l, false) / g);
      }
    }
  }
}

TEST_CASE("nonzero index forces length at least l(chi)") {
  for (const JModel &m : {JModel(RingParams(3, 1), 0u, {1, 1}), JModel(RingParams(3, 2), 1u, {0, 0, 1}),
                          JModel(RingParams(5, 1), 0u, {0, 1}), JModel(RingParams(3, 2), 0u, {1, 0, 1})}) {
    REQUIRE(validate(m).ok);
    const auto t = oracle::tally(m);
    for (std::size_t i = 0; i < t.len.size(); ++i)
      if (t.e[i] > 0)
        CHECK(t.len[i] >= m.chi_length());
  }
}

TEST_CASE("kernel counts under the standard tail") {
  for (std::uint32_t p : {3u, 5u})
    for (std::uint32_t d0 = 0; d0 <= 8; ++d0)
      for (std::uint32_t d1 = 0; d0 + p * d1 <= 8; ++d1) {
        const JModel m(RingParams(p, 1), kNegInf, {d0, d1});
        const auto t = oracle::tally(m);
        const auto cum = kernel_length_counts(census(m));
        for (std::uint32_t l = 1; l + 1 <= p; ++l) {
          std::uint64_t brute = 0;
          for (std::uint32_t k = 0; k <= l; ++k)
            brute += t.at(k, true);
          CHECK(brute == ipow(p, d0 + l * d1));
          CHECK(cum[l] == brute);
        }
      }
}

TEST_CASE("length-two decomposition examples") {
  const auto a = verify_eq_5_2(JModel(RingParams(3, 1), kNegInf, {1, 1}));
  CHECK(a.equal);
  CHECK(a.chi_length == 1);
  const auto b = verify_eq_5_2(JModel(RingParams(3, 1), 0u, {1, 1}));
  CHECK(b.equal);
  CHECK(b.chi_length == 2);
  const auto c = verify_eq_5_2(JModel(RingParams(3, 1), 0u, {0, 0}));
  CHECK(c.equal);
  CHECK(c.lhs_size == 6);
  CHECK(c.rhs_size == 6);
  CHECK_THROWS_AS(verify_eq_5_2(JModel(RingParams(3, 2), kNegInf, {0, 0, 0})), ParamError);
}

TEST_CASE("length-two decomposition against an independent set construction") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const JModel m = randomize_tail(random_model(RingParams(3, 1), 6561, rng), rng);
    if (!validate(m).ok)
      continue;
    const auto t = oracle::tally(m);
    std::uint64_t lhs = 0;
    std::set<std::uint64_t> rhs;
    const auto &shape = m.shape();
    for (std::uint64_t i = 0; i < t.len.size(); ++i) {
      if (t.len[i] == 2 && t.e[i] > 0)
        ++lhs;
      const bool base = t.e[i] == 0 && (t.len[i] == 2 || (m.chi_length() == 2 && t.len[i] <= 1));
      if (base)
        for (fp::Residue c = 1; c < 3; ++c)
          rhs.insert((m.chi().scaled(c) + ModuleElement::from_index(shape, i)).index());
    }
    const auto r = verify_eq_5_2(m);
    CHECK(r.equal);
    CHECK(r.lhs_size == lhs);
    CHECK(r.rhs_size == rhs.size());
  }
}

TEST_CASE("chi and combination witnesses") {
  const JModel neg(RingParams(3, 1), kNegInf, {0, 1});
  const auto w = cor_3_6_witness(neg);
  CHECK(w.length == 1);
  CHECK(w.index != 0);
  const JModel s0(RingParams(3, 1), 0u, {1, 1});
  const auto w2 = cor_3_6_witness(s0);
  CHECK(w2.length == 2);
  CHECK(w2.index == 1);

  const auto gj = ModuleElement::basis(neg.shape(), 1, 1);
  REQUIRE(length(gj) == 2);
  REQUIRE(index(neg, gj) == 1);
  const auto c = cor_3_7_witness(neg, neg.chi(), gj);
  CHECK(c.c == 2);
  CHECK(c.length == 2);
  CHECK(c.index == 0);
  CHECK_THROWS_AS(cor_3_7_witness(neg, gj, neg.chi()), HypothesisError);
  CHECK_THROWS_AS(cor_3_7_witness(neg, neg.zero(), gj), HypothesisError);
}

TEST_CASE("realize case names") {
  for (auto c : {RealizeCase::Split2Split, RealizeCase::Bullet2Split, RealizeCase::Bullet2Bullet,
                 RealizeCase::Top, RealizeCase::Prop42})
    CHECK(parse_realize_case(to_string(c)) == c);
  CHECK(to_string(RealizeCase::Prop42) == "4.2");
  CHECK_THROWS_AS(parse_realize_case("4.3"), ParamError);
}

TEST_CASE("auto_realize examples") {
  const RingParams r(3, 2);
  const JModel m(r, kNegInf, {0, 0, 1});
  const std::size_t y = m.y_block(2, 0);

  // a length-4 kernel element of Y_2
  const auto g4 = ModuleElement::basis(m.shape(), y, 5);
  REQUIRE(length(g4) == 4);
  REQUIRE(index(m, g4) == 0);
  const auto a = auto_realize(m, RealizeCase::Split2Split, {g4});
  CHECK(a.witness_length == 5);
  CHECK(a.witness_index == fp::Residue{0});
  CHECK(a.predicates_ok());
  CHECK(a.agreement());

  // length 5, nontrivial index: t^4 alpha + t alpha has e = 1
  const auto g5 = ModuleElement::basis(m.shape(), y, 4) + ModuleElement::basis(m.shape(), y, 1);
  REQUIRE(length(g5) == 8);
  const auto b = auto_realize(m, RealizeCase::Bullet2Split, {g5});
  CHECK(b.witness_length == 8);
  CHECK(b.witness_index == fp::Residue{0});
  CHECK(b.agreement());
  const auto c = auto_realize(m, RealizeCase::Bullet2Bullet, {g5});
  CHECK(c.witness_length == 7);
  CHECK(c.witness_index != fp::Residue{0});
  CHECK(c.agreement());

  // n = 1 has no admissible length for the bullet cases
  const auto line = free_rank2_line();
  const auto top = ModuleElement::generator(line.shape(), 1);
  CHECK(realize_hypothesis_failure(line, RealizeCase::Bullet2Split, {top}).has_value());
  const auto two = ModuleElement::basis(line.shape(), 1, 1);
  CHECK(realize_hypothesis_failure(line, RealizeCase::Bullet2Split, {two}).has_value());
  CHECK_THROWS_AS(auto_realize(line, RealizeCase::Bullet2Split, {two}), HypothesisError);

  // top case: l(gamma) = p^{n-1} + 1 with k = 1
  const auto g4b = ModuleElement::basis(m.shape(), y, 5);
  const auto d = auto_realize(m, RealizeCase::Top, {g4b, 1});
  CHECK(d.target_length == 4);
  CHECK(d.witness_length == 4);
  CHECK(d.predicates_ok());
  const auto e = auto_realize(m, RealizeCase::Top, {g4b, 4});
  CHECK(e.witness_length == 7);
  CHECK(e.predicates_ok());

  // case 4.2 at level 1
  const auto f = auto_realize(m, RealizeCase::Prop42, {g4b, 3, 1});
  CHECK(f.target_length == 6);
  CHECK(f.predicates_ok());
  CHECK(realize_hypothesis_failure(m, RealizeCase::Prop42, {g4b, 7, 1}).has_value());
}

TEST_CASE("auto_realize agrees with the oracle on random inputs") {
  std::mt19937_64 rng(8);
  for (auto which : {RealizeCase::Split2Split, RealizeCase::Bullet2Split, RealizeCase::Bullet2Bullet,
                     RealizeCase::Top, RealizeCase::Prop42}) {
    int done = 0;
    for (int trial = 0; trial < 200 && done < 20; ++trial) {
      const bool five = trial % 3 == 0;
      const RingParams r = five ? RingParams(5, 1) : RingParams(3, 2);
      const JModel m = randomize_tail(random_model(r, five ? 78125 : 177147, rng), rng);
      if (!validate(m).ok)
        continue;
      const auto in = sample_realize_input(m, which, rng);
      if (!in)
        continue;
      const auto c = census(m);
      const auto res = auto_realize(m, which, *in, &c);
      CHECK(res.predicates_ok());
      CHECK(res.agreement());
      ++done;
    }
    CHECK(done > 0);
  }
}

TEST_CASE("two-step split counts for n = 1") {
  const auto a = theorem_5_5_check(JModel(RingParams(5, 1), kNegInf, {1, 1}), 3);
  CHECK(a.lhs == 5);
  CHECK(a.rhs == "5");
  CHECK(a.rhs_integral);
  CHECK(a.equal);
  CHECK(theorem_5_5_closed_form(5, 1, 1, 3) == std::uint64_t{5});

  const auto b = theorem_5_5_check(free_rank2_line(), 2);
  CHECK(b.lhs == 1);
  CHECK(b.equal);
  CHECK(b.nu_h == 1);

  for (std::uint32_t d1 = 0; d1 <= 1; ++d1) {
    const JModel m(RingParams(5, 1), kNegInf, {0, d1});
    const auto c2 = theorem_5_5_check(m, 2);
    CHECK(c2.rhs == std::to_string(c2.nu_h));
    for (std::uint32_t l = 2; l <= 4; ++l) {
      const auto r = theorem_5_5_check(m, l);
      CHECK(r.equal);
      CHECK(std::optional<std::uint64_t>(r.lhs) == theorem_5_5_closed_form(5, 0, d1, l));
    }
  }
  CHECK_THROWS_AS(theorem_5_5_check(JModel(RingParams(5, 1), kNegInf, {0, 1}), 5), ParamError);
}

TEST_CASE("kernel structure differs from the displayed one") {
  const auto k = kernel_structure(JModel(RingParams(5, 1), kNegInf, {1, 1}));
  CHECK(k.is_submodule);
  CHECK(k.dimension == 5);
  CHECK(k.blocks == std::vector<std::uint32_t>{4, 1});
  CHECK(k.displayed == std::vector<std::uint32_t>{3, 1});
  CHECK_FALSE(k.matches);
}

TEST_CASE("bullet to split count ratio") {
  const auto a = theorem_5_4_check(JModel(RingParams(5, 1), kNegInf, {0, 1}), 4);
  CHECK_FALSE(a.range_empty);
  CHECK(a.ratio_ok);
  CHECK(a.translation.equal);
  CHECK(a.bullet_count == 4 * a.split_count);
  CHECK(theorem_5_4_check(JModel(RingParams(3, 1), 0u, {1, 1}), 3).range_empty);
  const auto b = theorem_5_4_check(JModel(RingParams(5, 1), 0u, {1, 1}), 4);
  CHECK(b.ratio_ok);
  CHECK(b.translation.equal);
  CHECK(b.split_count > 0);
  CHECK_THROWS_AS(theorem_5_4_check(JModel(RingParams(5, 1), kNegInf, {0, 1}), 2), ParamError);
}

TEST_CASE("gaussian binomials and lines") {
  for (std::uint32_t n = 0; n <= 4; ++n) {
    const auto oracle_counts = oracle::subspace_counts(n, 3);
    for (std::uint32_t m = 0; m <= n; ++m)
      CHECK(gaussian_binomial(n, m, 3) == oracle_counts[m]);
  }
  CHECK(gaussian_binomial(4, 2, 3) == 130);
  for (std::uint32_t n = 1; n < 6; ++n)
    CHECK(gaussian_binomial(n, 1, 5) == (ipow(5, n) - 1) / 4);
  CHECK_THROWS_AS(gaussian_binomial(2, 3, 3), ParamError);

  const auto lines = enumerate_lines(2, 3);
  CHECK(lines.size() == 4);
  CHECK(enumerate_lines(1, 5).size() == 1);
  const auto l3 = enumerate_lines(3, 3);
  CHECK(l3.size() == 13);
  for (std::size_t a = 0; a < l3.size(); ++a)
    for (std::size_t b = a + 1; b < l3.size(); ++b) {
      bool proportional = false;
      for (std::uint32_t c = 1; c < 3; ++c) {
        bool same = true;
        for (std::size_t k = 0; k < 3; ++k)
          same = same && (l3[a][k] * c) % 3 == l3[b][k];
        proportional = proportional || same;
      }
      CHECK_FALSE(proportional);
    }
  CHECK_THROWS_AS(enumerate_lines(20, 3, 1000), GuardError);
}

TEST_CASE("field model presets") {
  const RingParams r(3, 1);
  const std::vector<std::vector<fp::Residue>> all{{1, 0}, {0, 1}};
  const JModel line = free_rank2_line();
  const auto fr = FieldModel::uniform(3, 2, all, line, line);
  const auto t = theorem_5_1_check(fr);
  CHECK(t.nu_h == 1);
  CHECK(t.nu_m == 8);
  CHECK(t.correction == 0);
  CHECK(t.equal);

  const JModel s0(r, 0u, {0, 0});
  const auto zero = FieldModel::uniform(3, 2, {}, s0, s0);
  const auto z = theorem_5_1_check(zero);
  CHECK(z.nu_m == 4);
  CHECK(z.correction == 4);
  CHECK(z.equal);

  const auto one = FieldModel::uniform(3, 2, {{1, 0}}, JModel(r, kNegInf, {1, 0}), s0);
  const auto o = theorem_5_1_check(one);
  CHECK(o.nu_m == 3);
  CHECK(o.correction == 3);
  CHECK(o.equal);

  const auto bad = FieldModel::uniform(3, 2, {{1, 0}}, line, s0);
  const auto b = theorem_5_1_check(bad);
  CHECK_FALSE(b.divisible);
  CHECK_FALSE(b.equal);

  CHECK_THROWS_AS(FieldModel::uniform(3, 2, all, s0, s0), ModelInconsistency);
  CHECK_THROWS_AS(FieldModel::uniform(3, 2, all, JModel(r, kNegInf, {1, 1}), line),
                  ModelInconsistency);
  CHECK_THROWS_AS(FieldModel(3, 2, all, {}), ParamError);
}

TEST_CASE("free-rank-2 count report") {
  const JModel line = free_rank2_line();
  const auto items = corollary_5_7_report(FieldModel::uniform(3, 2, {{1, 0}, {0, 1}}, line, line));
  REQUIRE(items.size() == 2);
  CHECK(items[0].global == 1);
  CHECK(items[0].matches);
  CHECK(items[1].per_line == std::vector<std::uint64_t>{3, 3, 3, 3});
  CHECK(items[1].global == 12);
  CHECK(items[1].stated == 8);
  CHECK(items[1].flagged);

  const JModel line5(RingParams(5, 1), kNegInf, {0, 1});
  const auto five = corollary_5_7_report(FieldModel::uniform(5, 2, {{1, 0}, {0, 1}}, line5, line5));
  REQUIRE(five.size() == 4);
  CHECK(five[0].matches);
  CHECK(five[1].global == 30);
  CHECK(five[1].flagged);
  CHECK(five[2].item == "3");
  CHECK(five[2].global == 6);
  CHECK(five[2].matches);
  CHECK(five[3].item == "4");
  CHECK(five[3].global == 24);
  CHECK(five[3].matches);
}
