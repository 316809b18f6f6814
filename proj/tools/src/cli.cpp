#include "galmod_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "galmod/cohomology.hpp"
#include "galmod/error.hpp"
#include "galmod/extgroup.hpp"
#include "galmod/gring.hpp"
#include "galmod/jmodel.hpp"
#include "galmod/pmodule.hpp"
#include "galmod_cli/model_io.hpp"

namespace galmod::cli {
namespace {

using nlohmann::ordered_json;

enum class Verdict { Pass, Fail, Flagged };

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Pass:
    return "pass";
  case Verdict::Fail:
    return "fail";
  case Verdict::Flagged:
    return "flagged";
  }
  return "fail";
}

struct Report {
  Report() = default;
  explicit Report(std::string name) : command(std::move(name)) {}

  std::string command;
  ordered_json inputs = ordered_json::object();
  Verdict verdict = Verdict::Pass;
  ordered_json results = ordered_json::object();
  std::vector<std::string> text;
  std::optional<int> exit_code;
};

struct Options {
  std::optional<std::uint32_t> p, n, ell, m, i, k, level;
  std::optional<std::uint64_t> gamma, power, max_size, count;
  std::string flavor = "split";
  std::string model;
  std::string which_case;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10'000;
  std::string out;
  std::string format = "json";
  bool timing = false;
  std::vector<std::uint32_t> blocks, f;
  std::int64_t j = 1;
  std::string matrix;
  std::string group = "h";
  bool conjugate = false;
};

using Action = std::function<Report(const Options &)>;

std::uint32_t need(const std::optional<std::uint32_t> &v, const char *flag) {
  if (!v)
    throw ParamError(std::string(flag) + " is required");
  return *v;
}

std::string residues(std::span<const fp::Residue> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

ordered_json element_json(const ExtElement &x) {
  return ordered_json{{"f", x.f}, {"j", x.j}};
}

std::string index_target_name(IndexTarget t) {
  switch (t) {
  case IndexTarget::Zero:
    return "zero";
  case IndexTarget::Nonzero:
    return "nonzero";
  case IndexTarget::Any:
    return "any";
  }
  return "any";
}

JModel load_model(const Options &o) {
  if (o.model.empty())
    throw ParamError("--model is required");
  const auto doc = read_json_file(o.model);
  if (is_field_model(doc))
    throw ParamError("expected a single model, got a field model");
  JModel m = model_from_json(doc, o.p, o.n);
  if (o.p && *o.p != m.params().p())
    throw ParamError("--p disagrees with the model file");
  if (o.n && *o.n != m.params().n())
    throw ParamError("--n disagrees with the model file");
  return m;
}

FieldModel load_field_model(const Options &o) {
  if (o.model.empty())
    throw ParamError("--model is required");
  const auto doc = read_json_file(o.model);
  if (!is_field_model(doc))
    throw ParamError("expected a field model");
  FieldModel fm = field_model_from_json(doc);
  if (o.p && *o.p != fm.p())
    throw ParamError("--p disagrees with the model file");
  return fm;
}

ordered_json model_inputs(const Options &o) {
  ordered_json in;
  in["model"] = o.model;
  return in;
}

// ------------------------------------------------------------------ group

ExtGroup group_from(const Options &o, Report &r) {
  const RingParams params(need(o.p, "--p"), need(o.n, "--n"));
  const ExtGroup g(params, need(o.ell, "--ell"), parse_flavor(o.flavor));
  r.inputs = {{"p", params.p()}, {"n", params.n()}, {"ell", g.ell()}, {"flavor", o.flavor}};
  return g;
}

Report group_build(const Options &o) {
  Report r{"group build"};
  const ExtGroup g = group_from(o, r);
  const std::uint64_t guard = o.max_size.value_or(1'000'000);
  if (g.order() > guard)
    throw GuardError("group order " + std::to_string(g.order()) + " exceeds --max-size");
  const std::uint64_t n = g.size();
  const bool exhaustive = n <= 81;
  std::uint64_t cases = 0, assoc_fail = 0, inverse_fail = 0;
  if (exhaustive) {
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b) {
        const auto ab = g.multiply(a, b);
        for (std::uint64_t c = 0; c < n; ++c, ++cases)
          assoc_fail += g.multiply(ab, c) != g.multiply(a, g.multiply(b, c));
      }
  } else {
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    for (; cases < 100'000; ++cases) {
      const auto a = d(rng), b = d(rng), c = d(rng);
      assoc_fail += g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c));
    }
  }
  for (std::uint64_t a = 0; a < n; ++a)
    inverse_fail += g.multiply(a, g.inverse_index(a)) != g.identity_index();
  r.results["order"] = g.order();
  r.results["kernel_order"] = g.kernel_order();
  r.results["associativity"] = {{"exhaustive", exhaustive}, {"cases", cases}, {"failures", assoc_fail}};
  r.results["inverse_failures"] = inverse_fail;
  bool ok = assoc_fail == 0 && inverse_fail == 0;
  r.text.push_back("order " + std::to_string(g.order()) + ", associativity failures " +
                   std::to_string(assoc_fail) + " in " + std::to_string(cases) + " cases");
  if (o.power) {
    std::vector<std::int64_t> f(o.f.begin(), o.f.end());
    const ExtElement x = g.element(f, o.j);
    const ExtElement y = g.power(x, *o.power);
    const bool agrees = *o.power == 0 || power_closed_form(g, x, *o.power) == y;
    r.results["power"] = {{"element", element_json(x)},
                          {"exponent", *o.power},
                          {"result", element_json(y)},
                          {"closed_form_agrees", agrees}};
    r.text.push_back("(" + residues(x.f) + ", sigma^" + std::to_string(x.j) + ")^" +
                     std::to_string(*o.power) + " = (" + residues(y.f) + ", sigma^" +
                     std::to_string(y.j) + ")");
    ok = ok && agrees;
  }
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report group_census(const Options &o) {
  Report r{"group census"};
  const ExtGroup g = group_from(o, r);
  const auto fp = fingerprint(g, o.max_size.value_or(1'000'000));
  const std::uint32_t p = g.params().p();
  ordered_json orders = ordered_json::object();
  for (const auto &[ord, cnt] : fp.order_census)
    orders[std::to_string(ord)] = cnt;
  ordered_json profiles = ordered_json::object();
  for (auto name : {NamedGroup::Hp3, NamedGroup::Mp3, NamedGroup::Mpn, NamedGroup::ZpxZp, NamedGroup::Zp2})
    profiles[galmod::to_string(name)] = matches_profile(fp, p, name);
  r.results = {{"order", fp.order},          {"abelian", fp.abelian},
               {"exponent", fp.exponent},    {"order_census", orders},
               {"center_size", fp.center_size}, {"derived_size", fp.derived_size},
               {"profiles", profiles}};
  r.text.push_back("order " + std::to_string(fp.order) + ", " +
                   (fp.abelian ? "abelian" : "nonabelian") + ", exponent " +
                   std::to_string(fp.exponent));
  return r;
}

Report group_unique_normal(const Options &o) {
  Report r{"group unique-normal"};
  const ExtGroup g = group_from(o, r);
  const auto subs = elem_abelian_normal_with_cyclic_quotient(g, o.max_size.value_or(243));
  r.results["count"] = subs.size();
  r.results["unique"] = subs.size() == 1;
  r.results["subgroups"] = subs;
  r.text.push_back("count " + std::to_string(subs.size()));
  return r;
}

// ------------------------------------------------------------------- ring

Report ring_check(const Options &o) {
  Report r{"ring check"};
  const RingParams params(need(o.p, "--p"), need(o.n, "--n"));
  r.inputs = {{"p", params.p()}, {"n", params.n()}, {"seed", o.seed}, {"samples", o.samples}};
  const std::uint32_t p = params.p(), order = params.order();
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::int64_t> digit(0, p - 1);
  std::uniform_int_distribution<std::uint32_t> low(0, order);
  auto random_element = [&] {
    std::vector<std::int64_t> c(order);
    const std::uint32_t v = low(rng);
    for (std::uint32_t k = v; k < order; ++k)
      c[k] = digit(rng);
    return GroupRingElement(params, c);
  };

  ordered_json checks = ordered_json::object();
  bool ok = true;
  auto record = [&](const std::string &name, std::uint64_t cases, std::uint64_t failures,
                    bool exhaustive) {
    checks[name] = {{"cases", cases}, {"failures", failures}, {"exhaustive", exhaustive}};
    ok = ok && failures == 0;
  };

  std::uint64_t total = 0;
  const bool exhaustive = fp::checked_pow(p, order, total) && total <= 1000;
  std::vector<GroupRingElement> pool;
  if (exhaustive) {
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::vector<std::int64_t> c(order);
      std::uint64_t rest = idx;
      for (auto &x : c) {
        x = static_cast<std::int64_t>(rest % p);
        rest /= p;
      }
      pool.emplace_back(params, c);
    }
  }
  std::uint64_t mult_cases = 0, mult_fail = 0, ultra_fail = 0, comm_fail = 0;
  auto pair_check = [&](const GroupRingElement &f, const GroupRingElement &g) {
    ++mult_cases;
    mult_fail += valuation(f * g) != lstar(valuation(f), valuation(g), params);
    ultra_fail += valuation(f + g) < std::min(valuation(f), valuation(g));
    comm_fail += !(f * g == g * f);
  };
  if (exhaustive) {
    for (const auto &f : pool)
      for (const auto &g : pool)
        pair_check(f, g);
  } else {
    for (std::uint64_t s = 0; s < o.samples; ++s)
      pair_check(random_element(), random_element());
  }
  record("valuation_multiplicative", mult_cases, mult_fail, exhaustive);
  record("valuation_ultrametric", mult_cases, ultra_fail, exhaustive);
  record("commutative", mult_cases, comm_fail, exhaustive);

  std::uint64_t axiom_fail = 0;
  const std::uint64_t triples = std::min<std::uint64_t>(o.samples, 2000);
  for (std::uint64_t s = 0; s < triples; ++s) {
    const auto a = random_element(), b = random_element(), c = random_element();
    axiom_fail += !((a * b) * c == a * (b * c)) || !(a * (b + c) == a * b + a * c);
  }
  record("associative_distributive", triples, axiom_fail, false);

  std::uint64_t unit_cases = 0, unit_fail = 0;
  auto unit_check = [&](const GroupRingElement &f) {
    ++unit_cases;
    const bool unit = is_unit(f);
    if (unit != (valuation(f) == LValue(0)))
      ++unit_fail;
    else if (unit && !(f * unit_inverse(f) == GroupRingElement::one(params)))
      ++unit_fail;
  };
  if (exhaustive)
    for (const auto &f : pool)
      unit_check(f);
  else
    for (std::uint64_t s = 0; s < std::min<std::uint64_t>(o.samples, 2000); ++s)
      unit_check(random_element());
  record("local_ring_units", unit_cases, unit_fail, exhaustive);

  // sigma^{p^n} = 1 and sigma^{p^{n-1}} != 1 pin the order to p^n
  const auto sigma = GroupRingElement::sigma_power(params, 1);
  const auto one = GroupRingElement::one(params);
  const bool full = sigma.pow(order) == one;
  const bool proper = !(sigma.pow(order / p) == one);
  record("sigma_exact_order", 2, (full ? 0 : 1) + (proper ? 0 : 1), true);

  r.results["order"] = order;
  r.results["checks"] = checks;
  for (const auto &[name, v] : checks.items())
    r.text.push_back(name + ": " + v["failures"].dump() + " failures in " + v["cases"].dump() +
                     " cases");
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

// ----------------------------------------------------------------- module

FpMatrix parse_matrix(const std::string &text, fp::Residue p) {
  std::vector<std::vector<fp::Residue>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    std::replace(row.begin(), row.end(), ',', ' ');
    std::stringstream rs(row);
    std::vector<fp::Residue> vals;
    std::int64_t x = 0;
    while (rs >> x)
      vals.push_back(fp::reduce(x, p));
    if (!rs.eof())
      throw ParamError("matrix entries must be integers");
    if (!vals.empty())
      rows.push_back(vals);
  }
  if (rows.empty())
    throw ParamError("empty matrix");
  for (const auto &rw : rows)
    if (rw.size() != rows.size())
      throw ParamError("matrix must be square");
  return FpMatrix::from_rows(rows, p);
}

Report module_decompose(const Options &o) {
  Report r{"module decompose"};
  const RingParams params(need(o.p, "--p"), need(o.n, "--n"));
  r.inputs = {{"p", params.p()}, {"n", params.n()}};
  FpMatrix u;
  std::optional<std::vector<std::uint32_t>> expected;
  if (!o.matrix.empty()) {
    r.inputs["matrix"] = o.matrix;
    u = parse_matrix(o.matrix, params.p());
  } else if (!o.blocks.empty()) {
    r.inputs["blocks"] = o.blocks;
    r.inputs["conjugate"] = o.conjugate;
    const ModuleShape shape(params, o.blocks);
    u = action_matrix(shape);
    if (o.conjugate) {
      r.inputs["seed"] = o.seed;
      std::mt19937_64 rng(o.seed);
      const FpMatrix g = random_invertible(u.rows(), params.p(), rng);
      u = g * u * *g.inverse();
    }
    expected = o.blocks;
    std::sort(expected->rbegin(), expected->rend());
  } else {
    throw ParamError("give --blocks or --matrix");
  }
  const NilpotentAction action(params, u);
  const auto blocks = decompose(action);
  std::vector<std::size_t> ranks;
  FpMatrix power = FpMatrix::identity(u.rows(), params.p());
  for (;;) {
    ranks.push_back(power.rank());
    if (ranks.back() == 0)
      break;
    power = power * u;
  }
  r.results["dimension"] = u.rows();
  r.results["ranks"] = ranks;
  r.results["blocks"] = blocks;
  r.text.push_back("blocks " + ordered_json(blocks).dump());
  if (expected) {
    r.results["matches_input"] = blocks == *expected;
    r.verdict = blocks == *expected ? Verdict::Pass : Verdict::Fail;
  }
  return r;
}

// ----------------------------------------------------------------- jmodel

Report jmodel_validate(const Options &o) {
  Report r{"jmodel validate"};
  r.inputs = model_inputs(o);
  if (o.model.empty())
    throw ParamError("--model is required");
  const auto doc = read_json_file(o.model);
  if (is_field_model(doc)) {
    r.results["kind"] = "field";
    try {
      const FieldModel fm = field_model_from_json(doc);
      r.results["ok"] = true;
      r.results["field"] = field_model_summary(fm);
    } catch (const ModelInconsistency &e) {
      r.results["ok"] = false;
      r.results["violation"] = e.what();
    }
  } else {
    r.results["kind"] = "model";
    const JModel m = load_model(o);
    const auto rep = validate(m);
    r.results["ok"] = rep.ok;
    r.results["model"] = model_to_json(m);
    if (!rep.ok) {
      r.results["violation"] = rep.violation;
      r.results["detail"] = rep.detail;
    }
  }
  const bool ok = r.results["ok"].get<bool>();
  r.text.push_back(ok ? "valid" : "invalid: " + r.results["violation"].get<std::string>());
  if (!ok) {
    r.verdict = Verdict::Fail;
    r.exit_code = kExitUsage;
  }
  return r;
}

Report jmodel_count(const Options &o) {
  Report r{"jmodel count"};
  const JModel m = load_model(o);
  require_valid(m);
  const std::uint32_t ell = need(o.ell, "--ell");
  const ExtFlavor flavor = parse_flavor(o.flavor);
  r.inputs = model_inputs(o);
  r.inputs["ell"] = ell;
  r.inputs["flavor"] = o.flavor;
  const Census c = census(m, o.max_size.value_or(10'000'000));
  const SolutionCount s = count_from_census(c, m.params(), ell, flavor);
  r.results = {{"ell", ell},
               {"flavor", galmod::to_string(flavor)},
               {"raw", s.raw},
               {"count", s.count},
               {"census", {{"zero", c.zero}, {"nonzero", c.nonzero}, {"full", c.full}, {"total", c.total}}}};
  r.text.push_back("count " + std::to_string(s.count) + " (raw tally " + std::to_string(s.raw) + ")");
  return r;
}

ordered_json realize_json(const JModel &m, const RealizeInput &in, const RealizeResult &res) {
  ordered_json j;
  j["model"] = {{"p", m.params().p()}, {"n", m.params().n()},
                {"chi_level", chi_level_to_string(m.chi_level())}, {"d", m.d()}};
  j["gamma"] = in.gamma.index();
  j["gamma_length"] = length(in.gamma);
  j["k"] = in.k;
  j["level"] = in.level;
  j["witness"] = res.witness.index();
  j["witness_length"] = res.witness_length;
  j["witness_index"] = res.witness_index ? ordered_json(*res.witness_index) : ordered_json(nullptr);
  j["target_length"] = res.target_length;
  j["target_index"] = index_target_name(res.target_index);
  j["length_ok"] = res.length_ok;
  j["index_ok"] = res.index_ok;
  j["oracle_found"] = res.oracle_found;
  j["adjusted"] = res.adjusted;
  j["steps"] = res.steps;
  return j;
}

Report jmodel_auto_realize(const Options &o) {
  Report r{"jmodel auto-realize"};
  if (o.which_case.empty())
    throw ParamError("--case is required");
  const RealizeCase which = parse_realize_case(o.which_case);
  r.inputs["case"] = o.which_case;
  r.inputs["seed"] = o.seed;
  std::mt19937_64 rng(o.seed);
  const std::uint64_t guard = o.max_size.value_or(200'000);

  std::uint64_t instances = 0, predicates = 0, agreement = 0, adjusted = 0;
  ordered_json examples = ordered_json::array();
  auto tally = [&](const JModel &m, const RealizeInput &in, const Census &c) {
    const auto res = auto_realize(m, which, in, &c);
    ++instances;
    predicates += res.predicates_ok();
    agreement += res.agreement();
    adjusted += res.adjusted;
    if (examples.size() < 5)
      examples.push_back(realize_json(m, in, res));
  };

  if (!o.model.empty()) {
    const JModel m = load_model(o);
    require_valid(m);
    r.inputs["model"] = o.model;
    const Census c = census(m, guard);
    if (o.gamma) {
      RealizeInput in{ModuleElement::from_index(m.shape(), *o.gamma), o.k.value_or(1), o.level.value_or(0)};
      r.inputs["gamma"] = *o.gamma;
      r.inputs["k"] = in.k;
      r.inputs["level"] = in.level;
      tally(m, in, c);
    } else {
      const std::uint64_t want = o.count.value_or(100);
      r.inputs["count"] = want;
      for (std::uint64_t attempt = 0; attempt < 20 * want && instances < want; ++attempt) {
        const auto in = sample_realize_input(m, which, rng, guard);
        if (!in) {
          if (which != RealizeCase::Top && which != RealizeCase::Prop42)
            break;
          continue;
        }
        tally(m, *in, c);
      }
    }
  } else {
    const RingParams params(need(o.p, "--p"), need(o.n, "--n"));
    const std::uint64_t want = o.count.value_or(100);
    r.inputs["p"] = params.p();
    r.inputs["n"] = params.n();
    r.inputs["count"] = want;
    r.inputs["max_size"] = guard;
    for (std::uint64_t attempt = 0; attempt < 50 * want && instances < want; ++attempt) {
      JModel m = random_model(params, guard, rng);
      if (attempt % 2)
        m = randomize_tail(m, rng);
      if (!validate(m).ok)
        continue;
      const Census c = census(m, guard);
      for (int s = 0; s < 10 && instances < want; ++s) {
        const auto in = sample_realize_input(m, which, rng, guard);
        if (!in)
          break;
        tally(m, *in, c);
      }
    }
  }
  r.results = {{"instances", instances},
               {"predicates_ok", predicates},
               {"oracle_agreement", agreement},
               {"adjusted", adjusted},
               {"examples", examples}};
  r.text.push_back("case " + galmod::to_string(which) + ": " + std::to_string(predicates) + "/" +
                   std::to_string(instances) + " witnesses pass, " + std::to_string(agreement) +
                   " agree with the oracle");
  const bool ok = instances > 0 && predicates == instances && agreement == instances;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report jmodel_thm51(const Options &o) {
  Report r{"jmodel thm51"};
  const FieldModel fm = load_field_model(o);
  r.inputs = model_inputs(o);
  const auto t = theorem_5_1_check(fm, o.max_size.value_or(10'000'000));
  r.results = {{"field", field_model_summary(fm)},
               {"per_line_split2", t.per_line_split2},
               {"per_line_bullet2", t.per_line_bullet2},
               {"sum_split2", t.sum_split2},
               {"divisible", t.divisible},
               {"nu_h", t.nu_h},
               {"nu_m", t.nu_m},
               {"correction", t.correction},
               {"predicted_nu_m", t.predicted_nu_m},
               {"equal", t.equal}};
  r.text.push_back("nu_H=" + std::to_string(t.nu_h) + " nu_M=" + std::to_string(t.nu_m) +
                   " correction=" + std::to_string(t.correction) +
                   (t.divisible ? "" : " (sum over lines not divisible by p+1)"));
  r.verdict = t.equal ? Verdict::Pass : Verdict::Fail;
  return r;
}

ordered_json comparison_json(const SetComparison &s) {
  ordered_json j = {{"equal", s.equal}, {"lhs_size", s.lhs_size}, {"rhs_size", s.rhs_size}};
  j["counterexample"] = s.counterexample ? ordered_json(*s.counterexample) : ordered_json(nullptr);
  return j;
}

Report jmodel_thm54(const Options &o) {
  Report r{"jmodel thm54"};
  const JModel m = load_model(o);
  require_valid(m);
  r.inputs = model_inputs(o);
  const std::uint32_t p = m.params().p(), top = m.params().order();
  const std::uint32_t lo = top / p + 2, hi = top - 1;
  std::vector<std::uint32_t> targets;
  if (o.i) {
    r.inputs["i"] = *o.i;
    targets.push_back(*o.i);
  } else {
    for (std::uint32_t i = lo; i <= hi; ++i)
      targets.push_back(i);
  }
  ordered_json checks = ordered_json::array();
  bool ok = true;
  if (lo > hi) {
    r.results["range_empty"] = true;
    r.text.push_back("range [p^{n-1}+2, p^n-1] is empty");
  } else {
    r.results["range_empty"] = false;
    for (auto i : targets) {
      const auto t = theorem_5_4_check(m, i, o.max_size.value_or(10'000'000));
      checks.push_back({{"i", i},
                        {"bullet_count", t.bullet_count},
                        {"split_count", t.split_count},
                        {"ratio_ok", t.ratio_ok},
                        {"translation", comparison_json(t.translation)}});
      ok = ok && t.ratio_ok && t.translation.equal;
      r.text.push_back("i=" + std::to_string(i) + ": bullet " + std::to_string(t.bullet_count) +
                       ", split " + std::to_string(t.split_count));
    }
  }
  r.results["checks"] = checks;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report jmodel_thm55(const Options &o) {
  Report r{"jmodel thm55"};
  const JModel m = load_model(o);
  require_valid(m);
  if (m.params().n() != 1)
    throw ParamError("thm55 needs an n = 1 model");
  r.inputs = model_inputs(o);
  const std::uint32_t p = m.params().p();
  std::vector<std::uint32_t> ells;
  if (o.ell) {
    r.inputs["ell"] = *o.ell;
    ells.push_back(*o.ell);
  } else {
    for (std::uint32_t l = 2; l + 1 <= p; ++l)
      ells.push_back(l);
  }
  const Census c = census(m, o.max_size.value_or(100'000'000));
  const JModel standard(m.params(), m.chi_level(), m.d());
  const bool closed = !m.chi_level() && m.functional() == standard.functional();
  const std::uint32_t d0 = m.d()[0], d1 = m.d()[1];
  bool ok = true;
  ordered_json checks = ordered_json::array();
  for (auto l : ells) {
    const auto t = theorem_5_5_check(m, c, l);
    ordered_json j = {{"ell", l},         {"lhs", t.lhs},   {"rhs", t.rhs},
                      {"rhs_integral", t.rhs_integral}, {"equal", t.equal}, {"nu_h", t.nu_h},
                      {"nu_zz", t.nu_zz}};
    bool row_ok = t.equal;
    if (closed) {
      const auto cf = theorem_5_5_closed_form(p, d0, d1, l);
      j["closed_form"] = cf ? ordered_json(*cf) : ordered_json(nullptr);
      row_ok = row_ok && cf && *cf == t.lhs;
    }
    ok = ok && row_ok;
    checks.push_back(j);
    r.text.push_back("ell=" + std::to_string(l) + ": lhs " + std::to_string(t.lhs) + ", rhs " + t.rhs);
  }
  r.results["checks"] = checks;
  if (closed) {
    const auto cum = kernel_length_counts(c);
    ordered_json counts = ordered_json::array();
    for (std::uint32_t l = 1; l + 1 <= p; ++l) {
      std::uint64_t expected = 0;
      const bool fits = fp::checked_pow(p, d0 + static_cast<std::uint64_t>(l) * d1, expected);
      const bool eq = fits && expected == cum[l];
      counts.push_back({{"ell", l}, {"count", cum[l]}, {"expected", expected}, {"equal", eq}});
      ok = ok && eq;
    }
    r.results["kernel_counts"] = counts;
  }
  const auto ks = kernel_structure(m);
  r.results["kernel_structure"] = {{"is_submodule", ks.is_submodule},
                                   {"dimension", ks.dimension},
                                   {"blocks", ks.blocks},
                                   {"displayed", ks.displayed},
                                   {"matches", ks.matches}};
  r.text.push_back("ker(e) blocks " + ordered_json(ks.blocks).dump() + ", displayed " +
                   ordered_json(ks.displayed).dump());
  if (!ok)
    r.verdict = Verdict::Fail;
  else if (!ks.matches)
    r.verdict = Verdict::Flagged;
  return r;
}

Report jmodel_eq52(const Options &o) {
  Report r{"jmodel eq52"};
  const JModel m = load_model(o);
  require_valid(m);
  r.inputs = model_inputs(o);
  const auto e = verify_eq_5_2(m, o.max_size.value_or(10'000'000));
  r.results = comparison_json(e);
  r.results["chi_length"] = e.chi_length;
  r.text.push_back(std::string(e.equal ? "equal" : "different") + ", " + std::to_string(e.lhs_size) +
                   " elements");
  r.verdict = e.equal ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report jmodel_cor57(const Options &o) {
  Report r{"jmodel cor57"};
  const FieldModel fm = load_field_model(o);
  r.inputs = model_inputs(o);
  const auto items = corollary_5_7_report(fm, o.max_size.value_or(10'000'000));
  ordered_json list = ordered_json::array();
  bool fail = false, flagged = false;
  for (const auto &it : items) {
    list.push_back({{"item", it.item},
                    {"i", it.i},
                    {"flavor", galmod::to_string(it.flavor)},
                    {"per_line", it.per_line},
                    {"global", it.global},
                    {"stated", it.stated},
                    {"matches", it.matches},
                    {"flagged", it.flagged}});
    fail = fail || (!it.matches && !it.flagged);
    flagged = flagged || it.flagged;
    r.text.push_back("item " + it.item + " (i=" + std::to_string(it.i) + "): global " +
                     std::to_string(it.global) + ", stated " + std::to_string(it.stated) +
                     (it.flagged ? " [flagged]" : ""));
  }
  r.results["items"] = list;
  r.verdict = fail ? Verdict::Fail : flagged ? Verdict::Flagged : Verdict::Pass;
  return r;
}

// ------------------------------------------------------------- cohomology

Report coh_bass_tate(const Options &o) {
  Report r{"coh bass-tate"};
  const std::uint32_t p = need(o.p, "--p");
  r.inputs = {{"p", p}};
  const auto b = bass_tate_skeleton(p);
  ordered_json conventions = ordered_json::array();
  for (const auto &c : b.conventions)
    conventions.push_back({{"order", c.order}, {"sign", c.sign}, {"matches", c.matches}});
  r.results = {{"cup_is_cocycle", b.cup_is_cocycle},
               {"cup_not_coboundary", b.cup_not_coboundary},
               {"cup_rank_a", b.cup_rank_a},
               {"cup_rank_augmented", b.cup_rank_augmented},
               {"inflation_is_coboundary", b.inflation_is_coboundary},
               {"conventions", conventions},
               {"convention", b.convention ? ordered_json{{"order", b.convention->order},
                                                          {"sign", b.convention->sign}}
                                           : ordered_json(nullptr)},
               {"control_not_coboundary", b.control_not_coboundary},
               {"h", b.h ? ordered_json(b.h->values()) : ordered_json(nullptr)}};
  r.text.push_back(std::string("cup cocycle ") + (b.cup_not_coboundary ? "is not" : "is") +
                   " a coboundary on (Z/p)^2; inflation " +
                   (b.inflation_is_coboundary ? "is" : "is not") + " a coboundary");
  if (b.convention)
    r.text.push_back("convention " + b.convention->order + ", sign " + std::to_string(b.convention->sign));
  r.verdict = b.all_pass() ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report coh_factor_set(const Options &o) {
  Report r{"coh factor-set"};
  const ExtGroup g = group_from(o, r);
  const Cochain c = factor_set(g);
  const std::uint64_t n = c.group()->size();
  std::uint64_t nonzero = 0;
  for (auto v : c.values())
    nonzero += v != 0;
  const bool cocycle = is_2cocycle(c);
  const auto s = solve_coboundary(c);
  r.results = {{"order", n},
               {"nonzero_entries", nonzero},
               {"is_2cocycle", cocycle},
               {"coboundary", s.h.has_value()},
               {"rank_a", s.rank_a},
               {"rank_augmented", s.rank_augmented}};
  if (n <= 27) {
    ordered_json rows = ordered_json::array();
    for (std::uint64_t a = 0; a < n; ++a) {
      std::vector<fp::Residue> row;
      for (std::uint64_t b = 0; b < n; ++b)
        row.push_back(c.at(a, b));
      rows.push_back(row);
    }
    r.results["values"] = rows;
  }
  r.text.push_back(std::to_string(nonzero) + " nonzero entries; " +
                   (s.h ? "a coboundary" : "not a coboundary"));
  const bool ok = g.flavor() == ExtFlavor::Split ? c.is_zero() : cocycle && !s.h;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

Report coh_solve(const Options &o) {
  Report r{"coh solve"};
  const std::uint32_t p = need(o.p, "--p");
  r.inputs = {{"p", p}, {"group", o.group}};
  auto q = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::elementary_abelian(p, 2));
  Cochain phi(q, 1, p), psi(q, 1, p);
  for (std::uint64_t x = 0; x < q->size(); ++x) {
    phi.set(x, static_cast<std::int64_t>(x % p));
    psi.set(x, static_cast<std::int64_t>(x / p));
  }
  const Cochain cup = cup11(phi, psi);
  Cochain target = cup;
  if (o.group == "h") {
    const ExtGroup hx(RingParams(p, 1), 2, ExtFlavor::Split);
    auto h = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::from_ext_group(hx));
    std::vector<std::uint64_t> proj(h->size());
    for (std::uint64_t x = 0; x < h->size(); ++x) {
      const auto e = hx.element_at(x);
      proj[x] = e.f[0] + static_cast<std::uint64_t>(p) * e.j;
    }
    target = inflate(cup, GroupSurjection(h, q, proj));
  } else if (o.group == "elem3") {
    auto g3 = std::make_shared<const FiniteGroupTable>(FiniteGroupTable::elementary_abelian(p, 3));
    std::vector<std::uint64_t> drop(g3->size());
    for (std::uint64_t x = 0; x < g3->size(); ++x)
      drop[x] = x % (static_cast<std::uint64_t>(p) * p);
    target = inflate(cup, GroupSurjection(g3, q, drop));
  } else if (o.group != "q") {
    throw ParamError("--group must be q, h or elem3");
  }
  const auto s = solve_coboundary(target);
  r.results = {{"order", target.group()->size()},
               {"solvable", s.h.has_value()},
               {"rank_a", s.rank_a},
               {"rank_augmented", s.rank_augmented},
               {"h", s.h ? ordered_json(s.h->values()) : ordered_json(nullptr)}};
  r.text.push_back(std::string("d1 h = cup ") + (s.h ? "is solvable" : "has no solution") +
                   " (rank " + std::to_string(s.rank_a) + " vs " + std::to_string(s.rank_augmented) + ")");
  return r;
}

// ------------------------------------------------------------------ binom

Report binom(const Options &o) {
  Report r{"binom"};
  const std::uint32_t n = need(o.n, "--n"), m = need(o.m, "--m"), p = need(o.p, "--p");
  if (!fp::is_prime(p))
    throw ParamError("p must be prime");
  r.inputs = {{"n", n}, {"m", m}, {"p", p}};
  const auto v = gaussian_binomial(n, m, p);
  r.results["value"] = v;
  r.text.push_back(std::to_string(v));
  return r;
}

// ------------------------------------------------------------------- emit

std::string render(const Report &r, const Options &o, double seconds) {
  if (o.format == "text") {
    std::ostringstream s;
    s << r.command << ": " << to_string(r.verdict) << "\n";
    for (const auto &line : r.text)
      s << "  " << line << "\n";
    s << "  wall time " << seconds << " s\n";
    return s.str();
  }
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = r.command;
  doc["inputs"] = r.inputs;
  doc["verdict"] = to_string(r.verdict);
  doc["results"] = r.results;
  if (o.timing)
    doc["wall_time_seconds"] = seconds;
  return doc.dump(2) + "\n";
}

const CLI::App *deepest(const CLI::App *app) {
  for (const auto *sub : app->get_subcommands())
    return deepest(sub);
  return app;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Options o;
  Action action;
  CLI::App app{"Verification driver for modular group rings, p-group extensions and J-models",
               "galmod"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out, "Write the report to a file");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--max-size", o.max_size, "Enumeration size guard");
  app.add_flag("--timing", o.timing, "Include wall time in JSON reports");

  auto opt_p = [&](CLI::App *s) { s->add_option("--p", o.p, "Odd prime p"); };
  auto opt_n = [&](CLI::App *s) { s->add_option("--n", o.n, "Exponent n of G_n = Z/p^n"); };
  auto opt_ell = [&](CLI::App *s) { s->add_option("--ell", o.ell, "Block length"); };
  auto opt_flavor = [&](CLI::App *s) {
    s->add_option("--flavor", o.flavor, "Extension flavor")->check(CLI::IsMember({"split", "bullet"}));
  };
  auto opt_model = [&](CLI::App *s) { s->add_option("--model", o.model, "Model file (JSON)"); };
  auto leaf = [&](CLI::App *parent, const std::string &name, const std::string &desc, Action a) {
    CLI::App *s = parent->add_subcommand(name, desc);
    s->callback([&action, a] { action = a; });
    return s;
  };

  CLI::App *group = app.add_subcommand("group", "Extension groups A_l x| G_n and A_l . G_n");
  group->require_subcommand(1);
  for (auto *s : {leaf(group, "build", "Build a group and check the group axioms", group_build),
                  leaf(group, "census", "Invariant fingerprint and named profiles", group_census),
                  leaf(group, "unique-normal",
                       "Elementary abelian normal subgroups with cyclic quotient", group_unique_normal)}) {
    opt_p(s);
    opt_n(s);
    opt_ell(s);
    opt_flavor(s);
    if (s->get_name() == "build") {
      s->add_option("--power", o.power, "Raise (f, sigma^j) to this power");
      s->add_option("--f", o.f, "Kernel coordinates of the element")->delimiter(',');
      s->add_option("--j", o.j, "Sigma exponent of the element");
    }
  }

  CLI::App *ring = app.add_subcommand("ring", "The group ring F_p[G_n]");
  ring->require_subcommand(1);
  CLI::App *rc = leaf(ring, "check", "Valuation, ring and unit property checks", ring_check);
  opt_p(rc);
  opt_n(rc);
  rc->add_option("--samples", o.samples, "Random cases when not exhaustive");

  CLI::App *module = app.add_subcommand("module", "Finite F_p[G_n]-modules");
  module->require_subcommand(1);
  CLI::App *md = leaf(module, "decompose", "Indecomposable block lengths of a nilpotent action",
                      module_decompose);
  opt_p(md);
  opt_n(md);
  md->add_option("--blocks", o.blocks, "Build the action of this direct sum")->delimiter(',');
  md->add_flag("--conjugate", o.conjugate, "Conjugate by a random invertible matrix");
  md->add_option("--matrix", o.matrix, "Rows separated by ';', entries by spaces or commas");

  CLI::App *jm = app.add_subcommand("jmodel", "Synthetic J-models with an index functional");
  jm->require_subcommand(1);
  for (auto *s : {leaf(jm, "validate", "Check the model invariants", jmodel_validate),
                  leaf(jm, "count", "Count embedding-problem solutions", jmodel_count),
                  leaf(jm, "auto-realize", "Constructive automatic-realization witnesses",
                       jmodel_auto_realize),
                  leaf(jm, "thm51", "Split and bullet counts summed over the lines of a field model", jmodel_thm51),
                  leaf(jm, "thm54", "Bullet to split count ratio", jmodel_thm54),
                  leaf(jm, "thm55", "n = 1 split counts and the structure of ker(e)", jmodel_thm55),
                  leaf(jm, "eq52", "Set equality of the length-2 decomposition", jmodel_eq52),
                  leaf(jm, "cor57", "Named group counts on a free-rank-2 field model", jmodel_cor57)}) {
    opt_model(s);
    opt_p(s);
    opt_n(s);
    const std::string name = s->get_name();
    if (name == "count" || name == "thm55")
      opt_ell(s);
    if (name == "count")
      opt_flavor(s);
    if (name == "thm54")
      s->add_option("--i", o.i, "Target length i");
    if (name == "auto-realize") {
      s->add_option("--case", o.which_case, "4.1.1, 4.1.2, 4.1.3, 4.1.4 or 4.2");
      s->add_option("--gamma", o.gamma, "Input element by index");
      s->add_option("--k", o.k, "Parameter k");
      s->add_option("--level", o.level, "Level i");
      s->add_option("--count", o.count, "Number of random instances");
    }
  }

  CLI::App *coh = app.add_subcommand("coh", "Low-degree cohomology");
  coh->require_subcommand(1);
  CLI::App *bt = leaf(coh, "bass-tate", "Group-level coboundary construction", coh_bass_tate);
  opt_p(bt);
  CLI::App *fs = leaf(coh, "factor-set", "Factor set of an extension of G_n", coh_factor_set);
  opt_p(fs);
  opt_n(fs);
  opt_ell(fs);
  opt_flavor(fs);
  CLI::App *sv = leaf(coh, "solve", "Solve d1 h = inflated cup cocycle", coh_solve);
  opt_p(sv);
  sv->add_option("--group", o.group, "q, h or elem3");

  CLI::App *bn = leaf(&app, "binom", "Gaussian binomial coefficient", binom);
  opt_p(bn);
  opt_n(bn);
  bn->add_option("--m", o.m, "Subspace dimension");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << deepest(&app)->help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n" << deepest(&app)->help();
    return kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Report report;
  try {
    report = action(o);
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = render(report, o, seconds);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      err << "error: cannot write " << o.out << "\n";
      return kExitUsage;
    }
    f << text;
  } else {
    out << text;
  }
  if (report.exit_code)
    return *report.exit_code;
  switch (report.verdict) {
  case Verdict::Pass:
    return kExitPass;
  case Verdict::Fail:
    return kExitFail;
  case Verdict::Flagged:
    return kExitFlagged;
  }
  return kExitFail;
}

} // namespace galmod::cli
