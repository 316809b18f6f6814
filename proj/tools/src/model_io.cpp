#include "galmod_cli/model_io.hpp"

#include <fstream>

#include "galmod/error.hpp"

namespace galmod::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::uint32_t get_u32(const json &doc, const char *key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned())
    throw ParamError(std::string("model field '") + key + "' must be a non-negative integer");
  return doc[key].get<std::uint32_t>();
}

ChiLevel parse_chi_level(const json &v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "neg_inf")
      return std::nullopt;
    throw ParamError("chi_level must be \"neg_inf\" or a non-negative integer");
  }
  if (!v.is_number_unsigned())
    throw ParamError("chi_level must be \"neg_inf\" or a non-negative integer");
  return v.get<std::uint32_t>();
}

std::vector<fp::Residue> residue_vector(const json &v, const char *what) {
  if (!v.is_array())
    throw ParamError(std::string(what) + " must be an array");
  std::vector<fp::Residue> out;
  for (const auto &x : v) {
    if (!x.is_number_unsigned())
      throw ParamError(std::string(what) + " entries must be non-negative integers");
    out.push_back(x.get<fp::Residue>());
  }
  return out;
}

} // namespace

json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ParamError("cannot open model file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParamError("malformed JSON in " + path + ": " + e.what());
  }
}

bool is_field_model(const json &doc) {
  return doc.contains("lines") || doc.contains("inside") || doc.contains("dim_jf");
}

JModel model_from_json(const json &doc, std::optional<std::uint32_t> p,
                       std::optional<std::uint32_t> n) {
  if (!doc.is_object())
    throw ParamError("a model must be a JSON object");
  const std::uint32_t mp = doc.contains("p") ? get_u32(doc, "p") : p.value_or(0);
  const std::uint32_t mn = doc.contains("n") ? get_u32(doc, "n") : n.value_or(0);
  if (mp == 0 || mn == 0)
    throw ParamError("model needs p and n");
  if (!doc.contains("chi_level"))
    throw ParamError("model needs chi_level");
  if (!doc.contains("d"))
    throw ParamError("model needs d");
  std::vector<std::uint32_t> d;
  for (auto x : residue_vector(doc["d"], "d"))
    d.push_back(x);
  JModel m(RingParams(mp, mn), parse_chi_level(doc["chi_level"]), d);
  if (doc.contains("e_tail")) {
    const auto &tail = doc["e_tail"];
    if (!tail.is_object())
      throw ParamError("e_tail must be an object");
    for (const auto &[gen, entries] : tail.items()) {
      if (!entries.is_object())
        throw ParamError("e_tail entries must be objects");
      for (const auto &[k, value] : entries.items()) {
        if (!value.is_number_unsigned())
          throw ParamError("e_tail values must be non-negative integers");
        std::uint32_t g = 0, kk = 0;
        try {
          g = static_cast<std::uint32_t>(std::stoul(gen));
          kk = static_cast<std::uint32_t>(std::stoul(k));
        } catch (const std::exception &) {
          throw ParamError("e_tail keys must be integers");
        }
        m = m.with_tail(g, kk, value.get<fp::Residue>());
      }
    }
  }
  return m;
}

FieldModel field_model_from_json(const json &doc) {
  const std::uint32_t p = get_u32(doc, "p");
  const std::uint32_t n = doc.contains("n") ? get_u32(doc, "n") : 1;
  if (n != 1)
    throw ParamError("field models are n = 1 only");
  const std::uint32_t dim = get_u32(doc, "dim_jf");
  std::vector<std::vector<fp::Residue>> span;
  if (doc.contains("frak_n")) {
    if (!doc["frak_n"].is_array())
      throw ParamError("frak_n must be an array of vectors");
    for (const auto &v : doc["frak_n"])
      span.push_back(residue_vector(v, "frak_n vector"));
  }
  if (doc.contains("lines")) {
    std::vector<FieldModel::Line> lines;
    for (const auto &line : doc["lines"]) {
      if (!line.contains("representative") || !line.contains("model"))
        throw ParamError("each line needs a representative and a model");
      lines.push_back({residue_vector(line["representative"], "representative"),
                       model_from_json(line["model"], p, n)});
    }
    return FieldModel(p, dim, std::move(span), std::move(lines));
  }
  if (!doc.contains("inside") || !doc.contains("outside"))
    throw ParamError("field model needs either lines or inside/outside models");
  return FieldModel::uniform(p, dim, std::move(span), model_from_json(doc["inside"], p, n),
                             model_from_json(doc["outside"], p, n));
}

ordered_json model_to_json(const JModel &m) {
  ordered_json out;
  out["p"] = m.params().p();
  out["n"] = m.params().n();
  if (m.chi_level())
    out["chi_level"] = *m.chi_level();
  else
    out["chi_level"] = "neg_inf";
  out["d"] = m.d();
  out["dimension"] = m.shape().dimension();
  out["functional"] = m.functional();
  return out;
}

ordered_json field_model_summary(const FieldModel &fm) {
  ordered_json out;
  out["p"] = fm.p();
  out["dim_jf"] = fm.dim_jf();
  out["dim_frak_n"] = fm.dim_frak_n();
  ordered_json lines = ordered_json::array();
  for (const auto &line : fm.lines()) {
    ordered_json l;
    l["representative"] = line.representative;
    l["in_frak_n"] = fm.in_frak_n(line.representative);
    l["chi_level"] = chi_level_to_string(line.model.chi_level());
    l["d"] = line.model.d();
    lines.push_back(l);
  }
  out["lines"] = lines;
  return out;
}

} // namespace galmod::cli
