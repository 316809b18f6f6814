#pragma once
// JSON model files for the command-line driver.
//
// A single model:
//   {"p": 3, "n": 1, "chi_level": "neg_inf" | s, "d": [d0, ..., dn],
//    "e_tail": {"<generator>": {"<k>": value}}}
// e_tail entries override the standard tail (e((sigma-1) alpha) = 1, zero
// beyond) for the listed Y_n generators.
//
// A field model (n = 1):
//   {"p": 3, "n": 1, "dim_jf": 2, "frak_n": [[1, 0], ...],
//    "lines": [{"representative": [1, 0], "model": {...}}, ...]}
// or, with one model inside frak N and one outside,
//   {..., "inside": {...}, "outside": {...}}.
// Nested models inherit p and n from the enclosing document.

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "galmod/jmodel.hpp"

namespace galmod::cli {

nlohmann::json read_json_file(const std::string &path);

bool is_field_model(const nlohmann::json &doc);

JModel model_from_json(const nlohmann::json &doc, std::optional<std::uint32_t> p = std::nullopt,
                       std::optional<std::uint32_t> n = std::nullopt);
FieldModel field_model_from_json(const nlohmann::json &doc);

nlohmann::ordered_json model_to_json(const JModel &m);
nlohmann::ordered_json field_model_summary(const FieldModel &fm);

} // namespace galmod::cli
