#pragma once

#include <string>

#include <json.hpp>

#include "chaindiff/expr.hpp"

namespace chaindiff {

using json = nlohmann::ordered_json;

json to_json(const Expr& e);
Expr expr_from_json(const json& j);

// Round-trippable text form; same grammar the CLI accepts.
std::string to_dsl(const Expr& e);

}  // namespace chaindiff
