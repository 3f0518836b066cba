#pragma once

#include "speccheck/accuracy/accuracy.hpp"
#include "speccheck/correction/speccheck.hpp"
#include "speccheck/lang/validate.hpp"

#include <json.hpp>

namespace speccheck::session {

using Json = nlohmann::ordered_json;

[[nodiscard]] Json to_json(const Value& v);
[[nodiscard]] Json to_json(const Bindings& b);
[[nodiscard]] Json to_json(const eval::TriBool& t);
[[nodiscard]] Json to_json(const correction::Action& a);
[[nodiscard]] Json to_json(const correction::Verdict& v);
[[nodiscard]] Json to_json(const correction::OracleQuery& q);
[[nodiscard]] Json to_json(const correction::StepResult& r);
[[nodiscard]] Json to_json(const lang::Diagnostic& d);
[[nodiscard]] Json to_json(const std::vector<lang::Diagnostic>& ds);
[[nodiscard]] Json to_json(const lang::Behavior& b);
[[nodiscard]] Json to_json(const accuracy::AccuracyReport& r);

// Throws std::invalid_argument on a value that is not an int, bool or
// list of ints.
[[nodiscard]] Value value_from_json(const Json& j);
[[nodiscard]] Bindings bindings_from_json(const Json& j);

} // namespace speccheck::session
