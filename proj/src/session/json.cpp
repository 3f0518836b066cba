#include "speccheck/session/json.hpp"

#include <stdexcept>

namespace speccheck::session {

using correction::Action;

Json to_json(const Value& v)
{
    if (v.is_bool())
        return v.as_bool();
    if (v.is_int())
        return v.as_int();
    return Json(v.as_array());
}

Json to_json(const Bindings& b)
{
    Json j = Json::object();
    for (const auto& [name, v] : b)
        j[name] = to_json(v);
    return j;
}

Json to_json(const eval::TriBool& t)
{
    return std::string(t.name());
}

Json to_json(const Action& a)
{
    Json j;
    switch (a.op()) {
    case Action::Op::And:
    case Action::Op::Or: {
        j["op"] = a.op() == Action::Op::And ? "and" : "or";
        Json ops = Json::array();
        for (const auto& o : a.operands())
            ops.push_back(to_json(o));
        j["operands"] = std::move(ops);
        break;
    }
    case Action::Op::Basic:
        j["op"] = "basic";
        j["kind"] = std::string(correction::to_string(a.kind()));
        if (a.target())
            j["target"] = std::string(correction::to_string(*a.target()));
        if (!a.is_skip()) {
            Json w;
            w["input"] = to_json(a.witness().input);
            if (a.witness().output)
                w["output"] = to_json(*a.witness().output);
            j["witness"] = std::move(w);
        }
        break;
    }
    j["summary"] = a.summary();
    return j;
}

Json to_json(const correction::Verdict& v)
{
    Json j;
    j["type"] = "verdict";
    j["behaviorIndex"] = v.behavior_index;
    j["kind"] = std::string(lang::to_string(v.kind));
    j["stage"] = std::string(correction::to_string(v.stage));
    j["input"] = to_json(v.input);
    j["output"] = v.output ? to_json(*v.output) : Json(nullptr);
    j["pTruth"] = to_json(v.p);
    if (v.p.is_undefined())
        j["pReason"] = v.p.reason().to_string();
    j["qTruth"] = v.q ? to_json(*v.q) : Json(nullptr);
    if (v.q && v.q->is_undefined())
        j["qReason"] = v.q->reason().to_string();
    j["g"] = v.g ? Json(*v.g) : Json(nullptr);
    j["required"] = {{"P", v.required_p}, {"Q", v.required_q ? Json(*v.required_q) : Json(nullptr)}};
    j["action"] = to_json(v.action);
    j["warnings"] = v.warnings;
    j["text"] = correction::describe(v);
    return j;
}

Json to_json(const correction::OracleQuery& q)
{
    Json j;
    j["type"] = "query";
    j["behaviorIndex"] = q.behavior_index;
    j["input"] = to_json(q.input);
    j["output"] = to_json(q.output);
    return j;
}

Json to_json(const correction::StepResult& r)
{
    if (const auto* v = std::get_if<correction::Verdict>(&r))
        return to_json(*v);
    if (const auto* q = std::get_if<correction::OracleQuery>(&r))
        return to_json(*q);
    return Json{{"type", "done"}};
}

Json to_json(const lang::Diagnostic& d)
{
    return Json{{"severity", d.severity == lang::Severity::Error ? "error" : "warning"},
                {"line", d.loc.line},
                {"column", d.loc.column},
                {"message", d.message}};
}

Json to_json(const std::vector<lang::Diagnostic>& ds)
{
    Json j = Json::array();
    for (const auto& d : ds)
        j.push_back(to_json(d));
    return j;
}

Json to_json(const lang::Behavior& b)
{
    return Json{{"kind", std::string(lang::to_string(b.kind))},
                {"group", b.group},
                {"input", to_json(b.input)},
                {"output", to_json(b.output)}};
}

namespace {

Json witnesses(const std::vector<accuracy::AccuracyWitness>& ws)
{
    Json j = Json::array();
    for (const auto& w : ws) {
        Json e{{"input", to_json(w.input)}, {"output", to_json(w.output)}, {"kind", std::string(lang::to_string(w.kind))}};
        if (!w.note.empty())
            e["note"] = w.note;
        j.push_back(std::move(e));
    }
    return j;
}

} // namespace

Json to_json(const accuracy::AccuracyReport& r)
{
    Json j;
    j["verdict"] = std::string(accuracy::to_string(r.verdict()));
    j["checked"] = r.checked;
    j["dontCare"] = r.dont_care;
    j["overCount"] = r.over_count;
    j["underCount"] = r.under_count;
    j["undefinedCount"] = r.undefined_count;
    j["overWitnesses"] = witnesses(r.over);
    j["underWitnesses"] = witnesses(r.under);
    j["undefinedWitnesses"] = witnesses(r.undefined);
    j["stoppedEarly"] = r.stopped_early;
    return j;
}

Value value_from_json(const Json& j)
{
    if (j.is_boolean())
        return Value(j.get<bool>());
    if (j.is_number_integer())
        return Value(j.get<Int>());
    if (j.is_array()) {
        IntArray a;
        for (const auto& e : j) {
            if (!e.is_number_integer())
                throw std::invalid_argument("array elements must be integers");
            a.push_back(e.get<Int>());
        }
        return Value(std::move(a));
    }
    throw std::invalid_argument("unsupported value " + j.dump());
}

Bindings bindings_from_json(const Json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("bindings must be an object");
    Bindings b;
    for (const auto& [name, v] : j.items())
        b.set(name, value_from_json(v));
    return b;
}

} // namespace speccheck::session
