#include "speccheck/accuracy/domain.hpp"

#include "speccheck/eval/evaluator.hpp"
#include "speccheck/lang/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace speccheck::accuracy {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    return __builtin_mul_overflow(a, b, &out) ? saturated : out;
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    return __builtin_add_overflow(a, b, &out) ? saturated : out;
}

std::uint64_t pow_sat(std::uint64_t base, Int exp)
{
    std::uint64_t out = 1;
    for (Int i = 0; i < exp; ++i)
        out = mul_sat(out, base);
    return out;
}

} // namespace

VarDomain VarDomain::ints(std::vector<Int> values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    VarDomain d;
    d.type_ = Type::Int;
    d.size_ = values.size();
    d.values_ = std::move(values);
    return d;
}

VarDomain VarDomain::range(Int lo, Int hi)
{
    if (hi < lo)
        return ints({});
    if (static_cast<std::uint64_t>(hi - lo) >= 100'000'000)
        throw DomainError("integer range too wide: [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    std::vector<Int> values;
    for (Int v = lo; v <= hi; ++v)
        values.push_back(v);
    return ints(std::move(values));
}

VarDomain VarDomain::booleans()
{
    VarDomain d;
    d.type_ = Type::Bool;
    d.size_ = 2;
    return d;
}

VarDomain VarDomain::arrays(Int min_len, Int max_len, std::vector<Int> elements)
{
    if (min_len < 0 || max_len < min_len)
        throw DomainError("bad array length range");
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    VarDomain d;
    d.type_ = Type::IntArray;
    d.min_len_ = min_len;
    d.max_len_ = max_len;
    for (Int len = min_len; len <= max_len; ++len)
        d.size_ = add_sat(d.size_, pow_sat(elements.size(), len));
    d.values_ = std::move(elements);
    return d;
}

Value VarDomain::at(std::uint64_t index) const
{
    if (type_ == Type::Bool)
        return Value(index != 0);
    if (type_ == Type::Int)
        return Value(values_.at(index));
    for (Int len = min_len_; len <= max_len_; ++len) {
        const std::uint64_t bucket = pow_sat(values_.size(), len);
        if (index >= bucket) {
            index -= bucket;
            continue;
        }
        IntArray a(static_cast<std::size_t>(len));
        for (Int pos = len - 1; pos >= 0; --pos) {
            a[static_cast<std::size_t>(pos)] = values_[index % values_.size()];
            index /= values_.size();
        }
        return Value(std::move(a));
    }
    throw std::out_of_range("array domain index");
}

namespace {

std::vector<Int> int_list(const nlohmann::json& j, const std::string& what)
{
    if (!j.is_array())
        throw DomainError(what + " must be a list of integers");
    std::vector<Int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer())
            throw DomainError(what + " must be a list of integers");
        out.push_back(v.get<Int>());
    }
    return out;
}

std::pair<Int, Int> int_pair(const nlohmann::json& j, const std::string& what)
{
    auto v = int_list(j, what);
    if (v.size() != 2)
        throw DomainError(what + " must be [lo, hi]");
    return {v[0], v[1]};
}

VarDomain parse_var(const std::string& name, const nlohmann::json& j)
{
    if (!j.is_object())
        throw DomainError("domain of '" + name + "' must be an object");
    if (j.contains("lenRange")) {
        auto [lo, hi] = int_pair(j["lenRange"], name + ".lenRange");
        std::vector<Int> elems;
        if (j.contains("elemRange")) {
            auto [elo, ehi] = int_pair(j["elemRange"], name + ".elemRange");
            for (Int v = elo; v <= ehi; ++v)
                elems.push_back(v);
        } else if (j.contains("elemSet")) {
            elems = int_list(j["elemSet"], name + ".elemSet");
        } else {
            throw DomainError("array '" + name + "' needs elemRange or elemSet");
        }
        return VarDomain::arrays(lo, hi, std::move(elems));
    }
    if (j.contains("range")) {
        auto [lo, hi] = int_pair(j["range"], name + ".range");
        return VarDomain::range(lo, hi);
    }
    if (j.contains("set")) {
        const auto& s = j["set"];
        if (s.is_array() && !s.empty() && s[0].is_boolean())
            return VarDomain::booleans();
        return VarDomain::ints(int_list(s, name + ".set"));
    }
    if (j.contains("bool"))
        return VarDomain::booleans();
    throw DomainError("domain of '" + name + "' needs range, set, bool or lenRange");
}

} // namespace

DomainSpec parse_domain(std::string_view json_text, const std::filesystem::path& base_dir)
{
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("malformed domain JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vars") || !j["vars"].is_object())
        throw DomainError("domain needs a \"vars\" object");
    DomainSpec spec;
    for (const auto& [name, v] : j["vars"].items())
        spec.vars.emplace_back(name, parse_var(name, nlohmann::json(v)));
    if (j.contains("filter")) {
        if (!j["filter"].is_string())
            throw DomainError("\"filter\" must be a predicate string");
        spec.filter_text = j["filter"].get<std::string>();
        try {
            spec.filter = lang::parse_predicate(spec.filter_text);
        } catch (const std::exception& e) {
            throw DomainError(std::string("bad filter: ") + e.what());
        }
    }
    if (j.contains("cap")) {
        if (!j["cap"].is_number_unsigned() && !j["cap"].is_number_integer())
            throw DomainError("\"cap\" must be a non-negative integer");
        spec.cap = j["cap"].get<std::uint64_t>();
    }
    if (j.contains("reference")) {
        const auto& r = j["reference"];
        if (!r.is_object() || !r.contains("function") || !r["function"].is_string())
            throw DomainError("\"reference\" needs a \"function\" name");
        ReferenceFunction ref;
        ref.function = r["function"].get<std::string>();
        if (r.contains("file")) {
            std::filesystem::path p = r["file"].get<std::string>();
            ref.file = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
        }
        spec.reference = std::move(ref);
    }
    return spec;
}

DomainSpec load_domain(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot read domain file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_domain(ss.str(), path.parent_path());
}

BoundDomain::BoundDomain(const DomainSpec& spec, const lang::AnnotatedProgram& program, const lang::FunctionDef& f)
    : program_(&program), filter_(spec.filter)
{
    auto find = [&](std::string_view name) -> const VarDomain* {
        for (const auto& [n, d] : spec.vars)
            if (n == name)
                return &d;
        return nullptr;
    };
    for (const auto& p : f.params) {
        const VarDomain* d = find(p.name);
        if (!d)
            throw DomainError("no domain for input '" + p.name + "'");
        if (d->type() != p.type)
            throw DomainError("domain of '" + p.name + "' is " + std::string(to_string(d->type())) + ", parameter is " +
                              std::string(to_string(p.type)));
        inputs_.emplace_back(p.name, *d);
    }
    for (const auto& [name, d] : spec.vars) {
        if (f.find_param(name))
            continue;
        if (name == lang::return_value_name && d.type() != f.return_type)
            throw DomainError("domain of 'rv' is " + std::string(to_string(d.type())) + ", function returns " +
                              std::string(to_string(f.return_type)));
        outputs_.emplace_back(name, d);
        output_names_.push_back(name);
    }
    for (const auto& [n, d] : inputs_)
        input_count_ = mul_sat(input_count_, d.size());
    for (const auto& [n, d] : outputs_)
        output_count_ = mul_sat(output_count_, d.size());
    predicted_ = mul_sat(input_count_, output_count_);
    if (predicted_ > spec.cap)
        throw DomainTooLarge(predicted_, spec.cap);
}

Bindings BoundDomain::decode(const std::vector<std::pair<std::string, VarDomain>>& vars, std::uint64_t index)
{
    // Last variable varies fastest.
    std::vector<std::uint64_t> digits(vars.size());
    for (std::size_t k = vars.size(); k-- > 0;) {
        digits[k] = index % vars[k].second.size();
        index /= vars[k].second.size();
    }
    Bindings out;
    for (std::size_t k = 0; k < vars.size(); ++k)
        out.set(vars[k].first, vars[k].second.at(digits[k]));
    return out;
}

Bindings BoundDomain::input_at(std::uint64_t index) const { return decode(inputs_, index); }
Bindings BoundDomain::output_at(std::uint64_t index) const { return decode(outputs_, index); }

bool BoundDomain::accepts(const Bindings& input) const
{
    if (!filter_)
        return true;
    return eval::eval_predicate(*filter_, eval::Env(*program_, input)).is_true();
}

bool enumerate(const BoundDomain& domain, const BehaviorVisitor& visit, std::uint64_t first, std::uint64_t last)
{
    if (domain.predicted_count() == 0)
        return true;
    last = std::min(last, domain.input_count());
    for (std::uint64_t i = first; i < last; ++i) {
        const Bindings input = domain.input_at(i);
        if (!domain.accepts(input))
            continue;
        for (std::uint64_t o = 0; o < domain.output_count(); ++o)
            if (!visit(input, domain.output_at(o)))
                return false;
    }
    return true;
}

} // namespace speccheck::accuracy
