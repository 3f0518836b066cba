#include "speccheck/lang/value.hpp"

#include <algorithm>

namespace speccheck {

std::string_view to_string(Type t) noexcept
{
    switch (t) {
    case Type::Int:
        return "int";
    case Type::Bool:
        return "bool";
    case Type::IntArray:
        return "int[]";
    }
    return "?";
}

Type Value::type() const noexcept
{
    if (is_int())
        return Type::Int;
    if (is_bool())
        return Type::Bool;
    return Type::IntArray;
}

std::string Value::to_source() const
{
    if (is_int())
        return std::to_string(as_int());
    if (is_bool())
        return as_bool() ? "true" : "false";
    std::string out = "{";
    const auto& arr = as_array();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(arr[i]);
    }
    out += "}";
    return out;
}

Bindings::Bindings(std::initializer_list<Entry> init)
{
    for (const auto& [name, v] : init)
        set(name, v);
}

void Bindings::set(std::string_view name, Value v)
{
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const Entry& e) { return e.first == name; });
    if (it != entries_.end())
        it->second = std::move(v);
    else
        entries_.emplace_back(std::string(name), std::move(v));
}

const Value* Bindings::find(std::string_view name) const
{
    for (const auto& e : entries_)
        if (e.first == name)
            return &e.second;
    return nullptr;
}

std::string Bindings::to_source() const
{
    std::string out = "{";
    bool first = true;
    for (const auto& [name, v] : entries_) {
        if (!first)
            out += ", ";
        first = false;
        out += name;
        out += "=";
        out += v.to_source();
    }
    out += "}";
    return out;
}

} // namespace speccheck
