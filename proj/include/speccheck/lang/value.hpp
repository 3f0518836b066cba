#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace speccheck {

using Int = std::int64_t;
using IntArray = std::vector<Int>;

enum class Type { Int, Bool, IntArray };

std::string_view to_string(Type t) noexcept;

// Runtime datum. Strings are int arrays of character codes.
class Value {
public:
    Value() = default;
    Value(Int v) : data_(v) {}
    Value(int v) : data_(static_cast<Int>(v)) {}
    Value(bool v) : data_(v) {}
    Value(IntArray v) : data_(std::move(v)) {}

    [[nodiscard]] Type type() const noexcept;
    [[nodiscard]] bool is_int() const noexcept { return std::holds_alternative<Int>(data_); }
    [[nodiscard]] bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
    [[nodiscard]] bool is_array() const noexcept { return std::holds_alternative<IntArray>(data_); }

    [[nodiscard]] Int as_int() const { return std::get<Int>(data_); }
    [[nodiscard]] bool as_bool() const { return std::get<bool>(data_); }
    [[nodiscard]] const IntArray& as_array() const { return std::get<IntArray>(data_); }

    // `{1,2,3}`, `-4`, `true`
    [[nodiscard]] std::string to_source() const;

    friend bool operator==(const Value&, const Value&) = default;
    friend auto operator<=>(const Value& a, const Value& b) { return a.data_ <=> b.data_; }

private:
    std::variant<Int, bool, IntArray> data_{Int{0}};
};

// Ordered name -> value list; order is source order (or parameter order).
class Bindings {
public:
    using Entry = std::pair<std::string, Value>;

    Bindings() = default;
    Bindings(std::initializer_list<Entry> init);

    void set(std::string_view name, Value v);
    [[nodiscard]] const Value* find(std::string_view name) const;
    [[nodiscard]] bool contains(std::string_view name) const { return find(name) != nullptr; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    [[nodiscard]] auto begin() const { return entries_.begin(); }
    [[nodiscard]] auto end() const { return entries_.end(); }

    // `{a={1,2}, l=0}`
    [[nodiscard]] std::string to_source() const;

    friend bool operator==(const Bindings&, const Bindings&) = default;
    friend auto operator<=>(const Bindings&, const Bindings&) = default;

private:
    std::vector<Entry> entries_;
};

} // namespace speccheck
