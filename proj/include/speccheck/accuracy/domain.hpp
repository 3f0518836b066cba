#pragma once

#include "speccheck/lang/ast.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace speccheck::accuracy {

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainTooLarge : public std::runtime_error {
public:
    DomainTooLarge(std::uint64_t count, std::uint64_t cap)
        : std::runtime_error("domain has " + std::to_string(count) + " behaviors, cap is " + std::to_string(cap)),
          count_(count), cap_(cap)
    {
    }
    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t count_;
    std::uint64_t cap_;
};

// Finite value set of one variable. Values are addressed by index in a
// fixed order: ints ascending, booleans false then true, arrays by length
// then lexicographically.
class VarDomain {
public:
    static VarDomain ints(std::vector<Int> values);
    static VarDomain range(Int lo, Int hi);
    static VarDomain booleans();
    static VarDomain arrays(Int min_len, Int max_len, std::vector<Int> elements);

    [[nodiscard]] Type type() const noexcept { return type_; }
    // Saturates at UINT64_MAX.
    [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
    [[nodiscard]] Value at(std::uint64_t index) const;

private:
    Type type_ = Type::Int;
    std::vector<Int> values_; // ints, or array elements
    Int min_len_ = 0;
    Int max_len_ = 0;
    std::uint64_t size_ = 0;
};

struct ReferenceFunction {
    // Source file; empty means the program under check.
    std::filesystem::path file;
    std::string function;
};

struct DomainSpec {
    std::vector<std::pair<std::string, VarDomain>> vars;
    std::optional<lang::Expr> filter;
    std::string filter_text;
    std::uint64_t cap = 10'000'000;
    std::optional<ReferenceFunction> reference;
};

// Parses the JSON domain format. Relative reference paths resolve against
// `base_dir`. Throws DomainError.
[[nodiscard]] DomainSpec parse_domain(std::string_view json_text, const std::filesystem::path& base_dir = {});
[[nodiscard]] DomainSpec load_domain(const std::filesystem::path& path);

// A domain matched against a function: parameters are inputs, every other
// variable is an output.
class BoundDomain {
public:
    // Throws DomainError when a parameter has no domain or types disagree,
    // DomainTooLarge when the unfiltered product exceeds the cap.
    BoundDomain(const DomainSpec& spec, const lang::AnnotatedProgram& program, const lang::FunctionDef& f);

    // Unfiltered number of (input, output) behaviors.
    [[nodiscard]] std::uint64_t predicted_count() const noexcept { return predicted_; }
    [[nodiscard]] std::uint64_t input_count() const noexcept { return input_count_; }
    [[nodiscard]] std::uint64_t output_count() const noexcept { return output_count_; }

    [[nodiscard]] Bindings input_at(std::uint64_t index) const;
    [[nodiscard]] Bindings output_at(std::uint64_t index) const;
    // Filter verdict for an input; Undefined rejects.
    [[nodiscard]] bool accepts(const Bindings& input) const;

    [[nodiscard]] const std::vector<std::string>& output_names() const noexcept { return output_names_; }

private:
    const lang::AnnotatedProgram* program_;
    std::vector<std::pair<std::string, VarDomain>> inputs_;
    std::vector<std::pair<std::string, VarDomain>> outputs_;
    std::vector<std::string> output_names_;
    std::optional<lang::Expr> filter_;
    std::uint64_t input_count_ = 1;
    std::uint64_t output_count_ = 1;
    std::uint64_t predicted_ = 0;

    static Bindings decode(const std::vector<std::pair<std::string, VarDomain>>& vars, std::uint64_t index);
};

// Calls `visit(input, output)` for every filtered behavior with input index
// in [first, last), inputs in lexicographic odometer order. Stops early when
// `visit` returns false; returns false in that case.
using BehaviorVisitor = std::function<bool(const Bindings& input, const Bindings& output)>;
bool enumerate(const BoundDomain& domain, const BehaviorVisitor& visit, std::uint64_t first = 0,
               std::uint64_t last = UINT64_MAX);

} // namespace speccheck::accuracy
