#include "speccheck/lang/builtins.hpp"

#include <array>

namespace speccheck::lang {

std::optional<BuiltinSignature> find_builtin(std::string_view name) noexcept
{
    static constexpr std::array table{
        BuiltinSignature{"scasize", Type::IntArray, Type::Int},
        BuiltinSignature{"scalpha", Type::Int, Type::Bool},
        BuiltinSignature{"scnum", Type::Int, Type::Bool},
        BuiltinSignature{"scblank", Type::Int, Type::Bool},
    };
    for (const auto& b : table)
        if (b.name == name)
            return b;
    return std::nullopt;
}

} // namespace speccheck::lang
