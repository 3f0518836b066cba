#pragma once

#include "speccheck/lang/value.hpp"

#include <optional>
#include <string_view>

namespace speccheck::lang {

struct BuiltinSignature {
    std::string_view name;
    Type param;
    Type result;
};

// scasize(int[]) -> int, scalpha/scnum/scblank(int) -> bool.
// `a.size` is sugar for scasize(a).
[[nodiscard]] std::optional<BuiltinSignature> find_builtin(std::string_view name) noexcept;

} // namespace speccheck::lang
