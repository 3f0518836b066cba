#pragma once

#include "speccheck/lang/source.hpp"
#include "speccheck/lang/value.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace speccheck::lang {

enum class TokenKind {
    Keyword,
    Ident,
    IntLit,
    ArrayLit, // `{1,2,3}` or a string literal inside a behavior block
    Op,
    Semi,
    Annotation, // @pre, @post, @behavior
    End,
};

std::string_view to_string(TokenKind k) noexcept;

struct Token {
    TokenKind kind = TokenKind::End;
    // Canonical spelling: unicode operators are normalised to their ASCII
    // synonyms (`≤` -> `<=`, `∀` -> `forall`, ...).
    std::string lexeme;
    Int int_value = 0;
    IntArray codes;
    SourceLoc loc;
    std::size_t end = 0; // one past the last byte

    [[nodiscard]] bool is(TokenKind k, std::string_view text) const noexcept
    {
        return kind == k && lexeme == text;
    }
    [[nodiscard]] bool is_op(std::string_view text) const noexcept { return is(TokenKind::Op, text); }
    [[nodiscard]] bool is_keyword(std::string_view text) const noexcept
    {
        return is(TokenKind::Keyword, text);
    }
    [[nodiscard]] std::string describe() const;
};

[[nodiscard]] bool is_keyword(std::string_view word) noexcept;

// Character code a behavior string literal maps `c` to (`N` is newline).
[[nodiscard]] Int behavior_char_code(unsigned char c) noexcept;

// Throws LexError on an illegal character or an unterminated literal.
[[nodiscard]] std::vector<Token> tokenize(std::string_view source);

} // namespace speccheck::lang
