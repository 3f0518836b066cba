#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace speccheck::lang {

struct SourceLoc {
    int line = 0;
    int column = 0;
    std::size_t offset = 0;

    [[nodiscard]] std::string to_string() const
    {
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

// Byte range [begin, end) into the source text.
struct SourceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Source positions carried by AST nodes. They never take part in
// structural equality, so printed-then-reparsed trees compare equal.
struct Provenance {
    SourceLoc loc;

    friend bool operator==(const Provenance&, const Provenance&) noexcept { return true; }
};

class LexError : public std::runtime_error {
public:
    LexError(SourceLoc loc, const std::string& message)
        : std::runtime_error(loc.to_string() + ": lex error: " + message), loc_(loc), message_(message)
    {
    }
    [[nodiscard]] SourceLoc loc() const noexcept { return loc_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    SourceLoc loc_;
    std::string message_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLoc loc, const std::string& expected, const std::string& found)
        : std::runtime_error(loc.to_string() + ": parse error: expected " + expected + ", found " + found),
          loc_(loc), expected_(expected), found_(found)
    {
    }
    [[nodiscard]] SourceLoc loc() const noexcept { return loc_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }
    [[nodiscard]] const std::string& found() const noexcept { return found_; }

private:
    SourceLoc loc_;
    std::string expected_;
    std::string found_;
};

} // namespace speccheck::lang
