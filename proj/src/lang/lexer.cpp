#include "speccheck/lang/lexer.hpp"

#include <array>
#include <cctype>
#include <limits>

namespace speccheck::lang {

std::string_view to_string(TokenKind k) noexcept
{
    switch (k) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLit: return "integer literal";
    case TokenKind::ArrayLit: return "array literal";
    case TokenKind::Op: return "operator";
    case TokenKind::Semi: return "';'";
    case TokenKind::Annotation: return "annotation";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

std::string Token::describe() const
{
    switch (kind) {
    case TokenKind::End:
        return "end of input";
    case TokenKind::ArrayLit:
        return "array literal";
    case TokenKind::Semi:
        return "';'";
    default:
        return "'" + lexeme + "'";
    }
}

namespace {

constexpr std::array keywords{
    std::string_view{"int"},    std::string_view{"bool"},   std::string_view{"boolean"},
    std::string_view{"if"},     std::string_view{"else"},   std::string_view{"while"},
    std::string_view{"break"},  std::string_view{"return"}, std::string_view{"true"},
    std::string_view{"false"},  std::string_view{"forall"}, std::string_view{"exists"},
    std::string_view{"good"},   std::string_view{"bad"},    std::string_view{"dontCare"},
};

struct Unicode {
    std::string_view bytes;
    TokenKind kind;
    std::string_view lexeme;
};

constexpr std::array unicode_ops{
    Unicode{"≤", TokenKind::Op, "<="},          Unicode{"≥", TokenKind::Op, ">="},
    Unicode{"≠", TokenKind::Op, "!="},          Unicode{"∧", TokenKind::Op, "&&"},
    Unicode{"∨", TokenKind::Op, "||"},          Unicode{"¬", TokenKind::Op, "!"},
    Unicode{"⇒", TokenKind::Op, "=>"},          Unicode{"∀", TokenKind::Keyword, "forall"},
    Unicode{"∃", TokenKind::Keyword, "exists"},
};

constexpr std::array two_char_ops{
    std::string_view{".."}, std::string_view{"=="}, std::string_view{"!="}, std::string_view{"<="},
    std::string_view{">="}, std::string_view{"=>"}, std::string_view{"&&"}, std::string_view{"||"},
    std::string_view{"++"}, std::string_view{"--"},
};

constexpr std::string_view single_char_ops = "+-*/%=<>!(){}[],:.";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        while (true) {
            skip_trivia();
            if (pos_ >= src_.size())
                break;
            lex_one();
        }
        Token end;
        end.kind = TokenKind::End;
        end.loc = here();
        end.end = pos_;
        tokens_.push_back(end);
        return std::move(tokens_);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::vector<Token> tokens_;
    // Brace depth at which the innermost @behavior block was opened.
    int depth_ = 0;
    int behavior_depth_ = -1;
    bool behavior_pending_ = false;

    [[nodiscard]] SourceLoc here() const { return SourceLoc{line_, col_, pos_}; }
    [[nodiscard]] char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }
    [[nodiscard]] bool in_behavior() const { return behavior_depth_ >= 0; }

    void advance(std::size_t n = 1)
    {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            const auto c = static_cast<unsigned char>(src_[pos_]);
            if (c == '\n') {
                ++line_;
                col_ = 1;
            } else if ((c & 0xC0) != 0x80) {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip_trivia()
    {
        while (pos_ < src_.size()) {
            const char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n')
                    advance();
            } else if (c == '/' && peek(1) == '*') {
                const auto start = here();
                advance(2);
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/'))
                    advance();
                if (pos_ >= src_.size())
                    throw LexError(start, "unterminated block comment");
                advance(2);
            } else {
                break;
            }
        }
    }

    void push(TokenKind kind, std::string lexeme, SourceLoc loc)
    {
        Token t;
        t.kind = kind;
        t.lexeme = std::move(lexeme);
        t.loc = loc;
        t.end = pos_;
        tokens_.push_back(std::move(t));
    }

    void lex_one()
    {
        const SourceLoc start = here();
        const char c = peek();

        if (c == '@') {
            advance();
            std::string word;
            while (ident_char(peek())) {
                word += peek();
                advance();
            }
            if (word != "pre" && word != "post" && word != "behavior")
                throw LexError(start, "unknown annotation '@" + word + "'");
            if (word == "behavior")
                behavior_pending_ = true;
            push(TokenKind::Annotation, "@" + word, start);
            return;
        }
        if (ident_start(c)) {
            std::string word;
            while (ident_char(peek())) {
                word += peek();
                advance();
            }
            const TokenKind kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Ident;
            push(kind, std::move(word), start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const Int v = lex_digits(start);
            push(TokenKind::IntLit, std::string(src_.substr(start.offset, pos_ - start.offset)), start);
            tokens_.back().int_value = v;
            return;
        }
        if (c == '"') {
            lex_string(start);
            return;
        }
        if (c == ';') {
            advance();
            push(TokenKind::Semi, ";", start);
            return;
        }
        for (const auto& u : unicode_ops) {
            if (src_.substr(pos_, u.bytes.size()) == u.bytes) {
                advance(u.bytes.size());
                push(u.kind, std::string(u.lexeme), start);
                return;
            }
        }
        if (c == '{' && in_behavior() && try_array_literal(start))
            return;
        for (auto op : two_char_ops) {
            if (src_.substr(pos_, 2) == op) {
                advance(2);
                push(TokenKind::Op, std::string(op), start);
                return;
            }
        }
        if (single_char_ops.find(c) != std::string_view::npos) {
            advance();
            if (c == '{') {
                ++depth_;
                if (behavior_pending_) {
                    behavior_pending_ = false;
                    behavior_depth_ = depth_;
                }
            } else if (c == '}') {
                if (depth_ == behavior_depth_)
                    behavior_depth_ = -1;
                --depth_;
            }
            push(TokenKind::Op, std::string(1, c), start);
            return;
        }
        throw LexError(start, std::string("illegal character '") + c + "'");
    }

    Int lex_digits(SourceLoc start)
    {
        Int v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            const Int d = peek() - '0';
            if (v > (std::numeric_limits<Int>::max() - d) / 10)
                throw LexError(start, "integer literal out of range");
            v = v * 10 + d;
            advance();
        }
        return v;
    }

    // `{` directly after `name =` inside a behavior block, where the brace
    // holds only integers: an array value.
    bool try_array_literal(SourceLoc start)
    {
        if (tokens_.size() < 2 || !tokens_.back().is_op("="))
            return false;
        const Token& name = tokens_[tokens_.size() - 2];
        if (name.kind != TokenKind::Ident || name.lexeme == "input" || name.lexeme == "output")
            return false;

        // Scan ahead without consuming.
        std::size_t p = pos_ + 1;
        auto skip_ws = [&] {
            while (p < src_.size() && std::isspace(static_cast<unsigned char>(src_[p])))
                ++p;
        };
        skip_ws();
        if (p < src_.size() && src_[p] == '}') {
            // empty array
        } else {
            while (true) {
                skip_ws();
                if (p < src_.size() && src_[p] == '-')
                    ++p;
                skip_ws();
                if (p >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[p])))
                    return false;
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p])))
                    ++p;
                skip_ws();
                if (p < src_.size() && src_[p] == ',') {
                    ++p;
                    continue;
                }
                if (p < src_.size() && src_[p] == '}')
                    break;
                return false;
            }
        }

        advance(); // '{'
        IntArray codes;
        while (true) {
            skip_trivia();
            if (peek() == '}') {
                advance();
                break;
            }
            bool negative = false;
            if (peek() == '-') {
                negative = true;
                advance();
                skip_trivia();
            }
            const Int v = lex_digits(here());
            codes.push_back(negative ? -v : v);
            skip_trivia();
            if (peek() == ',')
                advance();
        }
        push(TokenKind::ArrayLit, std::string(src_.substr(start.offset, pos_ - start.offset)), start);
        tokens_.back().codes = std::move(codes);
        return true;
    }

    void lex_string(SourceLoc start)
    {
        if (!in_behavior())
            throw LexError(start, "string literals are only allowed inside @behavior blocks");
        advance(); // opening quote
        IntArray codes;
        while (true) {
            if (pos_ >= src_.size() || peek() == '\n')
                throw LexError(start, "unterminated string literal");
            const char c = peek();
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                const char e = peek(1);
                advance(2);
                switch (e) {
                case 'n': codes.push_back(10); break;
                case 't': codes.push_back(9); break;
                case '\\': codes.push_back('\\'); break;
                case '"': codes.push_back('"'); break;
                default: throw LexError(start, std::string("unknown escape '\\") + e + "'");
                }
                continue;
            }
            codes.push_back(behavior_char_code(static_cast<unsigned char>(c)));
            advance();
        }
        push(TokenKind::ArrayLit, std::string(src_.substr(start.offset, pos_ - start.offset)), start);
        tokens_.back().codes = std::move(codes);
    }
};

} // namespace

bool is_keyword(std::string_view word) noexcept
{
    for (auto k : keywords)
        if (k == word)
            return true;
    return false;
}

Int behavior_char_code(unsigned char c) noexcept
{
    return c == 'N' ? Int{10} : Int{c};
}

std::vector<Token> tokenize(std::string_view source)
{
    return Lexer(source).run();
}

} // namespace speccheck::lang
