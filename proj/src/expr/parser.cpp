// Recursive-descent parser for scalar field expressions.
//
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | factor
//   factor   := base ('^' exponent)?
//   exponent := '-' exponent | base ('^' exponent)?     (must fold to a constant)
//   base     := number | ident | ident '(' expr ')' | '(' expr ')'

#include "pw/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace pw::expr {

namespace {

constexpr std::array<std::string_view, 5> kFunctions = {"sin", "cos", "exp", "log", "sqrt"};

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string_view text;
    double number = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        std::size_t i = 0;
        while (true) {
            while (i < src_.size() && std::isspace(static_cast<unsigned char>(src_[i])))
                ++i;
            if (i >= src_.size()) {
                out.push_back({Tok::End, src_.size(), {}});
                return out;
            }
            const char c = src_[i];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                out.push_back(number(i));
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i + 1;
                while (j < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                    ++j;
                out.push_back({Tok::Ident, i, src_.substr(i, j - i)});
                i = j;
                continue;
            }
            Tok kind;
            switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            default:
                throw ParseError("syntax error at position " + std::to_string(i) + ": unexpected character '" +
                                     std::string(1, c) + "'",
                                 i);
            }
            out.push_back({kind, i, src_.substr(i, 1)});
            ++i;
        }
    }

private:
    Token number(std::size_t& i)
    {
        const std::size_t start = i;
        auto digits = [&] {
            std::size_t n = 0;
            while (i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]))) {
                ++i;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (i < src_.size() && src_[i] == '.') {
            ++i;
            n += digits();
        }
        if (n == 0)
            throw ParseError("syntax error at position " + std::to_string(start) + ": malformed number", start);
        if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
            std::size_t save = i;
            ++i;
            if (i < src_.size() && (src_[i] == '+' || src_[i] == '-'))
                ++i;
            if (digits() == 0)
                i = save; // not an exponent; leave 'e' for the identifier rule
        }
        Token t{Tok::Number, start, src_.substr(start, i - start)};
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
            throw ParseError("syntax error at position " + std::to_string(start) + ": number out of range", start);
        return t;
    }

    std::string_view src_;
};

class Parser {
public:
    Parser(std::vector<Token> toks, const std::vector<std::string>& vars) : toks_(std::move(toks)), vars_(vars) {}

    ScalarField parse_all()
    {
        ScalarField e = expr();
        if (peek().kind != Tok::End)
            fail(peek(), "unexpected '" + std::string(peek().text) + "'");
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    [[noreturn]] static void fail(const Token& t, const std::string& what)
    {
        throw ParseError("syntax error at position " + std::to_string(t.pos) + ": " + what, t.pos);
    }

    ScalarField expr()
    {
        ScalarField lhs = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const bool plus = take().kind == Tok::Plus;
            ScalarField rhs = term();
            lhs = plus ? lhs + rhs : lhs - rhs;
        }
        return lhs;
    }

    ScalarField term()
    {
        ScalarField lhs = unary();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const bool mul = take().kind == Tok::Star;
            ScalarField rhs = unary();
            lhs = mul ? lhs * rhs : lhs / rhs;
        }
        return lhs;
    }

    ScalarField unary()
    {
        if (peek().kind == Tok::Minus) {
            take();
            return -unary();
        }
        return factor();
    }

    ScalarField factor()
    {
        ScalarField b = base();
        if (peek().kind == Tok::Caret) {
            take();
            return pow(b, exponent());
        }
        return b;
    }

    double exponent()
    {
        const Token& start = peek();
        if (start.kind == Tok::Minus) {
            take();
            return -exponent();
        }
        ScalarField b = base();
        double value;
        if (auto c = b.constant_value())
            value = *c;
        else
            fail(start, "exponent must be a constant");
        if (peek().kind == Tok::Caret) {
            take();
            value = std::pow(value, exponent());
        }
        return value;
    }

    ScalarField base()
    {
        const Token& t = take();
        switch (t.kind) {
        case Tok::Number:
            return ScalarField::constant(t.number, vars_);
        case Tok::LParen: {
            ScalarField e = expr();
            expect(Tok::RParen, ")");
            return e;
        }
        case Tok::Ident: {
            const bool call = peek().kind == Tok::LParen;
            if (call && std::find(kFunctions.begin(), kFunctions.end(), t.text) != kFunctions.end()) {
                take();
                ScalarField arg = expr();
                expect(Tok::RParen, ")");
                if (t.text == "sin")
                    return sin(arg);
                if (t.text == "cos")
                    return cos(arg);
                if (t.text == "exp")
                    return exp(arg);
                if (t.text == "log")
                    return log(arg);
                return sqrt(arg);
            }
            if (!call && std::find(vars_.begin(), vars_.end(), t.text) != vars_.end())
                return ScalarField::coordinate(std::string(t.text), vars_);
            throw UnknownIdentifierError(std::string(t.text), t.pos);
        }
        case Tok::End:
            fail(t, "unexpected end of input");
        default:
            fail(t, "unexpected '" + std::string(t.text) + "'");
        }
    }

    void expect(Tok kind, const char* what)
    {
        if (peek().kind != kind)
            fail(peek(), std::string("expected '") + what + "'");
        take();
    }

    std::vector<Token> toks_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

} // namespace

ScalarField parse(std::string_view text, std::vector<std::string> vars)
{
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw InvalidArgumentError("duplicate coordinate name '" + vars[i] + "'");
    Parser p(Lexer(text).run(), vars);
    return p.parse_all().with_vars(std::move(vars));
}

} // namespace pw::expr
