#pragma once
// Plain-text expression syntax for the CLI and golden tests, e.g.
//
//     q1^2*p3 - 2/3*r^-1 + a1*hbar^2
//
// Products use '*', exponents use '^' (negative allowed on r and on named
// parameters, not on q_i/p_i), and '/' is only valid inside a rational
// literal like 2/3.  Any identifier other than q1..q3, p1..p3, r is a
// formal parameter.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gphase/expr.hpp>

namespace gphase {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")") {}
};

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view s) : s_(s) {}

    PhaseExpr parse() {
        PhaseExpr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected trailing input '" + std::string(s_.substr(pos_)) + "'",
                             pos_);
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    PhaseExpr expr() {
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        PhaseExpr acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else break;
        }
        return acc;
    }

    PhaseExpr term() {
        PhaseExpr acc = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc *= factor();
            } else if (c == '/') {
                throw ParseError("division is only supported inside rational literals "
                                 "like 2/3", pos_);
            } else break;
        }
        return acc;
    }

    PhaseExpr factor() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            PhaseExpr inner = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return maybe_pow_expr(inner);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return maybe_pow_expr(number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return symbol();
        throw ParseError(std::string("expected a factor, found '") + c + "'", pos_);
    }

    PhaseExpr maybe_pow_expr(const PhaseExpr& base) {
        if (!eat('^')) return base;
        int e = signed_int();
        if (e < 0)
            throw ParseError("negative exponents are only supported on r and parameters",
                             pos_);
        return base.pow(e);
    }

    PhaseExpr number() {
        Rational num(read_digits());
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == '/' && pos_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(next_nonspace(pos_ + 1)))) {
            ++pos_;
            skip_ws();
            Rational den(read_digits());
            if (den == 0) throw ParseError("zero denominator", pos_);
            num /= den;
        }
        return PhaseExpr::rational(num);
    }

    char next_nonspace(std::size_t i) const {
        while (i < s_.size() && std::isspace(static_cast<unsigned char>(s_[i]))) ++i;
        return i < s_.size() ? s_[i] : '\0';
    }

    std::string read_digits() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected digits", pos_);
        return std::string(s_.substr(start, pos_ - start));
    }

    int signed_int() {
        skip_ws();
        bool neg = eat('-');
        std::string d = read_digits();
        if (d.size() > 4) throw ParseError("exponent out of range", pos_);
        int v = std::stoi(d);
        return neg ? -v : v;
    }

    PhaseExpr symbol() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        std::string name(s_.substr(start, pos_ - start));

        if (name == "r") {
            int e = eat('^') ? signed_int() : 1;
            return PhaseExpr::r_power(e);
        }
        if (name.size() >= 2 && (name[0] == 'q' || name[0] == 'p') &&
            std::isdigit(static_cast<unsigned char>(name[1]))) {
            if (name.size() != 2 || name[1] < '1' || name[1] > '3')
                throw ParseError("unknown phase-space variable '" + name +
                                 "' (use q1..q3, p1..p3)", start);
            int axis = name[1] - '0';
            PhaseExpr base = name[0] == 'q' ? PhaseExpr::q(axis) : PhaseExpr::p(axis);
            return maybe_pow_expr(base);
        }
        int e = eat('^') ? signed_int() : 1;
        return PhaseExpr::param(name, e);
    }
};

} // namespace detail

inline PhaseExpr parse_expr(std::string_view text) {
    return detail::ExprParser(text).parse();
}

} // namespace gphase
