#pragma once

#include <cctype>
#include <string>

#include "lsv/errors.hpp"
#include "lsv/ratfun.hpp"

namespace lsv {

/// Recursive-descent parser for rational-function strings over the variable
/// "e": integer literals, '+', '-', '*', '/', '^' with integer exponents, and
/// parentheses. Accepts everything str() produces (and more), exactly.
class RatFunParser {
public:
    explicit RatFunParser(const std::string& text) : s_(text) {}

    RatFun parse() {
        RatFun v = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return v;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    RatFun expr() {
        RatFun v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }

    RatFun term() {
        RatFun v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                RatFun d = unary();
                if (d.is_zero()) throw ParseError("division by zero", pos_);
                v /= d;
            } else {
                return v;
            }
        }
    }

    RatFun unary() {
        int sign = 1;
        for (;;) {
            if (eat('-'))
                sign = -sign;
            else if (eat('+'))
                ;
            else
                break;
        }
        RatFun v = primary();
        return sign < 0 ? -v : v;
    }

    RatFun primary() {
        RatFun base = atom();
        if (eat('^')) {
            long long k = integer();
            bool neg = k < 0;
            if (neg) {
                if (base.is_zero()) throw ParseError("zero to a negative power", pos_);
                base = base.inv();
                k = -k;
            }
            RatFun r(1);
            for (long long i = 0; i < k; ++i) r *= base;
            return r;
        }
        return base;
    }

    RatFun atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            RatFun v = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return v;
        }
        if (c == 'e') {
            ++pos_;
            return RatFun::epsilon();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RatFun(IntPoly(BigInt(s_.substr(start, pos_ - start))));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    long long integer() {
        skip_ws();
        int sign = 1;
        if (eat('-')) sign = -1;
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("expected integer", pos_);
        return sign * std::stoll(s_.substr(start, pos_ - start));
    }
};

inline RatFun parse_ratfun(const std::string& text) { return RatFunParser(text).parse(); }

} // namespace lsv
