// Expression language for the Zelevinsky ring; grammar in docs/zelevinsky.ebnf.
#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lzt/glnfq.hpp"

namespace lzt {

struct ZExprError : std::invalid_argument {
    std::size_t pos;
    ZExprError(const std::string& what, std::size_t at)
        : std::invalid_argument(what + " at offset " + std::to_string(at)), pos(at) {}
};

namespace detail {

class ZParser {
public:
    ZParser(const std::string& s, int q) : s_(s), q_(q) {}

    ZElem run() {
        ZElem r = expr();
        skip();
        if (i_ != s_.size()) throw ZExprError("unexpected '" + std::string(1, s_[i_]) + "'", i_);
        return r;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) throw ZExprError(std::string("expected '") + c + "'", i_);
    }
    std::int64_t integer() {
        skip();
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) throw ZExprError("expected an integer", i_);
        return std::stoll(s_.substr(start, i_ - start));
    }
    std::string ident() {
        skip();
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
        return s_.substr(start, i_ - start);
    }

    IrrLabel checked(int n, std::int64_t index, std::size_t at) const {
        const auto all = irreducibles(n, q_);
        if (index < 0 || index >= static_cast<std::int64_t>(all.size()))
            throw ZExprError("no irreducible " + std::to_string(index) + " of GL_" + std::to_string(n), at);
        return all[static_cast<std::size_t>(index)];
    }

    ZElem expr() {
        ZElem r = term();
        for (;;) {
            if (eat('+')) r = r + term();
            else if (eat('-')) r = r - term();
            else return r;
        }
    }
    ZElem term() {
        ZElem r = factor();
        while (eat('*')) r = r * factor();
        return r;
    }
    ZElem factor() {
        skip();
        const std::size_t at = i_;
        if (i_ >= s_.size()) throw ZExprError("unexpected end of input", i_);
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) return integer() * ZElem::one(q_);
        if (eat('(')) {
            ZElem r = expr();
            expect(')');
            return r;
        }
        const std::string id = ident();
        if (id == "one") return ZElem::one(q_);
        if (id == "chi") {
            const auto k = integer();
            if (k < 1 || k > q_ - 1)
                throw ZExprError("no character chi" + std::to_string(k) + " of F_" + std::to_string(q_) + "^x", at);
            return ZElem::irr(checked(1, k - 1, at));
        }
        if (id == "irr") {
            expect('(');
            const auto n = integer();
            expect(',');
            const auto idx = integer();
            expect(')');
            if (n < 0) throw ZExprError("negative grade", at);
            return ZElem::irr(checked(static_cast<int>(n), idx, at));
        }
        if (id == "D") {
            expect('(');
            ZElem r = D_map(expr());
            expect(')');
            return r;
        }
        if (id == "ind") {
            expect('(');
            ZElem r = expr();
            while (eat(',')) r = r * expr();
            expect(')');
            return r;
        }
        if (id == "deriv") {
            expect('(');
            const ZElem x = expr();
            expect(',');
            const auto k = integer();
            expect(')');
            ZElem r(q_);
            for (const auto& [key, v] : x.terms()) {
                if (k > key.first) continue;
                r = r + v * derivative({q_, key.first, key.second}, static_cast<int>(k));
            }
            return r;
        }
        if (id.empty()) throw ZExprError("unexpected '" + std::string(1, s_[i_]) + "'", i_);
        throw ZExprError("unknown name '" + id + "'", at);
    }

    const std::string& s_;
    int q_;
    std::size_t i_ = 0;
};

}  // namespace detail

/// Evaluates an expression over F_q.
inline ZElem eval_zexpr(const std::string& text, int q) {
    if (!num::is_prime(static_cast<std::uint64_t>(q))) throw std::invalid_argument("eval_zexpr: q must be prime");
    return detail::ZParser(text, q).run();
}

}  // namespace lzt
