#include "pdiff/rational.hpp"

namespace pdiff {

Rat::Rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0)
        v_ = Impl(-num, -den);
    else
        v_ = Impl(num, den);
}

Rat Rat::operator/(const Rat& o) const {
    if (o.is_zero()) throw std::invalid_argument("rational division by zero");
    return Rat(Impl(v_ / o.v_));
}

Rat Rat::parse(std::string_view text) {
    auto bad = [&]() -> std::invalid_argument {
        return std::invalid_argument("malformed rational literal: '" + std::string(text) + "'");
    };
    size_t i = 0;
    bool neg = false;
    if (i < text.size() && text[i] == '-') { neg = true; ++i; }
    auto digits = [&](BigInt& out) {
        size_t start = i;
        out = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            out = out * 10 + (text[i] - '0');
            ++i;
        }
        return i > start;
    };
    BigInt num;
    if (!digits(num)) throw bad();
    BigInt den = 1;
    if (i < text.size() && text[i] == '/') {
        ++i;
        if (!digits(den) || den == 0) throw bad();
    }
    if (i != text.size()) throw bad();
    if (neg) num = -num;
    return Rat(num, den);
}

std::string Rat::str() const {
    std::string s = num().str();
    if (!is_integer()) {
        s += '/';
        s += den().str();
    }
    return s;
}

}  // namespace pdiff
