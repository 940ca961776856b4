#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pdiff {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with positive denominator.
/// All arithmetic is exact; there is no floating-point path anywhere.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long long n) : v_(n) {}
    Rat(const BigInt& n) : v_(n) {}
    Rat(const BigInt& num, const BigInt& den);

    /// Accepts "123", "-123" and "123/456"; rejects anything else
    /// (in particular decimal literals).
    static Rat parse(std::string_view text);

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return den() == 1; }
    /// Non-negative integer.
    bool is_natural() const { return is_integer() && num() >= 0; }

    Rat operator+(const Rat& o) const { return Rat(v_ + o.v_); }
    Rat operator-(const Rat& o) const { return Rat(v_ - o.v_); }
    Rat operator*(const Rat& o) const { return Rat(v_ * o.v_); }
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return Rat(-v_); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    std::strong_ordering operator<=>(const Rat& o) const {
        if (v_ < o.v_) return std::strong_ordering::less;
        if (v_ > o.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// "n" for integers, "n/d" otherwise.
    std::string str() const;

private:
    using Impl = boost::multiprecision::cpp_rational;
    explicit Rat(Impl v) : v_(std::move(v)) {}
    Impl v_;
};

}  // namespace pdiff
