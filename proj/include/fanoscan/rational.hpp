#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "fanoscan/error.hpp"

namespace fanoscan {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value) : value_(value) {}
    Rational(const BigInt& value) : value_(value) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) {
            throw Error(Errc::invalid_input, "zero denominator");
        }
        value_ = den < 0 ? Impl(BigInt(-num), BigInt(-den)) : Impl(num, den);
    }

    BigInt numerator() const { return boost::multiprecision::numerator(value_); }
    BigInt denominator() const { return boost::multiprecision::denominator(value_); }

    bool is_integer() const { return denominator() == 1; }
    bool is_zero() const { return value_ == 0; }
    int sign() const { return value_.sign(); }

    BigInt floor() const {
        BigInt num = numerator();
        BigInt den = denominator();
        BigInt quot = num / den;
        if (num % den != 0 && num < 0) {
            --quot;
        }
        return quot;
    }

    BigInt ceil() const { return -(-*this).floor(); }

    /// "num/den", or the bare integer when the denominator is 1.
    std::string to_string() const {
        if (is_integer()) {
            return numerator().str();
        }
        return numerator().str() + "/" + denominator().str();
    }

    /// Accepts "a", "a/b" and finite decimals "a.b", each with an optional sign.
    static Rational parse(std::string_view text);

    Rational operator-() const {
        Rational out;
        out.value_ = -value_;
        return out;
    }

    Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
    Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
    Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
    Rational& operator/=(const Rational& rhs) {
        if (rhs.is_zero()) {
            throw Error(Errc::invalid_input, "division by zero");
        }
        value_ /= rhs.value_;
        return *this;
    }

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

    friend bool operator==(const Rational& lhs, const Rational& rhs) { return lhs.value_ == rhs.value_; }
    friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
        if (lhs.value_ < rhs.value_) return std::strong_ordering::less;
        if (lhs.value_ > rhs.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& value) {
        return os << value.to_string();
    }

private:
    using Impl = boost::multiprecision::cpp_rational;
    Impl value_{0};
};

/// Checked narrowing for values that index loops or small tables.
inline std::int64_t to_int64(const BigInt& value) {
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
        throw Error(Errc::out_of_range, value.str() + " does not fit in 64 bits");
    }
    return static_cast<std::int64_t>(value);
}

namespace detail {

inline BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty()) {
        throw Error(Errc::parse_error, "expected digits in '" + std::string(whole) + "'");
    }
    BigInt out = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') {
            throw Error(Errc::parse_error, "unexpected character in '" + std::string(whole) + "'");
        }
        out = out * 10 + (c - '0');
    }
    return out;
}

} // namespace detail

inline Rational Rational::parse(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational out;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        BigInt num = detail::parse_integer(body.substr(0, slash), text);
        BigInt den = detail::parse_integer(body.substr(slash + 1), text);
        if (den == 0) {
            throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
        }
        out = Rational(num, den);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view frac = body.substr(dot + 1);
        BigInt whole = dot == 0 ? BigInt(0) : detail::parse_integer(body.substr(0, dot), text);
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            scale *= 10;
        }
        BigInt part = detail::parse_integer(frac, text);
        out = Rational(whole * scale + part, scale);
    } else {
        out = Rational(detail::parse_integer(body, text));
    }
    return negative ? -out : out;
}

} // namespace fanoscan
