#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fanoscan/error.hpp"
#include "fanoscan/rational.hpp"

namespace fanoscan {

/// Smallest nonnegative representative of x modulo r.
inline std::int64_t residue(std::int64_t x, std::int64_t r) {
    if (r <= 0) {
        throw Error(Errc::invalid_modulus, "modulus must be >= 1, got " + std::to_string(r));
    }
    std::int64_t out = x % r;
    return out < 0 ? out + r : out;
}

/// A point of type 1/r(1,-1,b) in Reid's basket.
class OrbifoldPoint {
public:
    OrbifoldPoint(int r, int b) : r_(r), b_(b) {
        if (r < 2) {
            throw Error(Errc::invalid_point, "(" + std::to_string(r) + "," + std::to_string(b) +
                                                 ") violates r >= 2");
        }
        if (b < 1) {
            throw Error(Errc::invalid_point, "(" + std::to_string(r) + "," + std::to_string(b) +
                                                 ") violates b >= 1");
        }
        if (2 * b > r) {
            throw Error(Errc::invalid_point, "(" + std::to_string(r) + "," + std::to_string(b) +
                                                 ") violates 2b <= r");
        }
        if (std::gcd(r, b) != 1) {
            throw Error(Errc::invalid_point, "(" + std::to_string(r) + "," + std::to_string(b) +
                                                 ") violates gcd(r, b) = 1");
        }
    }

    int r() const noexcept { return r_; }
    int b() const noexcept { return b_; }

    std::string to_string() const {
        return "(" + std::to_string(r_) + "," + std::to_string(b_) + ")";
    }

    friend auto operator<=>(const OrbifoldPoint&, const OrbifoldPoint&) = default;

private:
    int r_;
    int b_;
};

/// The orders r of a basket, with multiplicity, kept sorted ascending.
class RMultiset {
public:
    RMultiset() = default;
    explicit RMultiset(std::vector<int> entries) : entries_(std::move(entries)) {
        for (int r : entries_) {
            if (r < 2) {
                throw Error(Errc::invalid_input, "r-multiset entry " + std::to_string(r) + " violates r >= 2");
            }
        }
        std::sort(entries_.begin(), entries_.end());
    }

    std::span<const int> entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    /// Multiplicity-aware containment: {2,2} is inside {2,2,3} but not {2,3}.
    bool contains(const RMultiset& sub) const {
        return std::includes(entries_.begin(), entries_.end(), sub.entries_.begin(), sub.entries_.end());
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(entries_[i]);
        }
        return out + "]";
    }

    friend auto operator<=>(const RMultiset&, const RMultiset&) = default;

private:
    std::vector<int> entries_;
};

class Basket {
public:
    Basket() = default;
    explicit Basket(std::vector<OrbifoldPoint> points) : points_(std::move(points)) {
        std::sort(points_.begin(), points_.end());
    }

    std::span<const OrbifoldPoint> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }

    RMultiset r_multiset() const {
        std::vector<int> rs;
        rs.reserve(points_.size());
        for (const auto& p : points_) rs.push_back(p.r());
        return RMultiset(std::move(rs));
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (i) out += ",";
            out += points_[i].to_string();
        }
        return out + "]";
    }

    friend auto operator<=>(const Basket&, const Basket&) = default;

private:
    std::vector<OrbifoldPoint> points_;
};

/// lcm of the entries; 1 for the empty multiset.
inline BigInt gorenstein_index(const RMultiset& rs) {
    BigInt out = 1;
    for (int r : rs.entries()) {
        out = boost::multiprecision::lcm(out, BigInt(r));
    }
    return out;
}

/// Sum of (r - 1/r) over the entries.
inline Rational defect_sum(const RMultiset& rs) {
    Rational out;
    for (int r : rs.entries()) {
        out += Rational(BigInt(r) * r - 1, BigInt(r));
    }
    return out;
}

/// Sum of b(r-b)/(2r) over the points.
inline Rational half_point_sum(const Basket& basket) {
    Rational out;
    for (const auto& p : basket.points()) {
        out += Rational(BigInt(p.b()) * (p.r() - p.b()), BigInt(2 * p.r()));
    }
    return out;
}

namespace detail {

class TextCursor {
public:
    explicit TextCursor(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c) {
        if (!peek(c)) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    int integer() {
        skip_space();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view digits = text_.substr(start, pos_ - start);
        if (digits.empty() || digits == "-") fail("expected an integer");
        if (digits.size() > 9) fail("integer too large");
        return std::stoi(std::string(digits));
    }

    void finish() {
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Errc::parse_error, what + " at offset " + std::to_string(pos_) + " in '" +
                                           std::string(text_) + "'");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses "[(r,b),(r,b),...]". Points may appear in any order; the result is canonical.
inline Basket parse_basket(std::string_view text) {
    detail::TextCursor cur(text);
    std::vector<OrbifoldPoint> points;
    cur.expect('[');
    if (!cur.peek(']')) {
        do {
            cur.expect('(');
            int r = cur.integer();
            cur.expect(',');
            int b = cur.integer();
            cur.expect(')');
            points.emplace_back(r, b);
            if (!cur.peek(',')) break;
            cur.expect(',');
        } while (true);
    }
    cur.expect(']');
    cur.finish();
    return Basket(std::move(points));
}

/// Parses "[r,r,...]".
inline RMultiset parse_r_multiset(std::string_view text) {
    detail::TextCursor cur(text);
    std::vector<int> rs;
    cur.expect('[');
    if (!cur.peek(']')) {
        do {
            rs.push_back(cur.integer());
            if (!cur.peek(',')) break;
            cur.expect(',');
        } while (true);
    }
    cur.expect(']');
    cur.finish();
    return RMultiset(std::move(rs));
}

} // namespace fanoscan
