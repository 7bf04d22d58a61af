#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "fanoscan/error.hpp"
#include "fanoscan/rational.hpp"

namespace fanoscan {

/// Harder-Narasimhan shape (l, r1) of the tangent sheaf.
struct KmCase {
    int l;
    int r1;

    std::string to_string() const { return "(" + std::to_string(l) + "," + std::to_string(r1) + ")"; }
    friend auto operator<=>(const KmCase&, const KmCase&) = default;
};

inline constexpr std::array<KmCase, 4> km_cases{{{1, 3}, {2, 1}, {2, 2}, {3, 1}}};

inline bool is_km_case(int l, int r1) {
    for (const auto& c : km_cases) {
        if (c.l == l && c.r1 == r1) return true;
    }
    return false;
}

struct KmContext {
    int l = 1;
    int r1 = 3;
    std::optional<std::int64_t> p;  // slope numerator of E_{l-1}; unused for (1,3) and (2,1)
    std::int64_t q = 1;
};

/// The slope coefficient b in c1^3 <= b * c2.c1 evaluated for the given shape,
/// without checking that p is realizable by a filtration. Only positivity of
/// the denominator is enforced.
inline Rational km_coefficient(int l, int r1, std::int64_t p, std::int64_t q) {
    if (!is_km_case(l, r1)) {
        throw Error(Errc::invalid_context, "(l, r1) = (" + std::to_string(l) + "," + std::to_string(r1) +
                                               ") is not one of (1,3), (2,1), (2,2), (3,1)");
    }
    if (l == 1) return Rational(3);
    if (r1 == 1 && l == 2) return Rational(16, 5);

    BigInt P = p;
    BigInt Q = q;
    BigInt den = (l == 2) ? BigInt(P * (4 * Q - 3 * P)) : BigInt(-4 * P * P + 6 * P * Q - Q * Q);
    if (den <= 0) {
        throw Error(Errc::invalid_context, "slope coefficient denominator is not positive for p = " +
                                               std::to_string(p) + ", q = " + std::to_string(q));
    }
    return Rational(4 * Q * Q, den);
}

/// Whether p = q1 + q2 for some integers with 2 <= q2 <= q1 - 1 <= q/2 - 1.
inline bool three_step_filtration_exists(std::int64_t p, std::int64_t q) {
    for (std::int64_t q1 = 3; 2 * q1 <= q; ++q1) {
        std::int64_t q2 = p - q1;
        if (q2 >= 2 && q2 <= q1 - 1) return true;
    }
    return false;
}

/// Kawamata-Miyaoka type coefficient for a validated context.
inline Rational km_bound(const KmContext& ctx) {
    if (!is_km_case(ctx.l, ctx.r1)) {
        throw Error(Errc::invalid_context, "(l, r1) = (" + std::to_string(ctx.l) + "," + std::to_string(ctx.r1) +
                                               ") is not one of (1,3), (2,1), (2,2), (3,1)");
    }
    if (ctx.q < 1) {
        throw Error(Errc::invalid_context, "q must be positive");
    }
    if (ctx.l == 1 || (ctx.l == 2 && ctx.r1 == 1)) {
        return km_coefficient(ctx.l, ctx.r1, 0, ctx.q);
    }
    if (!ctx.p) {
        throw Error(Errc::invalid_context, "p is required for " + KmCase{ctx.l, ctx.r1}.to_string());
    }
    const std::int64_t p = *ctx.p;
    const std::int64_t q = ctx.q;
    if (ctx.l * p <= (ctx.l - 1) * q || p > q - 1) {
        throw Error(Errc::invalid_context, "p = " + std::to_string(p) + " outside (" + std::to_string(ctx.l - 1) +
                                               "q/" + std::to_string(ctx.l) + ", q-1] for q = " + std::to_string(q));
    }
    if (ctx.l == 3 && !three_step_filtration_exists(p, q)) {
        throw Error(Errc::invalid_context, "p = " + std::to_string(p) +
                                               " is not q1 + q2 with 2 <= q2 <= q1-1 <= q/2-1 for q = " +
                                               std::to_string(q));
    }
    return km_coefficient(ctx.l, ctx.r1, p, q);
}

/// 4q^2/(q^2+2q-4): the (3,1) coefficient at p = q-1, which dominates every case.
inline Rational km_worst_case_bound(std::int64_t q) {
    if (q < 2) {
        throw Error(Errc::invalid_input, "worst-case slope bound needs q >= 2");
    }
    return km_coefficient(3, 1, q - 1, q);
}

} // namespace fanoscan
