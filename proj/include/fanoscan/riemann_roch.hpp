#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fanoscan/basket.hpp"
#include "fanoscan/error.hpp"
#include "fanoscan/rational.hpp"

namespace fanoscan {

/// One residue per basket point, aligned with the basket's canonical order.
/// In the h0 formulas a residue x stands for the smallest residue of i_1*b mod r;
/// in the torsion scan it is the local index i itself.
struct LocalIndexAssignment {
    std::vector<int> residues;

    std::string to_string() const {
        std::string out = "(";
        for (std::size_t i = 0; i < residues.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(residues[i]);
        }
        return out + ")";
    }

    friend auto operator<=>(const LocalIndexAssignment&, const LocalIndexAssignment&) = default;
};

/// s -> h0(sA). Only nonnegative integral values are ever stored.
using H0Table = std::map<std::int64_t, BigInt>;

namespace detail {

inline void check_assignment(const Basket& basket, const LocalIndexAssignment& x) {
    if (x.residues.size() != basket.size()) {
        throw Error(Errc::invalid_input, "assignment has " + std::to_string(x.residues.size()) +
                                             " residues for a basket of " + std::to_string(basket.size()) +
                                             " points");
    }
    auto points = basket.points();
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (x.residues[k] < 0 || x.residues[k] >= points[k].r()) {
            throw Error(Errc::invalid_input, "residue " + std::to_string(x.residues[k]) + " outside [0, " +
                                                 std::to_string(points[k].r()) + ")");
        }
    }
}

/// v(r - v)/(2r) for v = residue(value, r).
inline Rational residue_term(std::int64_t value, int r) {
    std::int64_t v = residue(value, r);
    return Rational(BigInt(v) * (r - v), BigInt(2 * r));
}

/// Odometer over the product space prod [0, r_k), in lexicographic order.
template <typename Visit>
void for_each_residue_tuple(const Basket& basket, Visit&& visit) {
    auto points = basket.points();
    LocalIndexAssignment x{std::vector<int>(points.size(), 0)};
    while (true) {
        if (!visit(std::as_const(x))) return;
        std::size_t k = points.size();
        while (k > 0) {
            --k;
            if (++x.residues[k] < points[k].r()) break;
            x.residues[k] = 0;
            if (k == 0) return;
        }
        if (points.empty()) return;
    }
}

} // namespace detail

/// Reid's local contribution c_Q for a divisor of local index i at the point (r, b).
inline Rational orbifold_contribution(int r, int b, std::int64_t i) {
    OrbifoldPoint point(r, b);
    if (i < 0) {
        throw Error(Errc::invalid_index, "local index must be >= 0, got " + std::to_string(i));
    }
    Rational out(-BigInt(i) * (BigInt(r) * r - 1), BigInt(12 * r));
    for (std::int64_t j = 0; j < i; ++j) {
        out += detail::residue_term(j * point.b(), point.r());
    }
    return out;
}

/// c_Q(i) - c_Q(i+1) in closed form.
inline Rational contribution_difference(int r, int b, std::int64_t i) {
    OrbifoldPoint point(r, b);
    if (i < 0) {
        throw Error(Errc::invalid_index, "local index must be >= 0, got " + std::to_string(i));
    }
    return Rational(BigInt(r) * r - 1, BigInt(12 * r)) - detail::residue_term(i * point.b(), point.r());
}

/// h0(X, O(sA)) for 0 < s < q, with local indices i_s = s * i_1.
///
/// The linear scaling of local indices holds only when X is Gorenstein along
/// its crepant centers. That is a geometric fact the caller vouches for; passing
/// false is rejected since no value can be computed without it.
///
/// The result is returned unrounded. Whether it is a nonnegative integer is
/// the caller's feasibility test.
inline Rational h0_sA(std::int64_t q, const Rational& c1_cubed, const Basket& basket,
                      const LocalIndexAssignment& x, std::int64_t s,
                      bool gorenstein_along_crepant_centers = true) {
    if (!gorenstein_along_crepant_centers) {
        throw Error(Errc::invalid_config, "local indices scale as s*i_1 only when Gorenstein along crepant centers");
    }
    if (s <= 0 || s >= q) {
        throw Error(Errc::out_of_range, "s = " + std::to_string(s) + " outside (0, " + std::to_string(q) + ")");
    }
    detail::check_assignment(basket, x);
    Rational out = Rational(BigInt(s) * s) * c1_cubed / Rational(BigInt(2) * q * q) + Rational(2);
    auto points = basket.points();
    for (std::size_t k = 0; k < points.size(); ++k) {
        out -= detail::residue_term(s * x.residues[k], points[k].r());
    }
    return out;
}

/// h0 values at the given multiples, or nullopt as soon as one is not a
/// nonnegative integer.
inline std::optional<H0Table> h0_table(std::int64_t q, const Rational& c1_cubed, const Basket& basket,
                                       const LocalIndexAssignment& x, std::span<const std::int64_t> s_values) {
    H0Table table;
    for (std::int64_t s : s_values) {
        Rational value = h0_sA(q, c1_cubed, basket, x, s);
        if (!value.is_integer() || value.sign() < 0) {
            return std::nullopt;
        }
        table[s] = value.numerator();
    }
    return table;
}

/// Every assignment in prod [0, r) whose h0 is a nonnegative integer at all
/// requested s. Lexicographic order.
inline std::vector<LocalIndexAssignment> feasible_assignments(std::int64_t q, const Rational& c1_cubed,
                                                              const Basket& basket,
                                                              std::span<const std::int64_t> s_values) {
    if (s_values.empty()) {
        throw Error(Errc::invalid_config, "empty s range");
    }
    for (std::int64_t s : s_values) {
        if (s <= 0 || s >= q) {
            throw Error(Errc::out_of_range, "s = " + std::to_string(s) + " outside (0, " + std::to_string(q) + ")");
        }
    }
    std::vector<LocalIndexAssignment> out;
    detail::for_each_residue_tuple(basket, [&](const LocalIndexAssignment& x) {
        if (h0_table(q, c1_cubed, basket, x, s_values)) {
            out.push_back(x);
        }
        return true;
    });
    return out;
}

/// Searches local indices i (one per point, in [0, r)) solving
///   2 = sum v(r - v)/(2r) + geometric_term/2,   v = residue(i*b, r).
/// Returns the lexicographically smallest solution, if any.
inline std::optional<LocalIndexAssignment> torsion_obstruction(const Basket& basket,
                                                               const Rational& geometric_term = Rational(0)) {
    const Rational target = Rational(2) - geometric_term / Rational(2);
    auto points = basket.points();
    const std::size_t count = points.size();

    std::vector<std::vector<Rational>> terms(count);
    for (std::size_t k = 0; k < count; ++k) {
        for (int i = 0; i < points[k].r(); ++i) {
            terms[k].push_back(detail::residue_term(std::int64_t{i} * points[k].b(), points[k].r()));
        }
    }

    // reachable[k]: every sum attainable from points k..count-1.
    std::vector<std::set<Rational>> reachable(count + 1);
    reachable[count].insert(Rational(0));
    for (std::size_t k = count; k-- > 0;) {
        std::set<Rational> values(terms[k].begin(), terms[k].end());
        for (const auto& tail : reachable[k + 1]) {
            for (const auto& v : values) {
                reachable[k].insert(tail + v);
            }
        }
    }
    if (!reachable[0].contains(target)) {
        return std::nullopt;
    }

    LocalIndexAssignment witness;
    Rational remaining = target;
    for (std::size_t k = 0; k < count; ++k) {
        for (int i = 0; i < points[k].r(); ++i) {
            if (reachable[k + 1].contains(remaining - terms[k][i])) {
                witness.residues.push_back(i);
                remaining -= terms[k][i];
                break;
            }
        }
    }
    return witness;
}

} // namespace fanoscan
