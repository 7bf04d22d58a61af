#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fanoscan/basket.hpp"
#include "fanoscan/error.hpp"
#include "fanoscan/index_search.hpp"
#include "fanoscan/rational.hpp"
#include "fanoscan/riemann_roch.hpp"

namespace fanoscan {

/// Outcome of one machine check. `passed` is derived, never set directly:
/// a check passes iff its computed text equals its expected text.
class VerificationReport {
public:
    VerificationReport(std::string name, std::string expected, std::string computed,
                       nlohmann::json witness = nlohmann::json::object())
        : name_(std::move(name)), expected_(std::move(expected)), computed_(std::move(computed)),
          witness_(std::move(witness)) {}

    const std::string& check_name() const noexcept { return name_; }
    bool passed() const noexcept { return expected_ == computed_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& computed() const noexcept { return computed_; }
    const nlohmann::json& witness() const noexcept { return witness_; }

    nlohmann::json to_json() const {
        return {{"name", name_},
                {"status", passed() ? "pass" : "fail"},
                {"expected", expected_},
                {"computed", computed_},
                {"witness", witness_}};
    }

    std::string to_text() const {
        std::ostringstream os;
        os << (passed() ? "[PASS] " : "[FAIL] ") << name_ << '\n'
           << "  expected: " << expected_ << '\n'
           << "  computed: " << computed_ << '\n';
        if (!witness_.empty()) {
            std::istringstream lines(witness_.dump(2));
            std::string line;
            os << "  witness:\n";
            while (std::getline(lines, line)) os << "    " << line << '\n';
        }
        return os.str();
    }

private:
    std::string name_;
    std::string expected_;
    std::string computed_;
    nlohmann::json witness_;
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

} // namespace detail

// --------------------------------------------------------------------------
// Large-index table

struct Table1Row {
    std::string basket;
    BigInt r_X;
    BigInt rX_c1_cubed;
    BigInt rX_c2c1;
    BigInt q;
};

inline std::vector<Table1Row> table1_fixture() {
    return {
        {"[(2,1),(3,1),(5,2),(11,1)]", 330, 3721, 1361, 61},
        {"[(2,1),(3,1),(5,1),(11,2)]", 330, 4489, 1361, 67},
        {"[(2,1),(3,1),(5,2),(11,1)]", 330, 5041, 1361, 71},
        {"[(2,1),(3,1),(5,1),(11,3)]", 330, 5329, 1361, 73},
    };
}

inline std::string render_table1_row(const std::string& basket, const BigInt& r_X, const BigInt& rX_c1,
                                     const BigInt& rX_c2c1, const BigInt& q) {
    return basket + " " + r_X.str() + " " + rX_c1.str() + " " + rX_c2c1.str() + " " + q.str();
}

/// Consistency breaches of one fixture row, recomputed from its basket.
inline std::vector<std::string> table1_row_breaches(const Table1Row& row, std::int64_t chi = 1) {
    std::vector<std::string> out;
    const std::string tag = "row q=" + row.q.str() + ": ";
    Basket basket = parse_basket(row.basket);
    RMultiset rs = basket.r_multiset();
    BigInt r_X = gorenstein_index(rs);
    if (r_X != row.r_X) out.push_back(tag + "r_X = " + row.r_X.str() + " but lcm = " + r_X.str());
    Rational rX_c2c1 = Rational(r_X) * (Rational(24 * chi) - defect_sum(rs));
    if (rX_c2c1 != Rational(row.rX_c2c1)) {
        out.push_back(tag + "r_X*c2c1 = " + row.rX_c2c1.str() + " but recomputed " + rX_c2c1.to_string());
    }
    BigInt q2 = row.q * row.q;
    if (row.rX_c1_cubed % q2 != 0 || row.rX_c1_cubed <= 0) {
        out.push_back(tag + "r_X*c1^3 = " + row.rX_c1_cubed.str() + " is not n*q^2 for a positive integer n (q^2 = " +
                      q2.str() + ")");
    }
    if (Rational(row.rX_c1_cubed) > Rational(4) * Rational(row.rX_c2c1)) {
        out.push_back(tag + "r_X*c1^3 exceeds 4*r_X*c2c1");
    }
    Rational c1_cubed(row.rX_c1_cubed, r_X);
    Rational chi_k = c1_cubed / Rational(2) + Rational(3 * chi) - half_point_sum(basket);
    if (!chi_k.is_integer() || chi_k.sign() < 0) {
        out.push_back(tag + "integrality breach: chi(-K) = c1^3/2 + 3 - half_point_sum = " + chi_k.to_string() +
                      " is not a nonnegative integer");
    }
    return out;
}

/// Recomputes every fixture row and compares the fixture with a fresh
/// b = 4, q_min = 61 search (no postfilter).
inline VerificationReport verify_table1(const std::vector<Table1Row>& fixture = table1_fixture(),
                                        unsigned workers = 1) {
    std::vector<std::string> expected_rows;
    std::vector<std::string> breaches;
    for (const auto& row : fixture) {
        expected_rows.push_back(render_table1_row(parse_basket(row.basket).to_string(), row.r_X, row.rX_c1_cubed,
                                                  row.rX_c2c1, row.q));
        auto b = table1_row_breaches(row);
        breaches.insert(breaches.end(), b.begin(), b.end());
    }

    SearchConfig config;
    config.slope_coeff = Rational(4);
    config.q_min = 61;
    config.workers = workers;
    SearchResult result = run_search(config);

    std::vector<std::string> computed_rows;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : result.records) {
        computed_rows.push_back(render_table1_row(rec.basket->to_string(), rec.r_X, rec.rX_c1_cubed().numerator(),
                                                  rec.rX_c2c1().numerator(), rec.q));
        rows.push_back({{"basket", rec.basket->to_string()},
                        {"q", rec.q.str()},
                        {"n", rec.n.str()},
                        {"chi_minusK", rec.chi_minus_K->str()}});
    }

    std::string expected = detail::join(expected_rows, "; ") + " | breaches: none";
    std::string computed =
        detail::join(computed_rows, "; ") + " | breaches: " + (breaches.empty() ? "none" : detail::join(breaches, "; "));
    nlohmann::json witness = {{"breaches", breaches},
                              {"search_rows", rows},
                              {"search_stats",
                               {{"step1", result.stats.step1},
                                {"step2", result.stats.step2},
                                {"step3", result.stats.step3}}}};
    return VerificationReport("table1", expected, computed, witness);
}

// --------------------------------------------------------------------------
// Torsion, h0 and coefficient lemmas for the two exceptional cases

struct ExceptionalCase {
    std::int64_t q;
    Rational c1_cubed;
    Basket basket;
};

inline std::vector<ExceptionalCase> exceptional_cases() {
    return {
        {67, Rational(4489, 330), parse_basket("[(2,1),(3,1),(5,1),(11,2)]")},
        {71, Rational(5041, 330), parse_basket("[(2,1),(3,1),(5,2),(11,1)]")},
    };
}

inline Basket torsion_control_basket() { return Basket(std::vector<OrbifoldPoint>(8, OrbifoldPoint(2, 1))); }

inline std::size_t residue_space_size(const Basket& basket) {
    std::size_t out = 1;
    for (const auto& p : basket.points()) out *= static_cast<std::size_t>(p.r());
    return out;
}

inline VerificationReport verify_no_torsion() {
    std::vector<std::string> expected;
    std::vector<std::string> computed;
    nlohmann::json witness = nlohmann::json::object();
    for (const auto& c : exceptional_cases()) {
        std::string tag = "q=" + std::to_string(c.q) + " " + c.basket.to_string();
        auto found = torsion_obstruction(c.basket);
        expected.push_back(tag + ": none");
        computed.push_back(tag + ": " + (found ? "witness " + found->to_string() : "none"));
        witness[tag] = {{"tuples_scanned", residue_space_size(c.basket)},
                        {"solution", found ? nlohmann::json(found->residues) : nlohmann::json(nullptr)}};
    }
    Basket control = torsion_control_basket();
    auto found = torsion_obstruction(control);
    expected.push_back("control " + control.to_string() + ": witness");
    computed.push_back("control " + control.to_string() + ": " + (found ? "witness" : "none"));
    witness["control"] = {{"role", "expected-positive control"},
                          {"basket", control.to_string()},
                          {"tuples_scanned", residue_space_size(control)},
                          {"solution", found ? nlohmann::json(found->residues) : nlohmann::json(nullptr)}};
    return VerificationReport("torsion", detail::join(expected, "; "), detail::join(computed, "; "), witness);
}

inline std::vector<std::int64_t> h0_table_multiples() {
    std::vector<std::int64_t> s;
    for (std::int64_t i = 1; i <= 16; ++i) s.push_back(i);
    s.push_back(33);
    return s;
}

inline H0Table expected_h0_table() {
    H0Table t;
    for (std::int64_t s : {1, 2, 3, 4, 7, 8, 9, 13, 14}) t[s] = 0;
    for (std::int64_t s : {5, 6, 10, 11, 12, 15, 16}) t[s] = 1;
    t[33] = 3;
    return t;
}

inline std::string render_h0_table(const H0Table& table) {
    std::vector<std::string> parts;
    for (const auto& [s, h] : table) parts.push_back(std::to_string(s) + ":" + h.str());
    return detail::join(parts, " ");
}

/// Per-point residue sets, e.g. "x2={1} x3={1,2}".
inline std::string render_residue_sets(const Basket& basket, const std::vector<LocalIndexAssignment>& assignments) {
    std::vector<std::set<int>> seen(basket.size());
    for (const auto& x : assignments) {
        for (std::size_t k = 0; k < x.residues.size(); ++k) seen[k].insert(x.residues[k]);
    }
    std::vector<std::string> parts;
    auto points = basket.points();
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::vector<std::string> values;
        for (int v : seen[k]) values.push_back(std::to_string(v));
        parts.push_back("x" + std::to_string(points[k].r()) + "={" + detail::join(values, ",") + "}");
    }
    return detail::join(parts, " ");
}

/// Checks the h0(sA) table for every assignment feasible at s = 1, and that
/// filtering on all 0 < s < q removes nothing further.
inline VerificationReport verify_h0_table() {
    const std::string expected_residues = "x2={1} x3={1,2} x5={2,3} x11={2,9}";
    const std::string expected_table = render_h0_table(expected_h0_table());
    const std::vector<std::int64_t> multiples = h0_table_multiples();
    const std::vector<std::int64_t> first{1};

    std::vector<std::string> expected;
    std::vector<std::string> computed;
    nlohmann::json witness = nlohmann::json::object();
    for (const auto& c : exceptional_cases()) {
        const std::string tag = "q=" + std::to_string(c.q);
        auto feasible = feasible_assignments(c.q, c.c1_cubed, c.basket, first);

        std::vector<std::int64_t> all_s;
        for (std::int64_t s = 1; s < c.q; ++s) all_s.push_back(s);
        auto feasible_all = feasible_assignments(c.q, c.c1_cubed, c.basket, all_s);

        std::set<std::string> tables;
        nlohmann::json per_assignment = nlohmann::json::array();
        for (const auto& x : feasible) {
            auto table = h0_table(c.q, c.c1_cubed, c.basket, x, multiples);
            std::string text = table ? render_h0_table(*table) : "non-integral";
            tables.insert(text);
            per_assignment.push_back({{"x", x.to_string()}, {"table", text}});
        }
        std::vector<std::string> table_list(tables.begin(), tables.end());

        expected.push_back(tag + " residues " + expected_residues + " count 8 all-s filter same | table " +
                           expected_table);
        computed.push_back(tag + " residues " + render_residue_sets(c.basket, feasible) + " count " +
                           std::to_string(feasible.size()) + " all-s filter " +
                           (feasible_all == feasible ? "same" : "differs") + " | table " +
                           (table_list.empty() ? "none" : detail::join(table_list, " / ")));

        nlohmann::json h0 = nlohmann::json::object();
        if (!feasible.empty()) {
            if (auto t = h0_table(c.q, c.c1_cubed, c.basket, feasible.front(), multiples)) {
                for (const auto& [s, h] : *t) h0[std::to_string(s)] = h.str();
            }
        }
        witness[tag] = {{"basket", c.basket.to_string()},
                        {"c1_cubed", c.c1_cubed.to_string()},
                        {"h0", h0},
                        {"assignments", per_assignment},
                        {"feasible_at_s1", feasible.size()},
                        {"feasible_at_all_s", feasible_all.size()}};
    }
    return VerificationReport("h0", detail::join(expected, "; "), detail::join(computed, "; "), witness);
}

/// Least integer p with 2q/3 < p <= q-1 and -4p^2 + 6pq - q^2 <= bound.
inline std::optional<std::int64_t> minimal_p(std::int64_t q, const BigInt& bound) {
    for (std::int64_t p = (2 * q) / 3 + 1; p <= q - 1; ++p) {
        BigInt P = p;
        BigInt Q = q;
        if (-4 * P * P + 6 * P * Q - Q * Q <= bound) return p;
    }
    return std::nullopt;
}

/// The bound constant for the exceptional rows: c1^3/c2c1 = q^2/1361, so the
/// (3,1) slope inequality reads -4p^2 + 6pq - q^2 <= 4*1361.
inline BigInt exceptional_p_bound() { return BigInt(4) * 1361; }

inline VerificationReport verify_min_p() {
    std::vector<std::string> expected;
    std::vector<std::string> computed;
    nlohmann::json witness = nlohmann::json::object();
    const std::pair<std::int64_t, std::int64_t> cases[] = {{71, 68}, {67, 57}};
    for (auto [q, want] : cases) {
        auto p = minimal_p(q, exceptional_p_bound());
        expected.push_back("q=" + std::to_string(q) + ": " + std::to_string(want));
        computed.push_back("q=" + std::to_string(q) + ": " + (p ? std::to_string(*p) : "none"));

        // Claimed bound max{q - 10, 57q/67}, rounded up to an integer p.
        Rational stated = std::max(Rational(q - 10), Rational(BigInt(57) * q, BigInt(67)));
        BigInt stated_int = stated.ceil();
        witness["q=" + std::to_string(q)] = {
            {"derived_min_p", p ? nlohmann::json(*p) : nlohmann::json(nullptr)},
            {"stated_bound", stated.to_string()},
            {"stated_bound_integer", stated_int.str()},
            {"discrepancy", !p || BigInt(*p) != stated_int},
        };
    }
    return VerificationReport("minp", detail::join(expected, "; "), detail::join(computed, "; "), witness);
}

inline std::string render_c_set(const std::set<std::int64_t>& numerators, std::int64_t q) {
    std::vector<std::string> parts;
    for (auto m : numerators) parts.push_back(Rational(BigInt(m), BigInt(q)).to_string());
    return "{" + detail::join(parts, ",") + "}";
}

/// Terminal points: no c = m/r <= 10/p, c' = m'/r <= 12/p (r in {1,2,3,5,11})
/// has 6c - 5c' integral. Crepant centers: with c = m/q, m <= 11 and
/// c' = m'/q, m' <= 14, integrality of 6c - 5c' forces c in {5/q, 10/q}.
inline VerificationReport verify_coefficient_lemma(std::int64_t q, std::int64_t p) {
    if (!detail::is_prime(q)) {
        throw Error(Errc::invalid_input, "q = " + std::to_string(q) + " is not prime");
    }
    if (p <= 0) throw Error(Errc::invalid_input, "p must be positive");
    const Rational c_max(BigInt(10), BigInt(p));
    const Rational c2_max(BigInt(12), BigInt(p));

    nlohmann::json terminal = nlohmann::json::array();
    for (int r : {1, 2, 3, 5, 11}) {
        for (std::int64_t m = 1; Rational(BigInt(m), BigInt(r)) <= c_max; ++m) {
            for (std::int64_t m2 = 1; Rational(BigInt(m2), BigInt(r)) <= c2_max; ++m2) {
                Rational diff = Rational(6) * Rational(BigInt(m), BigInt(r)) - Rational(5) * Rational(BigInt(m2), BigInt(r));
                if (diff.is_integer()) terminal.push_back({{"r", r}, {"m", m}, {"m_prime", m2}});
            }
        }
    }

    auto crepant = [&](std::int64_t m_max, std::int64_t m2_max, nlohmann::json& pairs) {
        std::set<std::int64_t> survivors;
        for (std::int64_t m = 1; m <= m_max; ++m) {
            for (std::int64_t m2 = 1; m2 <= m2_max; ++m2) {
                if ((6 * m - 5 * m2) % q == 0) {
                    survivors.insert(m);
                    pairs.push_back({{"m", m}, {"m_prime", m2}});
                }
            }
        }
        return survivors;
    };
    nlohmann::json verbatim_pairs = nlohmann::json::array();
    auto verbatim = crepant(11, 14, verbatim_pairs);

    // Re-derive the verbatim ranges from the exact bounds.
    const bool m_range_ok = c_max < Rational(BigInt(12), BigInt(q));
    const bool m2_range_ok = c2_max < Rational(BigInt(15), BigInt(q));
    std::string ranges = std::string(m_range_ok ? "m<=11" : "m range mismatch (10/p >= 12/q)") + ", " +
                         (m2_range_ok ? "m'<=14" : "m' range mismatch (12/p >= 15/q)");

    const std::int64_t m_tight = to_int64((c_max * Rational(q)).floor());
    const std::int64_t m2_tight = to_int64((c2_max * Rational(q)).floor());
    nlohmann::json tight_pairs = nlohmann::json::array();
    auto tight = crepant(m_tight, m2_tight, tight_pairs);

    const std::set<std::int64_t> want{5, 10};
    const std::string tag = "q=" + std::to_string(q) + ",p=" + std::to_string(p);
    std::string expected = tag + " terminal: none; crepant: " + render_c_set(want, q) + "; ranges: m<=11, m'<=14";
    std::string computed = tag + " terminal: " + (terminal.empty() ? "none" : terminal.dump()) +
                           "; crepant: " + render_c_set(verbatim, q) + "; ranges: " + ranges;
    nlohmann::json witness = {{"terminal_solutions", terminal},
                              {"crepant_pairs", verbatim_pairs},
                              {"tight_ranges", {{"m_max", m_tight}, {"m_prime_max", m2_tight}}},
                              {"tight_survivors", render_c_set(tight, q)}};
    return VerificationReport("coeff-lemma", expected, computed, witness);
}

/// Both exceptional indices, each with p taken from the derived minimum.
inline VerificationReport verify_coefficient_lemmas() {
    std::vector<std::string> expected;
    std::vector<std::string> computed;
    nlohmann::json witness = nlohmann::json::object();
    for (std::int64_t q : {67, 71}) {
        auto p = minimal_p(q, exceptional_p_bound());
        if (!p) {
            expected.push_back("q=" + std::to_string(q) + ": minimal p exists");
            computed.push_back("q=" + std::to_string(q) + ": no admissible p");
            continue;
        }
        auto report = verify_coefficient_lemma(q, *p);
        expected.push_back(report.expected());
        computed.push_back(report.computed());
        witness["q=" + std::to_string(q)] = report.witness();
    }
    return VerificationReport("coeff-lemma", detail::join(expected, " || "), detail::join(computed, " || "), witness);
}

inline const std::vector<std::string>& verification_targets() {
    static const std::vector<std::string> targets{"table1", "torsion", "h0", "minp", "coeff-lemma", "all"};
    return targets;
}

/// Geometric steps that numerics alone cannot settle; listed with `verify all`.
inline const std::vector<std::string>& unchecked_claims() {
    static const std::vector<std::string> claims{
        "iota(mu_* F) > 33 for the general leaf F (needs the family of leaves)",
        "non-reduced members of |sA|, s <= 33, contain 2A_5 or 2A_6",
        "nef/big structure of h_*(N_s|F) on F_n, coefficient ratios a_5/a_6 = b_5/b_6 = 5/6",
        "final h0 comparison on F_n excluding q in {67, 71}",
    };
    return claims;
}

inline std::vector<VerificationReport> run_verification(std::string_view target, unsigned workers = 1) {
    std::vector<VerificationReport> out;
    const bool all = target == "all";
    if (all || target == "table1") out.push_back(verify_table1(table1_fixture(), workers));
    if (all || target == "torsion") out.push_back(verify_no_torsion());
    if (all || target == "h0") out.push_back(verify_h0_table());
    if (all || target == "minp") out.push_back(verify_min_p());
    if (all || target == "coeff-lemma") out.push_back(verify_coefficient_lemmas());
    if (out.empty()) {
        throw Error(Errc::invalid_input, "unknown verification target '" + std::string(target) + "'");
    }
    return out;
}

} // namespace fanoscan
