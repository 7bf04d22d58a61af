#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fanoscan/basket.hpp"
#include "fanoscan/error.hpp"
#include "fanoscan/km_bound.hpp"
#include "fanoscan/rational.hpp"

namespace fanoscan {

/// The three admissible slope coefficients 3, 16/5 and 4.
inline std::vector<Rational> allowed_slope_coefficients() {
    return {Rational(3), Rational(16, 5), Rational(4)};
}

/// Index sets one of which R_X must contain when X is non-Gorenstein at a crepant center.
inline std::vector<RMultiset> kawakita_subsets() {
    return {RMultiset({2, 2, 2, 2}), RMultiset({3, 3, 3}), RMultiset({2, 4, 4}), RMultiset({5, 5}),
            RMultiset({2, 3, 6})};
}

struct SearchConfig {
    std::int64_t chi = 1;
    Rational slope_coeff = Rational(4);
    BigInt q_min = 61;
    std::vector<RMultiset> required_subsets;  // empty: unrestricted
    bool apply_km_postfilter = false;
    std::optional<KmCase> km_case;  // metadata only
    unsigned workers = 1;           // wall-clock only, never changes output

    void validate() const {
        auto allowed = allowed_slope_coefficients();
        if (std::find(allowed.begin(), allowed.end(), slope_coeff) == allowed.end()) {
            throw Error(Errc::invalid_config, "slope coefficient " + slope_coeff.to_string() +
                                                  " is not one of 3, 16/5, 4");
        }
        if (q_min < 1) throw Error(Errc::invalid_config, "q_min must be >= 1");
        if (chi < 1) throw Error(Errc::invalid_config, "chi must be >= 1");
        if (workers < 1) throw Error(Errc::invalid_config, "workers must be >= 1");
    }
};

struct CandidateRecord {
    RMultiset r_multiset;
    std::optional<Basket> basket;  // filled in by Step 3
    Rational c2c1;
    Rational c1_cubed;
    BigInt q;
    BigInt r_X;
    BigInt n;                           // r_X * c1_cubed / q^2
    std::optional<BigInt> chi_minus_K;  // filled in by Step 3

    Rational rX_c1_cubed() const { return Rational(r_X) * c1_cubed; }
    Rational rX_c2c1() const { return Rational(r_X) * c2c1; }

    friend bool operator==(const CandidateRecord&, const CandidateRecord&) = default;
};

/// Final output order: q, then c1^3, then basket.
inline bool canonical_less(const CandidateRecord& a, const CandidateRecord& b) {
    if (a.q != b.q) return a.q < b.q;
    if (a.c1_cubed != b.c1_cubed) return a.c1_cubed < b.c1_cubed;
    if (a.basket != b.basket) return a.basket < b.basket;
    return a.r_multiset < b.r_multiset;
}

struct RMultisetCandidate {
    RMultiset r_multiset;
    Rational c2c1;

    friend bool operator==(const RMultisetCandidate&, const RMultisetCandidate&) = default;
};

/// Visits every multiset of integers >= 2 with sum(r - 1/r) < 24*chi, paired
/// with c2.c1 = 24*chi - sum(r - 1/r), in lexicographic order of the sorted
/// sequences. Entries are chosen nondecreasing and pruned by the remaining budget.
inline void for_each_r_multiset(std::int64_t chi, const std::function<void(const RMultisetCandidate&)>& visit) {
    if (chi < 1) throw Error(Errc::invalid_config, "chi must be >= 1");
    std::vector<int> current;
    std::function<void(int, const Rational&)> extend = [&](int smallest, const Rational& budget) {
        visit(RMultisetCandidate{RMultiset(current), budget});
        for (int r = smallest;; ++r) {
            Rational cost(BigInt(r) * r - 1, BigInt(r));
            if (cost >= budget) break;
            current.push_back(r);
            extend(r, budget - cost);
            current.pop_back();
        }
    };
    extend(2, Rational(24 * chi));
}

inline std::vector<RMultisetCandidate> enumerate_r_multisets(std::int64_t chi) {
    std::vector<RMultisetCandidate> out;
    for_each_r_multiset(chi, [&](const RMultisetCandidate& c) { out.push_back(c); });
    return out;
}

inline bool passes_required_subsets(const RMultiset& rs, const std::vector<RMultiset>& required) {
    if (required.empty()) return true;
    return std::any_of(required.begin(), required.end(), [&](const RMultiset& sub) { return rs.contains(sub); });
}

/// Step 2 for one Step-1 pair: every (q, n) with q >= q_min and
/// n*q^2 <= b * r_X * c2c1, setting c1^3 = n*q^2/r_X. Ordered by (q, n).
inline std::vector<CandidateRecord> step2_for(const RMultisetCandidate& item, const SearchConfig& config) {
    std::vector<CandidateRecord> out;
    const BigInt r_X = gorenstein_index(item.r_multiset);
    const BigInt limit = (config.slope_coeff * Rational(r_X) * item.c2c1).floor();
    for (BigInt q = config.q_min; q * q <= limit; ++q) {
        const BigInt q2 = q * q;
        for (BigInt n = 1; n * q2 <= limit; ++n) {
            out.push_back(CandidateRecord{item.r_multiset, std::nullopt, item.c2c1, Rational(n * q2, r_X), q, r_X, n,
                                          std::nullopt});
        }
    }
    return out;
}

inline std::vector<CandidateRecord> step2_candidates(const SearchConfig& config) {
    config.validate();
    std::vector<CandidateRecord> out;
    for_each_r_multiset(config.chi, [&](const RMultisetCandidate& item) {
        if (!passes_required_subsets(item.r_multiset, config.required_subsets)) return;
        auto rows = step2_for(item, config);
        out.insert(out.end(), rows.begin(), rows.end());
    });
    return out;
}

/// chi(-K) = c1^3/2 + 3*chi - sum b(r-b)/(2r); nullopt unless it is a nonnegative integer.
inline std::optional<BigInt> chi_minus_K(const Rational& c1_cubed, std::int64_t chi, const Basket& basket) {
    Rational value = c1_cubed / Rational(2) + Rational(3 * chi) - half_point_sum(basket);
    if (!value.is_integer() || value.sign() < 0) return std::nullopt;
    return value.numerator();
}

/// Step 3: every basket over the record's r-multiset that passes the chi(-K)
/// integrality test. Canonical order.
inline std::vector<Basket> step3_assign_baskets(const CandidateRecord& record, std::int64_t chi) {
    // Group equal r's; within a group the b's are chosen nondecreasing so each
    // multiset of points is produced once.
    struct Group {
        int r;
        std::size_t count;
        std::vector<int> weights;
    };
    std::vector<Group> groups;
    for (int r : record.r_multiset.entries()) {
        if (!groups.empty() && groups.back().r == r) {
            ++groups.back().count;
            continue;
        }
        Group g{r, 1, {}};
        for (int b = 1; 2 * b <= r; ++b) {
            if (std::gcd(r, b) == 1) g.weights.push_back(b);
        }
        groups.push_back(std::move(g));
    }

    std::vector<Basket> out;
    std::vector<OrbifoldPoint> points;
    std::function<void(std::size_t, std::size_t, std::size_t)> assign = [&](std::size_t group, std::size_t placed,
                                                                             std::size_t min_weight) {
        if (group == groups.size()) {
            Basket basket(points);
            if (chi_minus_K(record.c1_cubed, chi, basket)) out.push_back(std::move(basket));
            return;
        }
        const Group& g = groups[group];
        if (placed == g.count) {
            assign(group + 1, 0, 0);
            return;
        }
        for (std::size_t w = min_weight; w < g.weights.size(); ++w) {
            points.emplace_back(g.r, g.weights[w]);
            assign(group, placed + 1, w);
            points.pop_back();
        }
    };
    assign(0, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// Keeps records with c1^3/c2.c1 <= 4q^2/(q^2+2q-4); input order is preserved.
inline std::vector<CandidateRecord> km_postfilter(const std::vector<CandidateRecord>& records) {
    std::vector<CandidateRecord> out;
    for (const auto& rec : records) {
        if (rec.c1_cubed / rec.c2c1 <= km_worst_case_bound(to_int64(rec.q))) out.push_back(rec);
    }
    return out;
}

/// Every violated record invariant, as text. Empty means the record is sound.
inline std::vector<std::string> record_breaches(const CandidateRecord& rec, const SearchConfig& config) {
    std::vector<std::string> out;
    if (rec.r_X != gorenstein_index(rec.r_multiset)) {
        out.push_back("r_X = " + rec.r_X.str() + " but lcm" + rec.r_multiset.to_string() + " = " +
                      gorenstein_index(rec.r_multiset).str());
    }
    Rational c2c1 = Rational(24 * config.chi) - defect_sum(rec.r_multiset);
    if (rec.c2c1 != c2c1) {
        out.push_back("c2c1 = " + rec.c2c1.to_string() + " but 24*chi - defect_sum = " + c2c1.to_string());
    }
    if (rec.c2c1.sign() <= 0) out.push_back("c2c1 = " + rec.c2c1.to_string() + " is not positive");
    if (rec.q < config.q_min) out.push_back("q = " + rec.q.str() + " below q_min = " + config.q_min.str());
    if (rec.q <= 0) {
        out.push_back("q = " + rec.q.str() + " is not positive");
        return out;
    }
    Rational rX_c1 = rec.rX_c1_cubed();
    Rational q2(rec.q * rec.q);
    Rational n = rX_c1 / q2;
    if (!n.is_integer() || n.sign() <= 0) {
        out.push_back("r_X*c1^3 = " + rX_c1.to_string() + " is not a positive integer multiple of q^2 = " +
                      q2.to_string());
    } else if (n.numerator() != rec.n) {
        out.push_back("n = " + rec.n.str() + " but r_X*c1^3/q^2 = " + n.to_string());
    }
    if (rX_c1 < q2) out.push_back("r_X*c1^3 = " + rX_c1.to_string() + " < q^2 = " + q2.to_string());
    if (rX_c1 > config.slope_coeff * rec.rX_c2c1()) {
        out.push_back("r_X*c1^3 = " + rX_c1.to_string() + " exceeds b*r_X*c2c1 = " +
                      (config.slope_coeff * rec.rX_c2c1()).to_string());
    }
    if (rec.basket) {
        if (rec.basket->r_multiset() != rec.r_multiset) {
            out.push_back("basket " + rec.basket->to_string() + " does not project to " + rec.r_multiset.to_string());
        }
        Rational chi_k = rec.c1_cubed / Rational(2) + Rational(3 * config.chi) - half_point_sum(*rec.basket);
        if (!chi_k.is_integer() || chi_k.sign() < 0) {
            out.push_back("chi(-K) = c1^3/2 + 3*chi - half_point_sum = " + chi_k.to_string() +
                          " is not a nonnegative integer");
        } else if (!rec.chi_minus_K || *rec.chi_minus_K != chi_k.numerator()) {
            out.push_back("chi(-K) field disagrees with recomputed " + chi_k.to_string());
        }
    }
    return out;
}

struct SearchStats {
    std::size_t step1 = 0;          // multisets with positive c2.c1
    std::size_t step1_required = 0; // ... that contain a required subset
    std::size_t step2 = 0;
    std::size_t step3 = 0;
    std::size_t emitted = 0;

    friend bool operator==(const SearchStats&, const SearchStats&) = default;
};

struct SearchResult {
    std::vector<CandidateRecord> records;
    SearchStats stats;
};

/// Steps 1 -> 2 -> 3, optional postfilter. Output is canonically sorted and
/// independent of the worker count.
inline SearchResult run_search(const SearchConfig& config) {
    config.validate();
    std::vector<RMultisetCandidate> items;
    SearchStats stats;
    for_each_r_multiset(config.chi, [&](const RMultisetCandidate& item) {
        ++stats.step1;
        if (passes_required_subsets(item.r_multiset, config.required_subsets)) items.push_back(item);
    });
    stats.step1_required = items.size();

    struct Partial {
        std::vector<CandidateRecord> records;
        std::size_t step2 = 0;
        std::exception_ptr error;
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(items.size())));
    std::vector<Partial> partials(workers);
    auto work = [&](unsigned w) {
        try {
        for (std::size_t i = w; i < items.size(); i += workers) {
            for (auto& rec : step2_for(items[i], config)) {
                ++partials[w].step2;
                for (auto& basket : step3_assign_baskets(rec, config.chi)) {
                    CandidateRecord full = rec;
                    full.chi_minus_K = chi_minus_K(rec.c1_cubed, config.chi, basket);
                    full.basket = std::move(basket);
                    partials[w].records.push_back(std::move(full));
                }
            }
        }
        } catch (...) {
            partials[w].error = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }

    std::vector<CandidateRecord> records;
    for (auto& part : partials) {
        if (part.error) std::rethrow_exception(part.error);
        stats.step2 += part.step2;
        records.insert(records.end(), std::make_move_iterator(part.records.begin()),
                       std::make_move_iterator(part.records.end()));
    }
    std::sort(records.begin(), records.end(), canonical_less);
    records.erase(std::unique(records.begin(), records.end(),
                              [](const CandidateRecord& a, const CandidateRecord& b) {
                                  return a.basket == b.basket && a.c1_cubed == b.c1_cubed && a.q == b.q;
                              }),
                  records.end());
    stats.step3 = records.size();
    if (config.apply_km_postfilter) records = km_postfilter(records);
    stats.emitted = records.size();

    for (const auto& rec : records) {
        auto breaches = record_breaches(rec, config);
        if (!breaches.empty()) {
            throw Error(Errc::internal, "emitted record violates its invariants: " + breaches.front());
        }
    }
    return {std::move(records), stats};
}

inline std::vector<CandidateRecord> run_full_search(const SearchConfig& config) {
    return run_search(config).records;
}

inline SearchConfig non_gorenstein_config(BigInt q_min = 33) {
    SearchConfig config;
    config.slope_coeff = Rational(4);
    config.q_min = std::move(q_min);
    config.required_subsets = kawakita_subsets();
    return config;
}

inline std::vector<CandidateRecord> non_gorenstein_search(BigInt q_min = 33) {
    return run_full_search(non_gorenstein_config(std::move(q_min)));
}

} // namespace fanoscan
