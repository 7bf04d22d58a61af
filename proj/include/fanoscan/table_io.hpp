#pragma once

#include <json.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fanoscan/basket.hpp"
#include "fanoscan/error.hpp"
#include "fanoscan/index_search.hpp"
#include "fanoscan/rational.hpp"

namespace fanoscan {

enum class OutputFormat { csv, json, md };

inline OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "md") return OutputFormat::md;
    throw Error(Errc::parse_error, "unknown format '" + std::string(text) + "' (expected csv, json or md)");
}

inline constexpr std::string_view csv_header = "basket,r_X,rX_c1cubed,rX_c2c1,q,n,chi_minusK";

namespace detail {

inline const Basket& require_basket(const CandidateRecord& rec) {
    if (!rec.basket || !rec.chi_minus_K) {
        throw Error(Errc::invalid_input, "only Step-3 records (with basket and chi(-K)) can be serialized");
    }
    return *rec.basket;
}

inline BigInt require_integer(const Rational& value, std::string_view what) {
    if (!value.is_integer()) {
        throw Error(Errc::invalid_input, std::string(what) + " = " + value.to_string() + " is not an integer");
    }
    return value.numerator();
}

inline nlohmann::json integer_json(const BigInt& value) {
    if (value <= std::numeric_limits<std::int64_t>::max() && value >= std::numeric_limits<std::int64_t>::min()) {
        return static_cast<std::int64_t>(value);
    }
    return value.str();
}

inline BigInt integer_from_json(const nlohmann::json& value, std::string_view field) {
    if (value.is_number_integer()) return BigInt(value.get<std::int64_t>());
    if (value.is_string()) {
        Rational r = Rational::parse(value.get<std::string>());
        return require_integer(r, field);
    }
    throw Error(Errc::parse_error, "field '" + std::string(field) + "' is not an integer");
}

/// Splits one CSV line; double-quoted fields may contain commas.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    if (quoted) throw Error(Errc::parse_error, "unterminated quote in CSV line");
    return fields;
}

inline CandidateRecord record_from_columns(const Basket& basket, const BigInt& r_X, const BigInt& rX_c1,
                                           const BigInt& rX_c2c1, const BigInt& q, const BigInt& n,
                                           const BigInt& chi_k) {
    if (r_X <= 0) throw Error(Errc::parse_error, "r_X must be positive");
    return CandidateRecord{basket.r_multiset(), basket, Rational(rX_c2c1, r_X), Rational(rX_c1, r_X), q, r_X, n,
                           chi_k};
}

} // namespace detail

inline void write_csv(std::ostream& os, const std::vector<CandidateRecord>& records) {
    os << csv_header << '\n';
    for (const auto& rec : records) {
        const Basket& basket = detail::require_basket(rec);
        os << '"' << basket.to_string() << "\"," << rec.r_X << ','
           << detail::require_integer(rec.rX_c1_cubed(), "r_X*c1^3") << ','
           << detail::require_integer(rec.rX_c2c1(), "r_X*c2c1") << ',' << rec.q << ',' << rec.n << ','
           << *rec.chi_minus_K << '\n';
    }
}

inline std::vector<CandidateRecord> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || detail::split_csv_line(line) != detail::split_csv_line(csv_header)) {
        throw Error(Errc::parse_error, "missing or unexpected CSV header");
    }
    std::vector<CandidateRecord> out;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 7) {
            throw Error(Errc::parse_error, "expected 7 CSV fields, got " + std::to_string(f.size()));
        }
        auto integer = [](const std::string& text, std::string_view what) {
            return detail::require_integer(Rational::parse(text), what);
        };
        out.push_back(detail::record_from_columns(parse_basket(f[0]), integer(f[1], "r_X"),
                                                  integer(f[2], "rX_c1cubed"), integer(f[3], "rX_c2c1"),
                                                  integer(f[4], "q"), integer(f[5], "n"), integer(f[6], "chi_minusK")));
    }
    return out;
}

inline nlohmann::json records_to_json(const std::vector<CandidateRecord>& records) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& rec : records) {
        const Basket& basket = detail::require_basket(rec);
        out.push_back({
            {"basket", basket.to_string()},
            {"r_multiset", rec.r_multiset.to_string()},
            {"r_X", detail::integer_json(rec.r_X)},
            {"c1_cubed", rec.c1_cubed.to_string()},
            {"c2c1", rec.c2c1.to_string()},
            {"rX_c1cubed", detail::integer_json(detail::require_integer(rec.rX_c1_cubed(), "r_X*c1^3"))},
            {"rX_c2c1", detail::integer_json(detail::require_integer(rec.rX_c2c1(), "r_X*c2c1"))},
            {"q", detail::integer_json(rec.q)},
            {"n", detail::integer_json(rec.n)},
            {"chi_minusK", detail::integer_json(*rec.chi_minus_K)},
        });
    }
    return out;
}

inline std::vector<CandidateRecord> records_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw Error(Errc::parse_error, "expected a JSON array of records");
    std::vector<CandidateRecord> out;
    for (const auto& obj : doc) {
        for (const char* key : {"basket", "r_X", "c1_cubed", "c2c1", "q", "n", "chi_minusK"}) {
            if (!obj.contains(key)) throw Error(Errc::parse_error, std::string("record lacks '") + key + "'");
        }
        Basket basket = parse_basket(obj.at("basket").get<std::string>());
        CandidateRecord rec{basket.r_multiset(),
                            basket,
                            Rational::parse(obj.at("c2c1").get<std::string>()),
                            Rational::parse(obj.at("c1_cubed").get<std::string>()),
                            detail::integer_from_json(obj.at("q"), "q"),
                            detail::integer_from_json(obj.at("r_X"), "r_X"),
                            detail::integer_from_json(obj.at("n"), "n"),
                            detail::integer_from_json(obj.at("chi_minusK"), "chi_minusK")};
        out.push_back(std::move(rec));
    }
    return out;
}

/// Markdown table with the column order B_X, r_X, r_X c1^3, r_X c2c1, q.
inline void write_markdown(std::ostream& os, const std::vector<CandidateRecord>& records) {
    os << "| B_X | r_X | r_X c1^3 | r_X c2c1 | q |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& rec : records) {
        const Basket& basket = detail::require_basket(rec);
        os << "| " << basket.to_string() << " | " << rec.r_X << " | "
           << detail::require_integer(rec.rX_c1_cubed(), "r_X*c1^3") << " | "
           << detail::require_integer(rec.rX_c2c1(), "r_X*c2c1") << " | " << rec.q << " |\n";
    }
}

inline void write_records(std::ostream& os, const std::vector<CandidateRecord>& records, OutputFormat format) {
    switch (format) {
    case OutputFormat::csv: write_csv(os, records); break;
    case OutputFormat::json: os << records_to_json(records).dump(2) << '\n'; break;
    case OutputFormat::md: write_markdown(os, records); break;
    }
}

inline std::string render_records(const std::vector<CandidateRecord>& records, OutputFormat format) {
    std::ostringstream os;
    write_records(os, records, format);
    return os.str();
}

} // namespace fanoscan
