#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "fanoscan/fanoscan.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct SearchOptions {
    std::string bound = "4";
    std::string qmin;
    std::int64_t chi = 1;
    bool non_gorenstein = false;
    bool postfilter = false;
    std::string format = "md";
    std::string out;
    unsigned workers = 1;
};

struct VerifyOptions {
    std::string target;
    std::string format = "text";
    unsigned workers = 1;
};

int usage_error(const std::string& message) {
    std::cerr << "fanoscan: " << message << '\n';
    return exit_usage;
}

int run_search_command(const SearchOptions& opts, bool bound_given) {
    using namespace fanoscan;
    SearchConfig config;
    try {
        Rational bound = Rational::parse(opts.bound);
        auto allowed = allowed_slope_coefficients();
        if (std::find(allowed.begin(), allowed.end(), bound) == allowed.end()) {
            return usage_error("--bound " + opts.bound + " is not allowed; use one of 3, 16/5, 4");
        }
        if (opts.non_gorenstein) {
            if (bound_given && bound != Rational(4)) {
                return usage_error("--non-gorenstein fixes the bound to 4");
            }
            config = non_gorenstein_config();
        } else {
            config.slope_coeff = bound;
        }
        if (!opts.qmin.empty()) {
            Rational qmin = Rational::parse(opts.qmin);
            if (!qmin.is_integer() || qmin.sign() <= 0) {
                return usage_error("--qmin must be a positive integer");
            }
            config.q_min = qmin.numerator();
        }
        config.chi = opts.chi;
        config.apply_km_postfilter = opts.postfilter;
        config.workers = opts.workers;
        config.validate();
    } catch (const Error& e) {
        return usage_error(e.what());
    }

    OutputFormat format = parse_output_format(opts.format);
    SearchResult result = run_search(config);
    std::cerr << "step1=" << result.stats.step1 << " step1_required=" << result.stats.step1_required
              << " step2=" << result.stats.step2 << " step3=" << result.stats.step3
              << " emitted=" << result.stats.emitted << '\n';
    if (opts.out.empty()) {
        write_records(std::cout, result.records, format);
    } else {
        std::ofstream file(opts.out);
        if (!file) {
            std::cerr << "fanoscan: cannot open " << opts.out << " for writing\n";
            return exit_failed;
        }
        write_records(file, result.records, format);
    }
    return exit_ok;
}

int run_verify_command(const VerifyOptions& opts) {
    using namespace fanoscan;
    auto reports = run_verification(opts.target, opts.workers);
    bool all_passed = true;
    if (opts.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : reports) {
            doc.push_back(r.to_json());
            all_passed = all_passed && r.passed();
        }
        std::cout << doc.dump(2) << '\n';
    } else {
        for (const auto& r : reports) {
            std::cout << r.to_text();
            all_passed = all_passed && r.passed();
        }
        if (opts.target == "all") {
            std::cout << "not machine-checked (geometric steps):\n";
            for (const auto& claim : unchecked_claims()) std::cout << "  - " << claim << '\n';
        }
    }
    return all_passed ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact search for large Q-Fano indices and checks of the supporting arithmetic"};
    app.require_subcommand(1);

    SearchOptions search;
    auto* search_cmd = app.add_subcommand("search", "Enumerate baskets passing the Riemann-Roch and slope tests");
    auto* bound_opt = search_cmd->add_option("--bound", search.bound, "Slope coefficient: 3, 16/5 or 4");
    search_cmd->add_option("--qmin", search.qmin, "Smallest index q to consider (default 61, 33 non-Gorenstein)");
    search_cmd->add_option("--chi", search.chi, "chi(O_X)")->check(CLI::PositiveNumber);
    auto* ng_flag = search_cmd->add_flag("--non-gorenstein", search.non_gorenstein,
                                         "Require a Kawakita index set, b = 4, default q_min 33");
    search_cmd->add_flag("--postfilter", search.postfilter, "Drop rows above 4q^2/(q^2+2q-4)");
    search_cmd->add_option("--format", search.format, "csv, json or md")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    search_cmd->add_option("--out", search.out, "Write the table to FILE");
    search_cmd->add_option("--workers", search.workers, "Worker threads")->check(CLI::PositiveNumber);
    ng_flag->excludes(bound_opt);

    VerifyOptions verify;
    auto* verify_cmd = app.add_subcommand("verify", "Run arithmetic verifiers");
    verify_cmd->add_option("target", verify.target, "table1, torsion, h0, minp, coeff-lemma or all")
        ->required()
        ->check(CLI::IsMember(fanoscan::verification_targets()));
    verify_cmd->add_option("--format", verify.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    verify_cmd->add_option("--workers", verify.workers, "Worker threads for the table search")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (search_cmd->parsed()) {
            if (search.qmin.empty() && !search.non_gorenstein) search.qmin = "61";
            return run_search_command(search, bound_opt->count() > 0);
        }
        return run_verify_command(verify);
    } catch (const std::exception& e) {
        std::cerr << "fanoscan: " << e.what() << '\n';
        return exit_failed;
    }
}
