#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockavg/averaging_operator.hpp"
#include "blockavg/config_io.hpp"
#include "blockavg/constants.hpp"
#include "blockavg/extremal.hpp"
#include "blockavg/sampling.hpp"

namespace {

using namespace blockavg;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDiverged = 3;

struct NamedBound {
    std::string name;
    BoundReport report;
};

/// The constant that certifies the inequality for this config's norming.
NamedBound certifying_bound(const AveragingConfig& config, double tol) {
    switch (config.norming.kind()) {
    case NormingScheme::Kind::derived:
        return {"averaging-bound", averaging_bound(config, tol)};
    case NormingScheme::Kind::power:
        return {"general-averaging-bound", general_averaging_bound(config, tol)};
    case NormingScheme::Kind::root_of_boundary:
    default: {
        const double r = certified_ratio(config.partition);
        return {"lacunary-bound",
                BoundReport{lacunary_bound(r, config.exponents.q), 0, 0.0, true}};
    }
    }
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

int run_bounds(const std::string& config_path, double tol, const std::string& output) {
    const AveragingConfig config = load_config(config_path);
    std::vector<NamedBound> rows;

    switch (config.norming.kind()) {
    case NormingScheme::Kind::derived:
        rows.push_back({"averaging-bound", averaging_bound(config, tol)});
        rows.push_back({"general-averaging-bound", general_averaging_bound(config, tol)});
        break;
    case NormingScheme::Kind::power:
        rows.push_back({"general-averaging-bound", general_averaging_bound(config, tol)});
        break;
    case NormingScheme::Kind::root_of_boundary: {
        const double r = certified_ratio(config.partition);
        rows.push_back({"lacunary-bound",
                        BoundReport{lacunary_bound(r, config.exponents.q), 0, 0.0, true}});
        try {
            rows.push_back({"general-averaging-bound", general_averaging_bound(config, tol)});
        } catch (const error& e) {
            if (e.code() != errc::tail_not_boundable) {
                throw;
            }
            std::cerr << "note: general bound skipped (" << e.what() << ")\n";
        }
        if (config.partition.extension().kind == ExtensionKind::geometric &&
            std::abs(config.exponents.p - 2.0) <= 1e-12) {
            const double sharp = geometric_sharp_constant(config.partition.extension().base);
            rows.push_back({"sharp-constant", BoundReport{sharp, 0, 0.0, true}});
            rows.push_back({"sharp-constant-squared", BoundReport{sharp * sharp, 0, 0.0, true}});
        }
        break;
    }
    }

    if (output == "json") {
        json out;
        out["config"] = config_id(config);
        json list = json::array();
        for (const auto& row : rows) {
            json item = to_json(row.report);
            item["name"] = row.name;
            list.push_back(item);
        }
        out["bounds"] = list;
        std::cout << out.dump(2) << "\n";
    } else if (output == "csv") {
        std::cout << "name,constant,truncation_level,tail_bound,converged\n";
        for (const auto& row : rows) {
            std::cout << row.name << ',' << format_float(row.report.constant) << ','
                      << row.report.truncation_level << ',' << format_float(row.report.tail_bound)
                      << ',' << (row.report.converged ? "true" : "false") << "\n";
        }
    } else {
        std::cout << "config: " << config_id(config) << "\n";
        std::printf("%-26s %-22s %-8s %-14s %s\n", "constant", "value", "level", "tail_bound",
                    "converged");
        for (const auto& row : rows) {
            std::printf("%-26s %-22.12g %-8lld %-14.6g %s\n", row.name.c_str(),
                        row.report.constant, static_cast<long long>(row.report.truncation_level),
                        row.report.tail_bound, yes_no(row.report.converged).c_str());
        }
    }

    for (const auto& row : rows) {
        if (!row.report.converged) {
            std::cerr << "constant diverges: " << row.name << "\n";
            return kExitDiverged;
        }
    }
    return kExitOk;
}

int run_verify(const std::string& config_path, int samples, std::uint64_t seed, double tol,
               const std::string& output) {
    if (samples < 1) {
        std::cerr << "verify requires samples >= 1\n";
        return kExitInvalid;
    }
    const AveragingConfig config = load_config(config_path);
    const NamedBound bound = certifying_bound(config, tol);
    if (!bound.report.converged) {
        std::cerr << "constant diverges: " << bound.name << "\n";
        return kExitDiverged;
    }
    const std::string id = config_id(config);
    const std::size_t length = static_cast<std::size_t>(config.partition.boundaries().back());

    GaussianSource source(seed);
    int violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();

    if (output == "csv") {
        std::cout << "config_id,sample_id,lhs,rhs_norm,constant,slack,holds\n";
    }
    for (int s = 1; s <= samples; ++s) {
        const TruncatedSequence a = random_complex_sequence(length, source);
        const VerificationReport rep = verify_inequality(a, config, bound.report);
        if (!rep.holds) {
            ++violations;
        }
        min_slack = std::min(min_slack, rep.slack);
        if (output == "csv") {
            std::cout << id << ',' << s << ',' << format_float(rep.lhs) << ','
                      << format_float(rep.rhs_norm) << ',' << format_float(rep.bound_constant)
                      << ',' << format_float(rep.slack) << ',' << (rep.holds ? "true" : "false")
                      << "\n";
        }
    }
    if (output == "json") {
        json out{{"config", id},
                 {"constant", bound.report.constant},
                 {"constant_name", bound.name},
                 {"samples", samples},
                 {"violations", violations},
                 {"min_slack", min_slack}};
        std::cout << out.dump(2) << "\n";
    } else if (output == "table") {
        std::printf("config: %s\nconstant (%s): %.12g\nsamples: %d  violations: %d  min slack: %.12g\n",
                    id.c_str(), bound.name.c_str(), bound.report.constant, samples, violations,
                    min_slack);
    }
    return violations == 0 ? kExitOk : kExitViolation;
}

int run_norm(const std::string& config_path, std::int64_t blocks, double tol, std::uint64_t seed,
             const std::string& output) {
    const AveragingConfig config = load_config(config_path);
    if (blocks < 1 || blocks > config.partition.stored_blocks()) {
        std::cerr << "norm requires 1 <= blocks <= stored blocks ("
                  << config.partition.stored_blocks() << ")\n";
        return kExitInvalid;
    }
    PowerIterationOptions options;
    options.tol = tol;
    options.seed = seed;

    struct Row {
        std::int64_t k;
        std::int64_t n;
        NormEstimate estimate;
    };
    std::vector<Row> rows;
    for (std::int64_t k = 1; k <= blocks; ++k) {
        rows.push_back({k, config.partition.boundary(k), truncated_operator_norm(config, k, options)});
    }

    if (output == "json") {
        json list = json::array();
        for (const auto& row : rows) {
            list.push_back(json{{"blocks", row.k},
                                {"columns", row.n},
                                {"norm", row.estimate.value},
                                {"converged", row.estimate.converged},
                                {"iterations", row.estimate.iterations}});
        }
        std::cout << json{{"config", config_id(config)}, {"norms", list}}.dump(2) << "\n";
    } else if (output == "csv") {
        std::cout << "blocks,columns,norm,converged,iterations\n";
        for (const auto& row : rows) {
            std::cout << row.k << ',' << row.n << ',' << format_float(row.estimate.value) << ','
                      << (row.estimate.converged ? "true" : "false") << ','
                      << row.estimate.iterations << "\n";
        }
    } else {
        std::cout << "config: " << config_id(config) << "\n";
        std::printf("%-8s %-12s %-22s %-10s %s\n", "blocks", "columns", "norm", "converged",
                    "iterations");
        for (const auto& row : rows) {
            std::printf("%-8lld %-12lld %-22.12g %-10s %d\n", static_cast<long long>(row.k),
                        static_cast<long long>(row.n), row.estimate.value,
                        yes_no(row.estimate.converged).c_str(), row.estimate.iterations);
        }
    }
    for (const auto& row : rows) {
        if (!row.estimate.converged) {
            std::cerr << "warning: power iteration did not converge at blocks=" << row.k << "\n";
        }
    }
    return kExitOk;
}

int run_extremal(std::int64_t base, double rate, const std::string& output) {
    const ExtremalParams params(base, rate);
    const double l2 = extremal_l2_norm_sq(params);
    const double lhs = extremal_lhs_sum(params);
    const double ratio = std::sqrt(lhs / l2);
    const double sharp = geometric_sharp_constant(base);
    if (output == "json") {
        std::cout << json{{"base", base},        {"rate", rate},   {"l2_norm_sq", l2},
                          {"lhs_sum", lhs},      {"ratio", ratio}, {"sharp_constant", sharp},
                          {"gap", sharp - ratio}}
                         .dump(2)
                  << "\n";
    } else if (output == "csv") {
        std::cout << "base,rate,l2_norm_sq,lhs_sum,ratio,sharp_constant,gap\n";
        std::cout << base << ',' << format_float(rate) << ',' << format_float(l2) << ','
                  << format_float(lhs) << ',' << format_float(ratio) << ',' << format_float(sharp)
                  << ',' << format_float(sharp - ratio) << "\n";
    } else {
        std::printf("extremal family: base=%lld rate=%.12g\n", static_cast<long long>(base), rate);
        std::printf("  squared l2 norm     %.12g\n", l2);
        std::printf("  averaged block sum  %.12g\n", lhs);
        std::printf("  ratio               %.12g\n", ratio);
        std::printf("  sharp constant      %.12g\n", sharp);
        std::printf("  gap                 %.12g\n", sharp - ratio);
    }
    return kExitOk;
}

int run_sweep(std::int64_t base, const std::vector<double>& grid, const std::string& output) {
    const SweepResult result = sharpness_sweep(base, grid);
    for (double r : result.skipped) {
        std::cerr << "skipped rate " << format_float(r) << " (outside (sqrt(base), base))\n";
    }
    if (output == "json") {
        json list = json::array();
        for (const auto& row : result.rows) {
            list.push_back(json{{"rate", row.rate},
                                {"ratio", row.ratio},
                                {"sharp_constant", row.sharp_constant},
                                {"gap", row.gap}});
        }
        std::cout << json{{"base", base}, {"rows", list}, {"skipped", result.skipped}}.dump(2)
                  << "\n";
    } else if (output == "table") {
        std::printf("%-12s %-22s %-22s %s\n", "rate", "ratio", "sharp_constant", "gap");
        for (const auto& row : result.rows) {
            std::printf("%-12.6g %-22.12g %-22.12g %.12g\n", row.rate, row.ratio,
                        row.sharp_constant, row.gap);
        }
    } else {
        std::cout << "r,ratio,sharp_constant,gap\n";
        for (const auto& row : result.rows) {
            std::cout << format_float(row.rate) << ',' << format_float(row.ratio) << ','
                      << format_float(row.sharp_constant) << ',' << format_float(row.gap) << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted block-averaging operators on lp sequences: bound constants, "
                 "inequality verification, truncated operator norms, sharpness sweeps"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output = "table";
    std::uint64_t seed = 42;
    int samples = 1000;
    double tol = 1e-10;
    std::int64_t blocks = 0;
    std::int64_t base = 0;
    double rate = 0.0;
    std::vector<double> grid;

    CLI::App* bounds = app.add_subcommand("bounds", "compute the applicable bound constants");
    bounds->add_option("--config", config_path, "config JSON path")->required();
    bounds->add_option("--tol", tol, "truncation tolerance");

    CLI::App* verify = app.add_subcommand("verify", "check the inequality on random sequences");
    verify->add_option("--config", config_path, "config JSON path")->required();
    verify->add_option("--samples", samples, "number of random sequences");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--tol", tol, "truncation tolerance");

    CLI::App* norm = app.add_subcommand("norm", "truncated operator norms (p = 2)");
    norm->add_option("--config", config_path, "config JSON path")->required();
    norm->add_option("--blocks", blocks, "number of truncation levels")->required();
    norm->add_option("--tol", tol, "power iteration tolerance");
    norm->add_option("--seed", seed, "power iteration start seed");

    CLI::App* extremal = app.add_subcommand("extremal", "closed forms of the extremal family");
    extremal->add_option("--base", base, "integer base b >= 2")->required();
    extremal->add_option("--rate", rate, "decay rate r, sqrt(b) < r < b")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "ratio vs sharp constant along a rate grid");
    sweep->add_option("--base", base, "integer base b >= 2")->required();
    sweep->add_option("--grid", grid, "comma-separated rates")->required()->delimiter(',');

    for (CLI::App* cmd : {bounds, verify, norm, extremal, sweep}) {
        cmd->add_option("--output", output, "output format")
            ->check(CLI::IsMember({"table", "json", "csv"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << e.what() << "\n" << app.help();
        return kExitInvalid;
    }

    // verify and sweep emit machine-readable CSV unless told otherwise
    if (CLI::App* active = app.get_subcommands().front();
        active->get_option("--output")->count() == 0) {
        output = (active == verify || active == sweep) ? "csv" : "table";
    }

    try {
        if (bounds->parsed()) {
            return run_bounds(config_path, tol, output);
        }
        if (verify->parsed()) {
            return run_verify(config_path, samples, seed, tol, output);
        }
        if (norm->parsed()) {
            return run_norm(config_path, blocks, tol, seed, output);
        }
        if (extremal->parsed()) {
            return run_extremal(base, rate, output);
        }
        if (sweep->parsed()) {
            return run_sweep(base, grid, output);
        }
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == errc::diverged_constant ? kExitDiverged : kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
