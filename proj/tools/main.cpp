#include <CLI11.hpp>

#include "curvekit/io.hpp"

namespace {

// LO:HI with both endpoints required
bool parse_range(const std::string& text, double& lo, double& hi) {
    auto colon = text.find(':');
    if (colon == std::string::npos) return false;
    try {
        std::size_t used = 0;
        lo = std::stod(text.substr(0, colon), &used);
        if (used != colon) return false;
        hi = std::stod(text.substr(colon + 1), &used);
        if (used != text.size() - colon - 1) return false;
    } catch (...) {
        return false;
    }
    return lo < hi;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvekit: invariants, feature points, evolutes and bifurcation sets of "
                 "space curves"};
    app.require_subcommand(1);

    curvekit::RunConfig cfg;
    std::string range;

    auto add_common = [&](CLI::App* sub, bool wants_t) {
        sub->add_option("input", cfg.input_path, "model JSON file")->required();
        sub->add_option("--out", cfg.out_path, "output path (default: stdout)");
        sub->add_option("--format", cfg.format, "csv|json|svg")->default_str("csv");
        sub->add_option("--range", range, "t-range override LO:HI");
        sub->add_option("--samples", cfg.samples, "scan samples");
        sub->add_option("--tol", cfg.tol, "zero-classification tolerance override")
            ->check(CLI::PositiveNumber);
        sub->add_option("--degree", cfg.degree, "jet degree");
        if (wants_t) sub->add_option("--t", cfg.t, "evaluation parameter");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "scan a curve for feature points");
    add_common(analyze, false);
    CLI::App* evolute = app.add_subcommand("evolute", "evolute polyline or local-model report");
    add_common(evolute, true);
    evolute->add_option("--feature", cfg.feature,
                        "local model to verify: flattening|vertex|twisting");
    CLI::App* bifurcation =
        app.add_subcommand("bifurcation", "trace the bifurcation set of a cusp family");
    add_common(bifurcation, false);
    bifurcation->add_option("--stratum", cfg.stratum, "restrict to one stratum: C|F|V|T");
    bifurcation->add_option("--grid", cfg.grid, "grid resolution per axis");
    CLI::App* strata = app.add_subcommand("strata", "stratum expressions of the jet at --t");
    add_common(strata, true);
    CLI::App* jet = app.add_subcommand("jet", "raw component jets at --t");
    add_common(jet, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (CLI::App* sub : {analyze, evolute, bifurcation, strata, jet})
        if (sub->parsed()) {
            cfg.command = sub->get_name();
            cfg.has_t = sub->get_option_no_throw("--t") && sub->count("--t") > 0;
        }
    if (!range.empty()) {
        if (!parse_range(range, cfg.range_lo, cfg.range_hi)) {
            std::cerr << "error: --range expects LO:HI with LO < HI\n";
            return 2;
        }
        cfg.has_range = true;
    }
    if (cfg.samples != 0 && cfg.samples < 16) {
        std::cerr << "error: --samples must be at least 16\n";
        return 2;
    }
    return curvekit::run(cfg);
}
