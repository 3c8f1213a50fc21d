#pragma once

#include <string>
#include <vector>

#include "curvekit/evolute.hpp"
#include "curvekit/features.hpp"
#include "curvekit/strata.hpp"

namespace curvekit {

struct LabeledPolyline {
    std::string label;
    std::vector<Vec2> points;
};

// Standalone SVG: viewBox fitted to the data plus a 5% margin, mathematical
// orientation (y up), origin axes, one path per polyline run, circle markers
// for single points. Byte-deterministic for identical input.
std::string render_svg(const std::vector<LabeledPolyline>& polylines);

// CSV with '.' decimal, ',' separator, header row, 17 significant digits.
std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& row_tags = {});

std::string format_double(double v);

struct RunConfig {
    std::string command;  // analyze | evolute | bifurcation | strata | jet
    std::string input_path;
    std::string out_path;            // empty: stdout
    std::string format = "csv";      // csv | json | svg
    double range_lo = 0.0, range_hi = 0.0;
    bool has_range = false;
    int samples = 0;
    double tol = 0.0;                // 0: defaults
    int degree = kDefaultJetDegree;
    std::string feature;             // flattening | vertex | twisting
    std::string stratum;             // C | F | V | T (empty: all)
    int grid = 256;
    double t = 0.0;
    bool has_t = false;
};

// Executes one command; returns the process exit status (0 ok, 2 validation
// error, 3 numerical non-convergence) and writes artifacts.
int run(const RunConfig& config);

}  // namespace curvekit
