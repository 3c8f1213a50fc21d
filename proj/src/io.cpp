#include "curvekit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace curvekit {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_from_rows(const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows,
                          const std::vector<std::string>& row_tags) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        bool first = true;
        if (!row_tags.empty()) {
            out << row_tags[r];
            first = false;
        }
        for (double v : rows[r]) {
            if (!first) out << ',';
            out << format_double(v);
            first = false;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

struct Bounds {
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool any = false;
    void add(Vec2 p) {
        if (!any) {
            lo_x = hi_x = p.x;
            lo_y = hi_y = p.y;
            any = true;
        } else {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
    }
};

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_svg(const std::vector<LabeledPolyline>& polylines) {
    bool have_curve = false;
    for (const auto& pl : polylines)
        if (pl.points.size() >= 2) have_curve = true;
    if (!have_curve) throw EmptyPlot("render_svg needs at least one polyline with 2+ points");

    Bounds b;
    for (const auto& pl : polylines)
        for (Vec2 p : pl.points) b.add(p);
    b.add({0.0, 0.0});  // keep the origin axes in view
    double w = std::max(b.hi_x - b.lo_x, 1e-12);
    double h = std::max(b.hi_y - b.lo_y, 1e-12);
    double mx = 0.05 * w, my = 0.05 * h;
    double vb_x = b.lo_x - mx, vb_w = w + 2 * mx;
    double vb_h = h + 2 * my;
    // y axis flipped: emit y' = -y and shift the viewBox accordingly
    double vb_yf = -(b.hi_y + my);

    double gap = 0.05 * std::hypot(vb_w, vb_h);
    double stroke = 0.004 * std::max(vb_w, vb_h);
    double marker = 2.5 * stroke;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << format_double(vb_x) << ' '
        << format_double(vb_yf) << ' ' << format_double(vb_w) << ' ' << format_double(vb_h)
        << "\">\n";
    svg << "<line x1=\"" << format_double(vb_x) << "\" y1=\"0\" x2=\""
        << format_double(vb_x + vb_w) << "\" y2=\"0\" stroke=\"#999999\" stroke-width=\""
        << format_double(0.5 * stroke) << "\"/>\n";
    svg << "<line x1=\"0\" y1=\"" << format_double(vb_yf) << "\" x2=\"0\" y2=\""
        << format_double(vb_yf + vb_h) << "\" stroke=\"#999999\" stroke-width=\""
        << format_double(0.5 * stroke) << "\"/>\n";

    for (std::size_t k = 0; k < polylines.size(); ++k) {
        const auto& pl = polylines[k];
        const char* color = kPalette[k % 8];
        if (pl.points.size() == 1) {
            svg << "<circle cx=\"" << format_double(pl.points[0].x) << "\" cy=\""
                << format_double(-pl.points[0].y) << "\" r=\"" << format_double(marker)
                << "\" fill=\"" << color << "\"><title>" << pl.label << "</title></circle>\n";
            continue;
        }
        if (pl.points.empty()) continue;
        std::ostringstream d;
        bool pen_up = true;
        Vec2 prev{};
        for (Vec2 p : pl.points) {
            if (!pen_up && (p - prev).norm() > gap) pen_up = true;
            d << (pen_up ? "M" : "L") << format_double(p.x) << ' ' << format_double(-p.y) << ' ';
            pen_up = false;
            prev = p;
        }
        svg << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"" << format_double(stroke) << "\"><title>" << pl.label
            << "</title></path>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + cfg.out_path);
    out << text;
}

ordered_json report_json(const CoefficientReport& rep) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"name", e.name},
                           {"computed", e.computed},
                           {"closed_form", e.closed_form},
                           {"rel_dev", e.rel_dev}});
    ordered_json ctx = ordered_json::object();
    for (const auto& [k, v] : rep.context) ctx[k] = v;
    return {{"kind", rep.kind}, {"entries", entries}, {"context", ctx}, {"flags", rep.flags}};
}

SpaceCurve expect_curve(ModelSpec&& spec) {
    if (auto* c = std::get_if<SpaceCurve>(&spec)) return *c;
    throw SchemaError("this command expects a \"curve\" document");
}

DeformationFamily expect_family(ModelSpec&& spec) {
    if (auto* f = std::get_if<DeformationFamily>(&spec)) return *f;
    throw SchemaError("this command expects a \"family\" document");
}

Tolerances tolerances_from(const RunConfig& cfg) {
    Tolerances tol;
    if (cfg.tol > 0.0) tol.zero = cfg.tol;
    return tol;
}

int run_analyze(const RunConfig& cfg) {
    SpaceCurve curve = expect_curve(load_spec(read_file(cfg.input_path)));
    double lo = cfg.has_range ? cfg.range_lo : curve.t_min;
    double hi = cfg.has_range ? cfg.range_hi : curve.t_max;
    ScanOptions opt;
    opt.samples = cfg.samples;
    opt.tol = tolerances_from(cfg);
    ScanReport rep = scan_features(curve, lo, hi, opt);
    for (const auto& n : rep.notes)
        std::cerr << "note: " << n.kind << " on [" << format_double(n.t_lo) << ", "
                  << format_double(n.t_hi) << "]: " << n.message << '\n';
    if (cfg.format == "json") {
        ordered_json pts = ordered_json::array();
        for (const auto& p : rep.points) {
            ordered_json cert = ordered_json::object();
            for (const auto& [k, v] : p.certificates) cert[k] = v;
            pts.push_back({{"kind", feature_kind_name(p.kind)},
                           {"t", p.t},
                           {"residual", p.residual},
                           {"certificates", cert},
                           {"note", p.note}});
        }
        ordered_json notes = ordered_json::array();
        for (const auto& n : rep.notes)
            notes.push_back({{"kind", n.kind}, {"t_lo", n.t_lo}, {"t_hi", n.t_hi},
                             {"message", n.message}});
        write_output(cfg, ordered_json{{"points", pts}, {"notes", notes}}.dump(2) + "\n");
        return 0;
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;
    for (const auto& p : rep.points) {
        auto get = [&](const char* k) {
            auto it = p.certificates.find(k);
            return it == p.certificates.end() ? 0.0 : it->second;
        };
        rows.push_back({p.t, p.residual, get("tau"), get("tau_prime"), get("vertex_cert"),
                        get("twist_cert")});
        tags.push_back(feature_kind_name(p.kind));
    }
    write_output(cfg, csv_from_rows({"kind", "t", "residual", "tau", "tau_prime", "vertex_cert",
                                     "twist_cert"},
                                    rows, tags));
    return 0;
}

int run_evolute(const RunConfig& cfg) {
    SpaceCurve curve = expect_curve(load_spec(read_file(cfg.input_path)));
    double lo = cfg.has_range ? cfg.range_lo : curve.t_min;
    double hi = cfg.has_range ? cfg.range_hi : curve.t_max;
    if (!cfg.feature.empty()) {
        double t0 = cfg.has_t ? cfg.t : 0.0;
        CoefficientReport rep;
        if (cfg.feature == "flattening")
            rep = evolute_flattening_asymptotics(curve, t0);
        else if (cfg.feature == "vertex")
            rep = evolute_vertex_series(curve, t0);
        else if (cfg.feature == "twisting")
            rep = evolute_twisting_series(curve, t0);
        else
            throw SchemaError("--feature must be flattening|vertex|twisting");
        if (cfg.format == "json") {
            write_output(cfg, report_json(rep).dump(2) + "\n");
        } else {
            std::vector<std::vector<double>> rows;
            std::vector<std::string> tags;
            for (const auto& e : rep.entries) {
                rows.push_back({e.computed, e.closed_form, e.rel_dev});
                tags.push_back(e.name);
            }
            write_output(cfg, csv_from_rows({"name", "computed", "closed_form", "rel_dev"}, rows,
                                            tags));
        }
        return 0;
    }
    int samples = cfg.samples > 0 ? cfg.samples : 512;
    auto rows4 = evolute_polyline(curve, lo, hi, samples);
    if (cfg.format == "svg") {
        // project to the (x, y) coordinate plane
        LabeledPolyline pl{curve.label.empty() ? "evolute" : curve.label + " evolute", {}};
        for (const auto& r : rows4) pl.points.push_back({r[1], r[2]});
        write_output(cfg, render_svg({pl}));
        return 0;
    }
    if (cfg.format == "json") {
        ordered_json pts = ordered_json::array();
        for (const auto& r : rows4) pts.push_back({{"t", r[0]}, {"x", r[1]}, {"y", r[2]}, {"z", r[3]}});
        write_output(cfg, ordered_json{{"evolute", pts}}.dump(2) + "\n");
        return 0;
    }
    std::vector<std::vector<double>> rows;
    for (const auto& r : rows4) rows.push_back({r[0], r[1], r[2], r[3]});
    write_output(cfg, csv_from_rows({"t", "x", "y", "z"}, rows));
    return 0;
}

int run_bifurcation(const RunConfig& cfg) {
    DeformationFamily fam = expect_family(load_spec(read_file(cfg.input_path)));
    TraceOptions opt;
    opt.grid = cfg.grid;
    opt.tol = tolerances_from(cfg);
    std::vector<Stratum> strata;
    if (cfg.stratum.empty())
        strata = {Stratum::C, Stratum::F, Stratum::V, Stratum::T};
    else if (cfg.stratum == "C")
        strata = {Stratum::C};
    else if (cfg.stratum == "F")
        strata = {Stratum::F};
    else if (cfg.stratum == "V")
        strata = {Stratum::V};
    else if (cfg.stratum == "T")
        strata = {Stratum::T};
    else
        throw SchemaError("--stratum must be one of C|F|V|T");

    std::vector<StratumLocus> loci;
    for (Stratum st : strata) loci.push_back(trace_bifurcation(fam, st, fam.s_box, opt));

    if (cfg.format == "svg") {
        std::vector<LabeledPolyline> pls;
        for (const auto& loc : loci) {
            LabeledPolyline pl{stratum_name(loc.stratum), loc.points};
            pls.push_back(std::move(pl));
        }
        write_output(cfg, render_svg(pls));
        return 0;
    }
    if (cfg.format == "json") {
        GenericityCertificates gc = frs_genericity(fam, opt);
        ordered_json out;
        out["genericity"] = {{"generic", gc.generic},
                             {"a2b3", gc.a2b3},
                             {"b4c3_minus_b3c4", gc.bc_det},
                             {"parameter_jacobian", gc.param_det},
                             {"cusp_t", gc.cusp_t}};
        ordered_json jl = ordered_json::array();
        for (const auto& loc : loci) {
            ordered_json o;
            o["stratum"] = stratum_name(loc.stratum);
            o["points"] = loc.points.size();
            o["has_tangent"] = loc.has_tangent;
            if (loc.has_tangent)
                o["tangent_direction"] = {loc.tangent_direction.x, loc.tangent_direction.y};
            if (loc.points.size() >= 5) {
                TangentCone tc = tangent_cone(loc);
                o["separation_exponent"] = tc.separation_exponent;
                o["cubic_coefficient"] = tc.cubic_coefficient;
            }
            jl.push_back(o);
        }
        out["loci"] = jl;
        write_output(cfg, out.dump(2) + "\n");
        return 0;
    }
    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;
    for (const auto& loc : loci)
        for (std::size_t i = 0; i < loc.points.size(); ++i) {
            rows.push_back({loc.points[i].x, loc.points[i].y, loc.residuals[i]});
            tags.push_back(stratum_name(loc.stratum));
        }
    write_output(cfg, csv_from_rows({"stratum", "s1", "s2", "residual"}, rows, tags));
    return 0;
}

int run_strata(const RunConfig& cfg) {
    ModelSpec spec = load_spec(read_file(cfg.input_path));
    SpaceCurve curve = std::holds_alternative<SpaceCurve>(spec)
                           ? std::get<SpaceCurve>(spec)
                           : family_slice(std::get<DeformationFamily>(spec), {0.0, 0.0});
    double t = cfg.has_t ? cfg.t : 0.0;
    JetCoefficients jc = jet_coefficients(curve, t, std::max(4, cfg.degree));
    StratumValues sv = stratum_values(jc);
    if (cfg.format == "json") {
        ordered_json out{{"t", t},
                         {"C_residual", {sv.C_residual.x, sv.C_residual.y, sv.C_residual.z}},
                         {"F_value", sv.F_value},
                         {"V_linear", sv.V_linear},
                         {"T_dot12", sv.T_dot12},
                         {"T_F", sv.T_F},
                         {"T_quadric", sv.T_quadric},
                         {"T_leading", sv.T_leading}};
        write_output(cfg, out.dump(2) + "\n");
        return 0;
    }
    std::vector<std::vector<double>> rows{{sv.C_residual.x}, {sv.C_residual.y}, {sv.C_residual.z},
                                          {sv.F_value},      {sv.V_linear},    {sv.T_dot12},
                                          {sv.T_quadric},    {sv.T_leading}};
    std::vector<std::string> tags{"C_a1", "C_b1", "C_c1", "F_value", "V_linear",
                                  "T_dot12", "T_quadric", "T_leading"};
    write_output(cfg, csv_from_rows({"name", "value"}, rows, tags));
    return 0;
}

int run_jet(const RunConfig& cfg) {
    SpaceCurve curve = expect_curve(load_spec(read_file(cfg.input_path)));
    double t = cfg.has_t ? cfg.t : 0.0;
    int K = std::min(std::max(0, cfg.degree), kMaxJetDegree);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> tags;
    const char* names[3] = {"x", "y", "z"};
    for (int comp = 0; comp < 3; ++comp) {
        Jet j = eval_component_jet(curve, comp, t, K);
        for (int k = 0; k <= K; ++k) {
            rows.push_back({static_cast<double>(k), j[k]});
            tags.push_back(names[comp]);
        }
    }
    if (cfg.format == "json") {
        ordered_json out;
        for (int comp = 0; comp < 3; ++comp) {
            Jet j = eval_component_jet(curve, comp, t, K);
            ordered_json coeffs = ordered_json::array();
            for (int k = 0; k <= K; ++k) coeffs.push_back(j[k]);
            out[names[comp]] = coeffs;
        }
        out["t"] = t;
        out["degree"] = K;
        write_output(cfg, out.dump(2) + "\n");
        return 0;
    }
    write_output(cfg, csv_from_rows({"component", "order", "coefficient"}, rows, tags));
    return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        if (cfg.command == "analyze") return run_analyze(cfg);
        if (cfg.command == "evolute") return run_evolute(cfg);
        if (cfg.command == "bifurcation") return run_bifurcation(cfg);
        if (cfg.command == "strata") return run_strata(cfg);
        if (cfg.command == "jet") return run_jet(cfg);
        std::cerr << "error: unknown command '" << cfg.command << "'\n";
        return 2;
    } catch (const NonConvergence& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 3;
    } catch (const LostTrack& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 3;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    }
}

}  // namespace curvekit
