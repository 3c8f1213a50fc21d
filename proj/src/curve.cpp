#include "curvekit/curve.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace curvekit {

namespace {

ExprPtr poly_expr(const std::vector<double>& coeffs) {
    ExprPtr acc = expr_const(coeffs.empty() ? 0.0 : coeffs[0]);
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0.0) continue;
        ExprPtr mono = (j == 1) ? expr_var(Var::T) : expr_pow(expr_var(Var::T), static_cast<int>(j));
        acc = expr_binary(BinaryOp::Add, acc, expr_binary(BinaryOp::Mul, expr_const(coeffs[j]), mono));
    }
    return acc;
}

std::array<ExprPtr, 3> components_from_json(const nlohmann::json& doc) {
    const bool has_xyz = doc.contains("x") || doc.contains("y") || doc.contains("z");
    const bool has_poly = doc.contains("poly");
    if (has_xyz && has_poly) throw SchemaError("give either x/y/z strings or poly, not both");
    std::array<ExprPtr, 3> comps;
    if (has_poly) {
        const auto& p = doc["poly"];
        if (!p.is_array() || p.size() != 3) throw SchemaError("poly must be 3 arrays of numbers");
        for (int i = 0; i < 3; ++i) {
            if (!p[i].is_array()) throw SchemaError("poly must be 3 arrays of numbers");
            std::vector<double> coeffs;
            for (const auto& v : p[i]) {
                if (!v.is_number()) throw SchemaError("poly entries must be numbers");
                coeffs.push_back(v.get<double>());
            }
            comps[i] = poly_expr(coeffs);
        }
        return comps;
    }
    const char* keys[3] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i) {
        if (!doc.contains(keys[i]))
            throw SchemaError(std::string("missing required component \"") + keys[i] + "\"");
        if (!doc[keys[i]].is_string())
            throw SchemaError(std::string("component \"") + keys[i] + "\" must be a string");
        comps[i] = parse_expression(doc[keys[i]].get<std::string>());
    }
    return comps;
}

void read_range(const nlohmann::json& doc, const char* key, double& lo, double& hi) {
    if (!doc.contains(key)) throw SchemaError(std::string("missing required key \"") + key + "\"");
    const auto& r = doc[key];
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
        throw SchemaError(std::string("\"") + key + "\" must be [lo, hi]");
    lo = r[0].get<double>();
    hi = r[1].get<double>();
    if (!(lo < hi)) throw SchemaError(std::string("\"") + key + "\" must satisfy lo < hi");
}

bool uses_params(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Constant: return false;
        case Expr::Kind::Variable: return e.var != Var::T;
        case Expr::Kind::Unary: return uses_params(*e.lhs);
        case Expr::Kind::Binary: return uses_params(*e.lhs) || uses_params(*e.rhs);
        case Expr::Kind::PowInt: return uses_params(*e.lhs);
    }
    return false;
}

}  // namespace

ModelSpec load_spec(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& ex) {
        throw SchemaError(std::string("invalid JSON: ") + ex.what());
    }
    if (!doc.is_object()) throw SchemaError("document must be a JSON object");

    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw SchemaError("missing required key \"kind\" (\"curve\" or \"family\")");
    const std::string kind = doc["kind"].get<std::string>();
    if (kind != "curve" && kind != "family")
        throw SchemaError("\"kind\" must be \"curve\" or \"family\"");

    static const std::set<std::string> curve_keys = {"kind", "x", "y", "z", "poly", "t_range", "label"};
    static const std::set<std::string> family_keys = {"kind", "x",       "y",    "z",
                                                      "poly", "t_range", "s_box", "label"};
    const auto& allowed = (kind == "curve") ? curve_keys : family_keys;
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (!allowed.count(key)) throw SchemaError("unknown key \"" + key + "\"");
    }

    std::string label = doc.contains("label") ? doc["label"].get<std::string>() : std::string{};
    auto comps = components_from_json(doc);
    double t_lo, t_hi;
    read_range(doc, "t_range", t_lo, t_hi);

    if (kind == "curve") {
        for (const auto& c : comps)
            if (uses_params(*c)) throw SchemaError("curve components must not use s1/s2");
        return SpaceCurve{comps, t_lo, t_hi, label};
    }

    if (!doc.contains("s_box")) throw SchemaError("missing required key \"s_box\"");
    const auto& box = doc["s_box"];
    if (!box.is_array() || box.size() != 2) throw SchemaError("\"s_box\" must be [[lo,hi],[lo,hi]]");
    DeformationFamily fam;
    fam.components = comps;
    fam.t_min = t_lo;
    fam.t_max = t_hi;
    fam.label = label;
    for (int i = 0; i < 2; ++i) {
        const auto& r = box[i];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
            throw SchemaError("\"s_box\" must be [[lo,hi],[lo,hi]]");
        fam.s_box[i][0] = r[0].get<double>();
        fam.s_box[i][1] = r[1].get<double>();
        if (!(fam.s_box[i][0] < fam.s_box[i][1]))
            throw SchemaError("\"s_box\" entries must satisfy lo < hi");
    }
    return fam;
}

SpaceCurve polynomial_curve(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& z, double t_min, double t_max,
                            std::string label) {
    return SpaceCurve{{poly_expr(x), poly_expr(y), poly_expr(z)}, t_min, t_max, std::move(label)};
}

SpaceCurve family_slice(const DeformationFamily& fam, Vec2 s) {
    SpaceCurve c;
    for (int i = 0; i < 3; ++i) c.components[i] = bind_params(fam.components[i], s.x, s.y);
    c.t_min = fam.t_min;
    c.t_max = fam.t_max;
    c.label = fam.label;
    return c;
}

Jet eval_component_jet(const SpaceCurve& c, int component, double t0, int degree) {
    return eval_jet(*c.components[component], t0, degree);
}

Jet eval_component_jet(const DeformationFamily& f, int component, double t0, Vec2 s, int degree) {
    return eval_jet(*f.components[component], t0, degree, s.x, s.y);
}

Vec3 curve_point(const SpaceCurve& c, double t) {
    return {eval_scalar(*c.components[0], t), eval_scalar(*c.components[1], t),
            eval_scalar(*c.components[2], t)};
}

SpaceCurve rigidly_moved(const SpaceCurve& c, const Mat3& rotation, Vec3 shift) {
    SpaceCurve out = c;
    const double sh[3] = {shift.x, shift.y, shift.z};
    for (int i = 0; i < 3; ++i) {
        ExprPtr acc = expr_const(sh[i]);
        for (int j = 0; j < 3; ++j) {
            const double r = rotation.m[i][j];
            if (r == 0.0) continue;
            acc = expr_binary(BinaryOp::Add, acc,
                              expr_binary(BinaryOp::Mul, expr_const(r), c.components[j]));
        }
        out.components[i] = acc;
    }
    return out;
}

SpaceCurve reparametrized(const SpaceCurve& c, const ExprPtr& sub, double t_min, double t_max) {
    SpaceCurve out = c;
    for (int i = 0; i < 3; ++i) out.components[i] = substitute_t(c.components[i], sub);
    out.t_min = t_min;
    out.t_max = t_max;
    return out;
}

}  // namespace curvekit
