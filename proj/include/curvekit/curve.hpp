#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "curvekit/expression.hpp"
#include "curvekit/vec.hpp"

namespace curvekit {

// A 3-component parametrized curve given by expression trees in t.
struct SpaceCurve {
    std::array<ExprPtr, 3> components;
    double t_min = -1.0;
    double t_max = 1.0;
    std::string label;
};

// A 2-parameter deformation: expression trees in t, s1, s2 over a parameter box.
struct DeformationFamily {
    std::array<ExprPtr, 3> components;
    double t_min = -1.0;
    double t_max = 1.0;
    std::array<std::array<double, 2>, 2> s_box{{{-0.1, 0.1}, {-0.1, 0.1}}};
    std::string label;
};

using ModelSpec = std::variant<SpaceCurve, DeformationFamily>;

// Parses + validates the JSON model document (keys: kind, x/y/z or poly, t_range,
// s_box for families, optional label; anything else is rejected).
ModelSpec load_spec(const std::string& json_text);

SpaceCurve polynomial_curve(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& z, double t_min = -1.0, double t_max = 1.0,
                            std::string label = {});

SpaceCurve family_slice(const DeformationFamily& fam, Vec2 s);

Jet eval_component_jet(const SpaceCurve& c, int component, double t0, int degree);
Jet eval_component_jet(const DeformationFamily& f, int component, double t0, Vec2 s, int degree);

Vec3 curve_point(const SpaceCurve& c, double t);

// Image transformed by p -> R p + shift (components rebuilt as expression trees).
SpaceCurve rigidly_moved(const SpaceCurve& c, const Mat3& rotation, Vec3 shift);
// Parameter substitution t := sub(t); domain endpoints are supplied by the caller.
SpaceCurve reparametrized(const SpaceCurve& c, const ExprPtr& sub, double t_min, double t_max);

// Abstract source of component jets; lets derived curves (evolute, tangent
// indicatrix) flow through the same geometric operations as parsed curves.
class JetCurve {
public:
    virtual ~JetCurve() = default;
    virtual Jet3 jets(double t0, int degree) const = 0;
};

class CurveView final : public JetCurve {
public:
    explicit CurveView(const SpaceCurve& c) : curve_(&c) {}
    Jet3 jets(double t0, int degree) const override {
        return {eval_component_jet(*curve_, 0, t0, degree),
                eval_component_jet(*curve_, 1, t0, degree),
                eval_component_jet(*curve_, 2, t0, degree)};
    }

private:
    const SpaceCurve* curve_;
};

}  // namespace curvekit
