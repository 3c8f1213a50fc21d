#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "curvekit/frenet.hpp"

namespace curvekit {

// Focal curvatures and osculating-sphere data at one point.
struct FocalData {
    double mu1 = 0.0;   // 1/κ
    double mu2 = 0.0;   // -κ'/(κ²τ), arc-length κ'
    double radius = 0.0;
    Vec3 center;
};

FocalData focal_data(const JetCurve& c, double t, const Tolerances& tol = {});
inline FocalData focal_data(const SpaceCurve& c, double t, const Tolerances& tol = {}) {
    return focal_data(CurveView(c), t, tol);
}

// Component jets of the generalized evolute c_γ = γ + (1/κ)N - (κ'/(κ²τ))B.
// Needs base-curve jets of degree `degree`+4; throws ZeroTorsion at flattenings.
Jet3 evolute_jet(const JetCurve& c, double t0, int degree, const Tolerances& tol = {});
inline Jet3 evolute_jet(const SpaceCurve& c, double t0, int degree, const Tolerances& tol = {}) {
    return evolute_jet(CurveView(c), t0, degree, tol);
}

// The generalized evolute as a curve; runs everywhere the base curve has κ,τ ≠ 0.
class EvoluteView final : public JetCurve {
public:
    explicit EvoluteView(const JetCurve& base) : base_(&base) {}
    Jet3 jets(double t0, int degree) const override { return evolute_jet(*base_, t0, degree); }

private:
    const JetCurve* base_;
};

// Tangent indicatrix γ_T = γ'/|γ'| as a curve (height functions of it detect twistings).
class TangentIndicatrixView final : public JetCurve {
public:
    explicit TangentIndicatrixView(const JetCurve& base) : base_(&base) {}
    Jet3 jets(double t0, int degree) const override;

private:
    const JetCurve* base_;
};

struct CoefficientEntry {
    std::string name;
    double computed = 0.0;
    double closed_form = 0.0;
    double rel_dev = 0.0;
};

struct CoefficientReport {
    std::string kind;  // "flattening" | "vertex" | "twisting"
    std::vector<CoefficientEntry> entries;
    std::map<std::string, double> context;
    std::vector<std::string> flags;
};

// Local models of the evolute at the three feature types, each comparing the
// numerically extracted series against the closed forms in normalized position
// (basepoint moved to the origin, frame axes aligned, unit speed).
CoefficientReport evolute_flattening_asymptotics(const SpaceCurve& c, double t0,
                                                 const Tolerances& tol = {});
CoefficientReport evolute_vertex_series(const JetCurve& c, double t0, const Tolerances& tol = {});
inline CoefficientReport evolute_vertex_series(const SpaceCurve& c, double t0,
                                               const Tolerances& tol = {}) {
    return evolute_vertex_series(CurveView(c), t0, tol);
}
CoefficientReport evolute_twisting_series(const JetCurve& c, double t0,
                                          const Tolerances& tol = {});
inline CoefficientReport evolute_twisting_series(const SpaceCurve& c, double t0,
                                                 const Tolerances& tol = {}) {
    return evolute_twisting_series(CurveView(c), t0, tol);
}

// Jets of the curve moved to normalized position at t0: basepoint at the origin,
// (T,N,B) as the coordinate axes, and arc-length parametrization via series
// reversion. The closed-form local models are stated in these coordinates.
Jet3 normalized_position_jets(const JetCurve& c, double t0, int degree,
                              const Tolerances& tol = {});

// Sampled evolute polyline rows (t, x, y, z); points with |τ| below tolerance
// (evolute at infinity) are skipped.
std::vector<std::array<double, 4>> evolute_polyline(const SpaceCurve& c, double lo, double hi,
                                                    int samples);

}  // namespace curvekit
