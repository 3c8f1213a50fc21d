#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "curvekit/curve.hpp"
#include "curvekit/features.hpp"

namespace curvekit {

// Taylor coefficient rows (a_i; b_i; c_i) of the three components at a point,
// the J^k(1,3) coordinates: i-th entry = component^(i)(t)/i!.
struct JetCoefficients {
    std::vector<double> a, b, c;  // indices 0..k-1 hold orders 1..k
    int order() const { return static_cast<int>(a.size()); }
};

JetCoefficients jet_coefficients(const JetCurve& c, double t, int k);
inline JetCoefficients jet_coefficients(const SpaceCurve& c, double t, int k) {
    return jet_coefficients(CurveView(c), t, k);
}

// Values of the printed stratum expressions on one coefficient vector. The V
// and T strata have no complete printed polynomial; only the displayed leading
// parts are evaluated here (membership is decided numerically elsewhere).
struct StratumValues {
    Vec3 C_residual;      // (a1, b1, c1)
    double F_value = 0.0;  // a1(b2c3-b3c2) + b1(a3c2-a2c3) + c1(a2b3-a3b2)
    double V_linear = 0.0;  // a1ξ1 + b1ξ2 + c1ξ3 = 24(a2²+b2²+c2²)·F
    double T_dot12 = 0.0;   // a1a2 + b1b2 + c1c2 (tangent cone of T̃1)
    double T_F = 0.0;       // F expression again (tangent cone of T̃2)
    double T_quadric = 0.0;  // |v1×v2|² in jet coordinates
    double T_leading = 0.0;  // 36·quadric²·dot12·F (degree-6 part of the T expression)
};

StratumValues stratum_values(const JetCoefficients& j);

enum class Stratum { C, F, V, T };

const char* stratum_name(Stratum s);

struct StratumLocus {
    Stratum stratum = Stratum::F;
    std::vector<Vec2> points;       // sorted by (angle, radius) around the origin
    std::vector<double> residuals;  // relative certificate residual per point
    bool has_tangent = false;
    Vec2 tangent_direction{1.0, 0.0};
};

struct TraceOptions {
    int grid = 256;
    Tolerances tol;
};

using Box2 = std::array<std::array<double, 2>, 2>;

// Traces {s : certificate(t*(s), s) = 0} where t*(s) continues the near-cusp
// marked point (the root of <γ'_s, γ''_s>) from the cusp at s = 0.
// OpenMP-parallel over grid rows; identical output to the reference below.
StratumLocus trace_bifurcation(const DeformationFamily& fam, Stratum stratum, const Box2& box,
                               const TraceOptions& opt = {});
StratumLocus trace_bifurcation_reference(const DeformationFamily& fam, Stratum stratum,
                                         const Box2& box, const TraceOptions& opt = {});

struct TangentCone {
    Vec2 direction{1.0, 0.0};
    double separation_exponent = 0.0;   // growth of the deviation from the reference line
    double cubic_coefficient = 0.0;     // fitted s2-deviation coefficient at order 3
    bool coincides_with_reference = false;
};

TangentCone tangent_cone(const StratumLocus& locus,
                         std::optional<Vec2> reference_direction = std::nullopt);

struct GenericityCertificates {
    bool generic = false;
    double a2b3 = 0.0;       // Def 4.3 coefficient condition in the adapted frame
    double bc_det = 0.0;     // b4c3 - b3c4 (frame-rotation invariant)
    double param_det = 0.0;  // Jacobian of s -> linear coefficients in the normal plane
    double cusp_t = 0.0;
};

GenericityCertificates frs_genericity(const DeformationFamily& fam,
                                      const TraceOptions& opt = {});

struct ModelComparison {
    int strata_through_origin = 0;
    double fv_angle = 0.0;       // angle between F and V tangents (radians, mod π)
    double tf_angle = 0.0;       // angle between T and F tangents
    double v_separation_exponent = 0.0;
    double v_cubic_coefficient = 0.0;
    std::vector<std::pair<double, std::string>> branches;  // (angle, label) around origin
    std::string cyclic_pattern;
    bool matches_model = false;
};

// Stratification data juxtaposed with the model family's: stratum count, F/V
// tangency, T transversality, and the cyclic branch order around the origin.
ModelComparison compare_to_model(const DeformationFamily& fam, const TraceOptions& opt = {});

// Near-cusp marked point: Newton continuation of <γ'_s, γ''_s> = 0 from t_guess.
double marked_point(const DeformationFamily& fam, Vec2 s, double t_guess, double t_lo,
                    double t_hi);

// Locates the cusp parameter of the s = 0 slice (throws NoCuspAtOrigin).
double cusp_parameter(const DeformationFamily& fam);

// Certificate g(s) for one stratum at the tracked marked point; t_star is
// updated in place so callers can continue along a path.
double stratum_certificate(const DeformationFamily& fam, Stratum stratum, Vec2 s,
                           double& t_star, double* reference = nullptr);

}  // namespace curvekit
