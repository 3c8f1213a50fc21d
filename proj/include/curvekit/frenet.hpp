#pragma once

#include <span>
#include <vector>

#include "curvekit/curve.hpp"
#include "curvekit/vec.hpp"

namespace curvekit {

struct Tolerances {
    double regularity = 1e-10;   // |γ'| relative to its jet coefficient scale
    double inflection = 1e-10;   // |γ'×γ''| relative to the product of scales
    double zero = 1e-8;          // derivative-zero threshold for classification
};

// Frenet frame at t0 plus invariant jets. kappa_jet/tau_jet are series in arc
// length measured from t0; speed is |γ'(t)| as a series in t.
struct FrenetData {
    Vec3 T, N, B;
    Jet kappa_jet, tau_jet;
    Jet speed;
    double t0 = 0.0;
};

// All the working jets (in t) behind the Frenet apparatus. Everything lives at
// the common degree m = K - 3 so the quotients are formed once.
struct FrameJets {
    Jet3 gamma, d1, d2, d3;  // position and t-derivatives, truncated to degree m
    Jet v2, v;               // |γ'|^2 and |γ'|
    Jet3 cross12;            // γ' × γ''
    Jet w2, w;               // |γ'×γ''|^2 and |γ'×γ''|
    Jet p;                   // <γ'×γ'', γ'''>
    Jet kappa_t, tau_t;      // κ, τ as functions of t
    Jet3 T, N, B;
    int m = 0;
    double t0 = 0.0;

    // Arc-length derivative of a scalar jet in t (degree drops by one).
    Jet Ds(const Jet& f) const { return f.derivative_jet() / v.truncated(f.degree() - 1); }
    Jet3 Ds3(const Jet3& f) const { return {Ds(f.x), Ds(f.y), Ds(f.z)}; }
    // Series of f in arc length from t0, carrying f.degree() derivatives.
    Jet arclength_jet(const Jet& f) const;
};

FrameJets frame_jets(const Jet3& g, const Tolerances& tol = {});
FrameJets frame_jets(const JetCurve& c, double t0, int degree = kDefaultJetDegree,
                     const Tolerances& tol = {});

FrenetData frenet_apparatus(const JetCurve& c, double t0, int degree = kDefaultJetDegree,
                            const Tolerances& tol = {});
inline FrenetData frenet_apparatus(const SpaceCurve& c, double t0,
                                   int degree = kDefaultJetDegree, const Tolerances& tol = {}) {
    return frenet_apparatus(CurveView(c), t0, degree, tol);
}

Jet distance_squared_jet(const JetCurve& c, double t0, Vec3 center, int degree);
inline Jet distance_squared_jet(const SpaceCurve& c, double t0, Vec3 center, int degree) {
    return distance_squared_jet(CurveView(c), t0, center, degree);
}

Jet height_jet(const JetCurve& c, double t0, Vec3 direction, int degree);
inline Jet height_jet(const SpaceCurve& c, double t0, Vec3 direction, int degree) {
    return height_jet(CurveView(c), t0, direction, degree);
}

struct AkClass {
    enum class Kind { NonSingular, Ak, DegenerateBeyondK } kind = Kind::NonSingular;
    int k = 0;          // meaningful for Kind::Ak (and the jet degree for Degenerate)
    double scale = 0.0;  // the magnitude the thresholds were relative to
};

// A_k classification of a function jet: NonSingular if f'(0) is nonzero at the
// relative threshold, else the smallest k with f^(k+1)(0) nonzero.
AkClass classify_Ak(const Jet& f, double scale = 0.0, double zero_tol = 1e-8);

struct VersalityResult {
    bool versal = false;
    int rank = 0;
    int required_rank = 0;
};

// Finite-jet R+-versality: in the (k-1)-jet quotient the ideal multiples of f'
// truncate away, so the span of {1, speeds...} (plus the ideal columns) must
// reach full rank k.
VersalityResult versality_test(const Jet& f, int k, std::span<const Jet> speeds);

int sphere_contact_order(const JetCurve& c, double t0, Vec3 center, double radius,
                         int degree = kDefaultJetDegree);
inline int sphere_contact_order(const SpaceCurve& c, double t0, Vec3 center, double radius,
                                int degree = kDefaultJetDegree) {
    return sphere_contact_order(CurveView(c), t0, center, radius, degree);
}

struct HelixDefect {
    double value = 0.0;
    bool planar = false;  // τ ≡ 0 on the jet; the determinant test is vacuous there
};

// det(α'', α''', α'''') in arc-length derivatives; identically zero on helices.
HelixDefect helix_defect(const JetCurve& c, double t0, int degree = kDefaultJetDegree);
inline HelixDefect helix_defect(const SpaceCurve& c, double t0, int degree = kDefaultJetDegree) {
    return helix_defect(CurveView(c), t0, degree);
}

}  // namespace curvekit
