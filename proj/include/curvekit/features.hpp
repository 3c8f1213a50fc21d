#pragma once

#include <map>
#include <string>
#include <vector>

#include "curvekit/frenet.hpp"

namespace curvekit {

enum class FeatureKind { Flattening, BiFlattening, Vertex, Twisting, Cusp, Degenerate };

const char* feature_kind_name(FeatureKind k);

struct FeaturePoint {
    FeatureKind kind = FeatureKind::Degenerate;
    double t = 0.0;
    std::map<std::string, double> certificates;
    double residual = 0.0;  // relative residual of the defining certificate
    std::string note;
};

// Pointwise certificate values at a regular, non-inflectional point.
// Derivatives marked _prime are arc-length derivatives. The _ref fields are the
// magnitude references the relative thresholds divide by.
struct CertificateRecord {
    double t = 0.0;
    double speed = 0.0;
    double kappa = 0.0, kappa_prime = 0.0;
    double tau = 0.0, tau_prime = 0.0;
    double det3 = 0.0;    // det(γ', γ'', γ''') in t-derivatives
    double vertex = 0.0;  // κκ'τ' + 2κ'²τ - κκ''τ + κ²τ³ (τ-cleared vertex certificate)
    double twist = 0.0;   // κτ' - κ'τ
    double tau_ref = 0.0, tau_prime_ref = 0.0, det3_ref = 0.0, vertex_ref = 0.0, twist_ref = 0.0;
};

CertificateRecord feature_certificates(const JetCurve& c, double t,
                                       const Tolerances& tol = {});
inline CertificateRecord feature_certificates(const SpaceCurve& c, double t,
                                              const Tolerances& tol = {}) {
    return feature_certificates(CurveView(c), t, tol);
}

struct ScanNote {
    std::string kind;
    double t_lo = 0.0, t_hi = 0.0;
    std::string message;
};

struct ScanReport {
    std::vector<FeaturePoint> points;
    std::vector<ScanNote> notes;
};

struct ScanOptions {
    int samples = 0;  // 0: auto (2048 per unit parameter length, at least 64)
    double degenerate_fraction = 0.9;
    Tolerances tol;
};

// OpenMP-parallel scanner: grid evaluation and bracket refinement are
// partitioned across threads; output is identical to the serial reference.
ScanReport scan_features(const JetCurve& c, double lo, double hi, const ScanOptions& opt = {});
inline ScanReport scan_features(const SpaceCurve& c, double lo, double hi,
                                const ScanOptions& opt = {}) {
    return scan_features(CurveView(c), lo, hi, opt);
}

// Plain sequential implementation kept as the reference for testing/benchmarks.
ScanReport scan_features_reference(const JetCurve& c, double lo, double hi,
                                   const ScanOptions& opt = {});
inline ScanReport scan_features_reference(const SpaceCurve& c, double lo, double hi,
                                          const ScanOptions& opt = {}) {
    return scan_features_reference(CurveView(c), lo, hi, opt);
}

struct CuspTest {
    bool is_space_cusp = false;
    double d1_norm = 0.0;
    double d2_norm = 0.0;
    double d23_cross_norm = 0.0;
};

// 2-3-jet recognition of the space cusp model: γ' = 0, γ'' ≠ 0, γ''×γ''' ≠ 0.
CuspTest detect_cusp(const JetCurve& c, double t);
inline CuspTest detect_cusp(const SpaceCurve& c, double t) { return detect_cusp(CurveView(c), t); }

// κ'' - (2κ'²/κ + κ'τ'/τ + κτ²) in arc-length derivatives; zero at vertices.
double vertex_kappa_identity(const JetCurve& c, double t);
inline double vertex_kappa_identity(const SpaceCurve& c, double t) {
    return vertex_kappa_identity(CurveView(c), t);
}

}  // namespace curvekit
