#include "curvekit/frenet.hpp"

#include <algorithm>
#include <cmath>

namespace curvekit {

Jet FrameJets::arclength_jet(const Jet& f) const {
    const int n = f.degree();
    std::vector<double> coeffs(n + 1);
    coeffs[0] = f.value();
    Jet cur = f;
    double factorial = 1.0;
    for (int k = 1; k <= n; ++k) {
        cur = Ds(cur);
        factorial *= k;
        coeffs[k] = cur.value() / factorial;
    }
    return Jet(t0, coeffs);
}

FrameJets frame_jets(const Jet3& g, const Tolerances& tol) {
    const int K = g.degree();
    if (K < 4) throw DegreeMismatch("frame_jets needs jets of degree >= 4");
    FrameJets F;
    F.t0 = g.basepoint();
    F.m = K - 3;

    Jet3 d1 = g.derivative_jet();
    Jet3 d2 = d1.derivative_jet();
    Jet3 d3 = d2.derivative_jet();
    F.gamma = g.truncated(F.m);
    F.d1 = d1.truncated(F.m);
    F.d2 = d2.truncated(F.m);
    F.d3 = d3.truncated(F.m);

    // pointwise-relative degeneracy checks: coefficient scales across all orders
    // are the wrong yardstick when the local convergence radius is small
    const double d1n = F.d1.value().norm();
    const double d2n = F.d2.value().norm();
    const double d3n = F.d3.value().norm();
    F.v2 = F.d1.dot(F.d1);
    if (d1n <= tol.regularity * (d2n + d3n + 1e-300))
        throw RegularityError(d1n, "curve is not regular at the basepoint (|γ'| = " +
                                       std::to_string(d1n) + ")");
    F.v = sqrt(F.v2);

    F.cross12 = F.d1.cross(F.d2);
    F.w2 = F.cross12.dot(F.cross12);
    const double cross0 = std::sqrt(std::max(0.0, F.w2.value()));
    if (cross0 <= tol.inflection * (d1n * d2n + 1e-300))
        throw InflectionError(cross0, "inflectional point: |γ'×γ''| = " + std::to_string(cross0));
    F.w = sqrt(F.w2);

    F.p = F.cross12.dot(F.d3);
    F.kappa_t = F.w / (F.v * F.v * F.v);
    F.tau_t = F.p / F.w2;

    Jet inv_v = Jet::constant(1.0, F.m, F.t0) / F.v;
    Jet inv_w = Jet::constant(1.0, F.m, F.t0) / F.w;
    F.T = inv_v * F.d1;
    F.B = inv_w * F.cross12;
    F.N = F.B.cross(F.T);
    return F;
}

FrameJets frame_jets(const JetCurve& c, double t0, int degree, const Tolerances& tol) {
    return frame_jets(c.jets(t0, degree), tol);
}

FrenetData frenet_apparatus(const JetCurve& c, double t0, int degree, const Tolerances& tol) {
    FrameJets F = frame_jets(c, t0, degree, tol);
    FrenetData out;
    out.T = F.T.value();
    out.N = F.N.value();
    out.B = F.B.value();
    out.kappa_jet = F.arclength_jet(F.kappa_t);
    out.tau_jet = F.arclength_jet(F.tau_t);
    out.speed = F.v;
    out.t0 = t0;
    return out;
}

Jet distance_squared_jet(const JetCurve& c, double t0, Vec3 center, int degree) {
    Jet3 g = c.jets(t0, degree);
    Jet3 r{g.x - center.x, g.y - center.y, g.z - center.z};
    return r.dot(r) * 0.5;
}

Jet height_jet(const JetCurve& c, double t0, Vec3 direction, int degree) {
    if (std::abs(direction.norm() - 1.0) > 1e-10)
        throw NonUnitDirection("height direction must be a unit vector");
    Jet3 g = c.jets(t0, degree);
    return g.x * direction.x + g.y * direction.y + g.z * direction.z;
}

AkClass classify_Ak(const Jet& f, double scale, double zero_tol) {
    const int K = f.degree();
    if (K < 2) throw DegreeMismatch("classify_Ak needs degree >= 2");
    if (scale <= 0.0) {
        for (int j = 1; j <= K; ++j) scale = std::max(scale, std::abs(f.derivative(j)));
    }
    AkClass out;
    out.scale = scale;
    if (scale == 0.0) {
        out.kind = AkClass::Kind::DegenerateBeyondK;
        out.k = K;
        return out;
    }
    if (std::abs(f.derivative(1)) > zero_tol * scale) {
        out.kind = AkClass::Kind::NonSingular;
        return out;
    }
    for (int k = 1; k + 1 <= K; ++k) {
        if (std::abs(f.derivative(k + 1)) > zero_tol * scale) {
            out.kind = AkClass::Kind::Ak;
            out.k = k;
            return out;
        }
    }
    out.kind = AkClass::Kind::DegenerateBeyondK;
    out.k = K;
    return out;
}

namespace {

// Rank of a dense row-major matrix with scale-relative pivot threshold.
int matrix_rank(std::vector<std::vector<double>> a, double rel_tol) {
    const int rows = static_cast<int>(a.size());
    const int cols = rows ? static_cast<int>(a[0].size()) : 0;
    double scale = 0.0;
    for (const auto& row : a)
        for (double x : row) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0;
    const double thresh = rel_tol * scale;
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        double best = thresh;
        for (int r = rank; r < rows; ++r) {
            if (std::abs(a[r][col]) > best) {
                best = std::abs(a[r][col]);
                pivot = r;
            }
        }
        if (pivot < 0) continue;
        std::swap(a[rank], a[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            double f = a[r][col] / a[rank][col];
            for (int cc = col; cc < cols; ++cc) a[r][cc] -= f * a[rank][cc];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

VersalityResult versality_test(const Jet& f, int k, std::span<const Jet> speeds) {
    AkClass cls = classify_Ak(f);
    if (cls.kind != AkClass::Kind::Ak || cls.k != k)
        throw Error("versality_test: germ does not have the requested A_k singularity");
    for (const Jet& s : speeds)
        if (s.degree() != f.degree() || s.basepoint() != f.basepoint())
            throw InconsistentDegrees("unfolding speeds must share the germ's degree and basepoint");

    // Quotient basis {1, t, ..., t^{k-1}}; rows are the monomial coordinates.
    std::vector<std::vector<double>> cols;
    std::vector<double> one(k, 0.0);
    one[0] = 1.0;
    cols.push_back(one);
    for (const Jet& s : speeds) {
        std::vector<double> col(k, 0.0);
        for (int j = 0; j < k && j <= s.degree(); ++j) col[j] = s[j];
        cols.push_back(col);
    }
    // Ideal multiples t^i f' , i = 0..k-1; certified ~0 in the quotient for an A_k germ.
    Jet fp = f.derivative_jet();
    for (int i = 0; i < k; ++i) {
        std::vector<double> col(k, 0.0);
        for (int j = i; j < k; ++j)
            if (j - i <= fp.degree()) col[j] = fp[j - i];
        cols.push_back(col);
    }
    // rank works on rows; transpose the column list
    std::vector<std::vector<double>> m(k, std::vector<double>(cols.size(), 0.0));
    for (std::size_t cidx = 0; cidx < cols.size(); ++cidx)
        for (int r = 0; r < k; ++r) m[r][cidx] = cols[cidx][r];

    VersalityResult out;
    out.required_rank = k;
    out.rank = matrix_rank(std::move(m), 1e-9);
    out.versal = (out.rank == k);
    return out;
}

int sphere_contact_order(const JetCurve& c, double t0, Vec3 center, double radius, int degree) {
    if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
    Jet d = distance_squared_jet(c, t0, center, degree);
    const double membership = 0.5 * radius * radius;
    if (std::abs(d.value() - membership) > 1e-8 * std::max(membership, std::abs(d.value())))
        return 0;
    double scale = 0.0;
    for (int j = 1; j <= degree; ++j) scale = std::max(scale, std::abs(d.derivative(j)));
    if (scale == 0.0) return degree;
    for (int j = 1; j <= degree; ++j)
        if (std::abs(d.derivative(j)) > 1e-8 * scale) return j - 1;
    return degree;
}

HelixDefect helix_defect(const JetCurve& c, double t0, int degree) {
    FrameJets F = frame_jets(c, t0, degree);
    HelixDefect out;
    // planar curves have P = <γ'×γ'', γ'''> identically ~0; the helix test is vacuous
    const double cr_scale = std::max({F.cross12.x.coeff_scale(), F.cross12.y.coeff_scale(),
                                      F.cross12.z.coeff_scale(), 1e-300});
    const double d3_scale = std::max({F.d3.x.coeff_scale(), F.d3.y.coeff_scale(),
                                      F.d3.z.coeff_scale(), 1e-300});
    if (F.p.coeff_scale() <= 1e-12 * cr_scale * d3_scale) {
        out.planar = true;
        out.value = 0.0;
        return out;
    }
    Jet3 a1 = F.Ds3(F.gamma);
    Jet3 a2 = F.Ds3(a1);
    Jet3 a3 = F.Ds3(a2);
    Jet3 a4 = F.Ds3(a3);
    Vec3 u2 = a2.value(), u3 = a3.value(), u4 = a4.value();
    out.value = u2.dot(u3.cross(u4));
    return out;
}

}  // namespace curvekit
