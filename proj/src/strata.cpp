#include "curvekit/strata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvekit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FamilyJets {
    const DeformationFamily* fam;
    Vec2 s;
    Jet3 jets(double t, int K) const {
        return {eval_component_jet(*fam, 0, t, s, K), eval_component_jet(*fam, 1, t, s, K),
                eval_component_jet(*fam, 2, t, s, K)};
    }
};

int stratum_jet_degree(Stratum st) {
    switch (st) {
        case Stratum::C: return 3;
        case Stratum::F: return 3;
        case Stratum::T: return 5;
        case Stratum::V: return 6;
    }
    return 6;
}

}  // namespace

const char* stratum_name(Stratum s) {
    switch (s) {
        case Stratum::C: return "C";
        case Stratum::F: return "F";
        case Stratum::V: return "V";
        case Stratum::T: return "T";
    }
    return "?";
}

JetCoefficients jet_coefficients(const JetCurve& c, double t, int k) {
    if (k < 4) throw Error("jet_coefficients needs order k >= 4");
    if (k > kMaxJetDegree) throw DegreeMismatch("jet order exceeds the jet budget");
    Jet3 g = c.jets(t, k);
    JetCoefficients out;
    out.a.resize(k);
    out.b.resize(k);
    out.c.resize(k);
    for (int i = 1; i <= k; ++i) {
        out.a[i - 1] = g.x[i];
        out.b[i - 1] = g.y[i];
        out.c[i - 1] = g.z[i];
    }
    return out;
}

StratumValues stratum_values(const JetCoefficients& j) {
    const double a1 = j.a[0], a2 = j.a[1], a3 = j.a[2];
    const double b1 = j.b[0], b2 = j.b[1], b3 = j.b[2];
    const double c1 = j.c[0], c2 = j.c[1], c3 = j.c[2];
    StratumValues out;
    out.C_residual = {a1, b1, c1};
    out.F_value = a1 * (b2 * c3 - b3 * c2) + b1 * (a3 * c2 - a2 * c3) + c1 * (a2 * b3 - a3 * b2);
    out.V_linear = 24.0 * (a2 * a2 + b2 * b2 + c2 * c2) * out.F_value;
    out.T_dot12 = a1 * a2 + b1 * b2 + c1 * c2;
    out.T_F = out.F_value;
    Vec3 v1{a1, b1, c1}, v2{a2, b2, c2};
    out.T_quadric = v1.cross(v2).dot(v1.cross(v2));
    out.T_leading = 36.0 * out.T_quadric * out.T_quadric * out.T_dot12 * out.F_value;
    return out;
}

double marked_point(const DeformationFamily& fam, Vec2 s, double t_guess, double t_lo,
                    double t_hi) {
    FamilyJets fj{&fam, s};
    double t = t_guess;
    const double window = t_hi - t_lo;
    for (int it = 0; it < 60; ++it) {
        Jet3 g = fj.jets(t, 3);
        Jet3 d1 = g.derivative_jet();
        Jet3 d2 = d1.derivative_jet();
        Jet3 d3 = d2.derivative_jet();
        Vec3 v1 = d1.value(), v2 = d2.value(), v3 = d3.value();
        double h = v1.dot(v2);
        double hp = v2.dot(v2) + v1.dot(v3);
        if (hp == 0.0) throw LostTrack(s.x, s.y, "marked-point Newton derivative vanished");
        double step = h / hp;
        t -= step;
        if (std::abs(t - t_guess) > 0.75 * window || t < t_lo - 0.25 * window ||
            t > t_hi + 0.25 * window)
            throw LostTrack(s.x, s.y, "marked point left the t-window");
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(t))) return t;
    }
    return t;
}

double cusp_parameter(const DeformationFamily& fam) {
    SpaceCurve slice = family_slice(fam, {0.0, 0.0});
    CurveView cv(slice);
    const int N = 1024;
    double prev_h = 0.0, prev_t = fam.t_min;
    for (int i = 0; i <= N; ++i) {
        double t = fam.t_min + (fam.t_max - fam.t_min) * i / N;
        Jet3 g = cv.jets(t, 2);
        Jet3 d1 = g.derivative_jet();
        double h = d1.value().dot(d1.derivative_jet().value());
        if (i > 0 && prev_h < 0.0 && h >= 0.0) {
            double a = prev_t, b = t, fa = prev_h;
            for (int it = 0; it < 80 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
                double mid = 0.5 * (a + b);
                Jet3 gm = cv.jets(mid, 2);
                Jet3 dm = gm.derivative_jet();
                double fm = dm.value().dot(dm.derivative_jet().value());
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            double t_hat = 0.5 * (a + b);
            if (detect_cusp(cv, t_hat).is_space_cusp) return t_hat;
        }
        prev_h = h;
        prev_t = t;
    }
    throw NoCuspAtOrigin("the s = 0 slice has no space cusp in the t-range");
}

double stratum_certificate(const DeformationFamily& fam, Stratum stratum, Vec2 s, double& t_star,
                           double* reference) {
    t_star = marked_point(fam, s, t_star, fam.t_min, fam.t_max);
    FamilyJets fj{&fam, s};
    const int K = stratum_jet_degree(stratum);
    Jet3 g = fj.jets(t_star, K);
    if (stratum == Stratum::C) {
        Jet3 d1 = g.derivative_jet();
        double speed = d1.value().norm();
        if (reference) {
            Jet3 d2 = d1.derivative_jet();
            *reference = d2.value().norm() * (std::abs(t_star) + 1.0);
        }
        return speed;
    }
    if (stratum == Stratum::F) {
        Jet3 d1 = g.derivative_jet();
        Jet3 d2 = d1.derivative_jet();
        Jet3 d3 = d2.derivative_jet();
        Vec3 v1 = d1.value(), v2 = d2.value(), v3 = d3.value();
        if (reference) *reference = v1.norm() * v2.norm() * v3.norm();
        return v1.dot(v2.cross(v3));
    }
    FrameJets F = frame_jets(g);
    Jet ks = F.Ds(F.kappa_t);
    Jet ts = F.Ds(F.tau_t);
    const double kappa = F.kappa_t.value(), tau = F.tau_t.value();
    const double kp = ks.value(), tp = ts.value();
    if (stratum == Stratum::T) {
        if (reference) *reference = std::abs(kappa * tp) + std::abs(kp * tau);
        return kappa * tp - kp * tau;
    }
    const double kpp = F.Ds(ks).value();
    if (reference)
        *reference = std::abs(kappa * kp * tp) + 2.0 * kp * kp * std::abs(tau) +
                     std::abs(kappa * kpp * tau) + kappa * kappa * std::abs(tau * tau * tau);
    return kappa * kp * tp + 2.0 * kp * kp * tau - kappa * kpp * tau +
           kappa * kappa * tau * tau * tau;
}

namespace {

struct TraceGrid {
    int N;
    Box2 box;
    double cell1, cell2;

    Vec2 node(int i, int j) const {
        return {box[0][0] + cell1 * i, box[1][0] + cell2 * j};
    }
};

struct Segment {
    Vec2 a, b;
    double fa, fb;
    double tstar_a;
};

double safe_certificate(const DeformationFamily& fam, Stratum st, Vec2 s, double& t_star,
                        double* ref) {
    try {
        return stratum_certificate(fam, st, s, t_star, ref);
    } catch (const Error&) {
        return kNaN;
    }
}

// continuation with step-halving in s when the Newton basin is lost
double walk_marked(const DeformationFamily& fam, Vec2 s_prev, double t_prev, Vec2 s, int depth) {
    try {
        return marked_point(fam, s, t_prev, fam.t_min, fam.t_max);
    } catch (const LostTrack&) {
        if (depth <= 0) throw;
        Vec2 mid{0.5 * (s_prev.x + s.x), 0.5 * (s_prev.y + s.y)};
        double tm = walk_marked(fam, s_prev, t_prev, mid, depth - 1);
        return walk_marked(fam, mid, tm, s, depth - 1);
    }
}

double safe_certificate_walked(const DeformationFamily& fam, Stratum st, Vec2 s_prev,
                               double t_prev, Vec2 s, double& t_star, double* ref) {
    try {
        t_star = walk_marked(fam, s_prev, t_prev, s, 6);
        return stratum_certificate(fam, st, s, t_star, ref);
    } catch (const Error&) {
        t_star = t_prev;
        return kNaN;
    }
}

struct RefinedPoint {
    bool ok = false;
    Vec2 s;
    double residual = 0.0;
};

RefinedPoint refine_segment(const DeformationFamily& fam, Stratum st, const Segment& seg) {
    double lo = 0.0, hi = 1.0, flo = seg.fa;
    double t_star = seg.tstar_a;
    auto at = [&](double lam) { return Vec2{seg.a.x + lam * (seg.b.x - seg.a.x),
                                            seg.a.y + lam * (seg.b.y - seg.a.y)}; };
    double ref = 0.0;
    for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = safe_certificate(fam, st, at(mid), t_star, nullptr);
        if (std::isnan(fm)) break;
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    RefinedPoint out;
    double lam = 0.5 * (lo + hi);
    double val = safe_certificate(fam, st, at(lam), t_star, &ref);
    if (std::isnan(val)) return out;
    out.ok = true;
    out.s = at(lam);
    out.residual = std::abs(val) / std::max(ref, 1e-300);
    return out;
}

void fit_tangent(StratumLocus& locus) {
    if (locus.points.size() < 5) return;
    std::vector<Vec2> byr = locus.points;
    std::sort(byr.begin(), byr.end(),
              [](Vec2 a, Vec2 b) { return a.norm() < b.norm() || (a.norm() == b.norm() && a.x < b.x); });
    auto principal = [](std::span<const Vec2> pts) {
        double sxx = 0, sxy = 0, syy = 0;
        for (const Vec2& p : pts) {
            sxx += p.x * p.x;
            sxy += p.x * p.y;
            syy += p.y * p.y;
        }
        double tr = sxx + syy, det = sxx * syy - sxy * sxy;
        double lam = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        Vec2 d = std::abs(sxy) > 1e-300 ? Vec2{lam - syy, sxy} : (sxx >= syy ? Vec2{1, 0} : Vec2{0, 1});
        return d.normalized();
    };
    std::size_t take = 5;
    Vec2 dir = principal(std::span<const Vec2>(byr.data(), take));
    for (int round = 0; round < 2; ++round) {
        double radius = byr[take - 1].norm() * 0.6;
        std::size_t n = 0;
        while (n < byr.size() && byr[n].norm() <= radius) ++n;
        if (n >= 3) {
            take = n;
            dir = principal(std::span<const Vec2>(byr.data(), take));
        }
    }
    if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) dir = {-dir.x, -dir.y};
    locus.has_tangent = true;
    locus.tangent_direction = dir;
}

StratumLocus trace_C(const DeformationFamily& fam, const TraceGrid& grid, double t0) {
    StratumLocus locus;
    locus.stratum = Stratum::C;
    // grid argmin of |γ'(t*)|, then deterministic shrinking 3x3 pattern search
    double best = std::numeric_limits<double>::infinity();
    Vec2 arg{0.0, 0.0};
    double t_star = t0;
    for (int i = 0; i <= grid.N; ++i) {
        double t_row = t_star;
        for (int j = 0; j <= grid.N; ++j) {
            double t_here = t_row;
            double ref = 0.0;
            double v = safe_certificate(fam, Stratum::C, grid.node(i, j), t_here, &ref);
            if (j == 0) t_star = t_here;
            t_row = t_here;
            if (!std::isnan(v) && v < best) {
                best = v;
                arg = grid.node(i, j);
            }
        }
    }
    double r1 = grid.cell1, r2 = grid.cell2;
    double t_here = t0;
    double ref = 0.0;
    for (int round = 0; round < 80; ++round) {
        Vec2 local_best = arg;
        double fb = safe_certificate(fam, Stratum::C, arg, t_here, &ref);
        if (std::isnan(fb)) fb = std::numeric_limits<double>::infinity();
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                if (!di && !dj) continue;
                Vec2 p{arg.x + di * r1, arg.y + dj * r2};
                double tt = t_here;
                double v = safe_certificate(fam, Stratum::C, p, tt, nullptr);
                if (!std::isnan(v) && v < fb) {
                    fb = v;
                    local_best = p;
                }
            }
        arg = local_best;
        r1 *= 0.5;
        r2 *= 0.5;
    }
    double t_fin = t0;
    double speed = safe_certificate(fam, Stratum::C, arg, t_fin, &ref);
    if (std::isnan(speed)) speed = 0.0;  // the exact singular parameter: certificate is 0 there
    double rel = speed / std::max(ref, 1e-300);
    if (rel <= 1e-6) {
        locus.points.push_back(arg);
        locus.residuals.push_back(rel);
    }
    return locus;
}

StratumLocus trace_impl(const DeformationFamily& fam, Stratum st, const Box2& box,
                        const TraceOptions& opt, bool parallel) {
    const int N = std::max(8, opt.grid);
    TraceGrid grid{N, box, (box[0][1] - box[0][0]) / N, (box[1][1] - box[1][0]) / N};
    const double t0 = cusp_parameter(fam);

    if (st == Stratum::C) return trace_C(fam, grid, t0);

    // node sweep: column 0 continues top-down serially, rows continue independently
    std::vector<double> val((N + 1) * (N + 1), kNaN);
    std::vector<double> tst((N + 1) * (N + 1), t0);
    auto idx = [N](int i, int j) { return i * (N + 1) + j; };

    {
        Vec2 s_prev{0.0, 0.0};
        double t_star = t0;
        for (int i = 0; i <= N; ++i) {
            double tt = t_star;
            val[idx(i, 0)] = safe_certificate_walked(fam, st, s_prev, t_star, grid.node(i, 0), tt,
                                                     nullptr);
            tst[idx(i, 0)] = tt;
            s_prev = grid.node(i, 0);
            t_star = tt;
        }
    }

    auto sweep_row = [&](int i) {
        Vec2 s_prev = grid.node(i, 0);
        double t_star = tst[idx(i, 0)];
        for (int j = 1; j <= N; ++j) {
            double tt = t_star;
            val[idx(i, j)] =
                safe_certificate_walked(fam, st, s_prev, t_star, grid.node(i, j), tt, nullptr);
            tst[idx(i, j)] = tt;
            s_prev = grid.node(i, j);
            t_star = tt;
        }
    };
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i <= N; ++i) sweep_row(i);
    } else {
        for (int i = 0; i <= N; ++i) sweep_row(i);
    }

    // sign changes along rows and columns
    std::vector<Segment> segments;
    auto collect = [&](int i1, int j1, int i2, int j2) {
        double fa = val[idx(i1, j1)], fb = val[idx(i2, j2)];
        if (std::isnan(fa) || std::isnan(fb)) return;
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0))
            segments.push_back({grid.node(i1, j1), grid.node(i2, j2), fa, fb, tst[idx(i1, j1)]});
    };
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j < N; ++j) collect(i, j, i, j + 1);
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i < N; ++i) collect(i, j, i + 1, j);

    std::vector<RefinedPoint> refined(segments.size());
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(segments.size()); ++k)
            refined[k] = refine_segment(fam, st, segments[k]);
    } else {
        for (std::size_t k = 0; k < segments.size(); ++k)
            refined[k] = refine_segment(fam, st, segments[k]);
    }

    const double box_scale = std::max(box[0][1] - box[0][0], box[1][1] - box[1][0]);
    const double merge = 0.25 * std::min(grid.cell1, grid.cell2);
    std::vector<std::pair<Vec2, double>> pts;
    for (const auto& r : refined) {
        if (!r.ok) continue;
        if (r.s.norm() <= 1e-9 * box_scale) continue;  // the origin belongs to C
        if (r.residual > 1e-9) continue;
        pts.push_back({r.s, r.residual});
    }
    std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
        return p.first.x < q.first.x || (p.first.x == q.first.x && p.first.y < q.first.y);
    });
    StratumLocus locus;
    locus.stratum = st;
    for (const auto& [p, res] : pts) {
        bool dup = false;
        for (std::size_t k = locus.points.size(); k-- > 0;) {
            if (locus.points[k].x < p.x - merge) break;
            if ((locus.points[k] - p).norm() < merge) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            locus.points.push_back(p);
            locus.residuals.push_back(res);
        }
    }

    fit_tangent(locus);

    // deterministic merge order: angle around the origin, then radius
    std::vector<std::size_t> order(locus.points.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        Vec2 pa = locus.points[a], pb = locus.points[b];
        double ta = std::atan2(pa.y, pa.x), tb = std::atan2(pb.y, pb.x);
        if (ta != tb) return ta < tb;
        return pa.norm() < pb.norm();
    });
    StratumLocus sorted = locus;
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted.points[k] = locus.points[order[k]];
        sorted.residuals[k] = locus.residuals[order[k]];
    }
    return sorted;
}

}  // namespace

StratumLocus trace_bifurcation(const DeformationFamily& fam, Stratum stratum, const Box2& box,
                               const TraceOptions& opt) {
    return trace_impl(fam, stratum, box, opt, true);
}

StratumLocus trace_bifurcation_reference(const DeformationFamily& fam, Stratum stratum,
                                         const Box2& box, const TraceOptions& opt) {
    return trace_impl(fam, stratum, box, opt, false);
}

TangentCone tangent_cone(const StratumLocus& locus, std::optional<Vec2> reference_direction) {
    if (locus.points.size() < 5)
        throw InsufficientPoints("tangent_cone needs at least 5 locus points");
    StratumLocus tmp = locus;
    fit_tangent(tmp);
    TangentCone out;
    out.direction = tmp.tangent_direction;
    Vec2 ref = reference_direction.value_or(out.direction).normalized();

    // graph coordinates along the reference line: u along, w across
    const bool by_x = std::abs(ref.x) >= std::abs(ref.y);
    double slope = by_x ? ref.y / ref.x : ref.x / ref.y;
    std::vector<std::pair<double, double>> dev;  // (abscissa, deviation)
    for (const Vec2& p : locus.points) {
        double u = by_x ? p.x : p.y;
        double v = by_x ? p.y : p.x;
        if (u == 0.0) continue;
        dev.push_back({u, v - slope * u});
    }
    if (dev.size() < 4) throw InsufficientPoints("tangent_cone: too few off-axis points");

    double floor_scale = 0.0;
    for (auto& [u, w] : dev) floor_scale = std::max(floor_scale, std::abs(u));
    const double floor = 1e-13 * floor_scale;
    std::size_t coincident = 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (auto& [u, w] : dev) {
        if (std::abs(w) <= floor) {
            ++coincident;
            continue;
        }
        double lx = std::log(std::abs(u)), ly = std::log(std::abs(w));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (coincident >= dev.size() * 4 / 5 || n < 3) {
        out.coincides_with_reference = true;
        out.separation_exponent = 99.0;
        return out;
    }
    out.separation_exponent = (n * sxy - sx * sy) / std::max(n * sxx - sx * sx, 1e-300);

    // deviation = c3 u^3 + c4 u^4 least squares
    double m33 = 0, m34 = 0, m44 = 0, r3 = 0, r4 = 0;
    for (auto& [u, w] : dev) {
        double u3 = u * u * u, u4 = u3 * u;
        m33 += u3 * u3;
        m34 += u3 * u4;
        m44 += u4 * u4;
        r3 += u3 * w;
        r4 += u4 * w;
    }
    double det = m33 * m44 - m34 * m34;
    out.cubic_coefficient = det != 0.0 ? (r3 * m44 - r4 * m34) / det : 0.0;
    return out;
}

GenericityCertificates frs_genericity(const DeformationFamily& fam, const TraceOptions& opt) {
    (void)opt;
    GenericityCertificates out;
    out.cusp_t = cusp_parameter(fam);

    FamilyJets fj{&fam, {0.0, 0.0}};
    Jet3 g = fj.jets(out.cusp_t, 6);
    Jet3 d1 = g.derivative_jet();
    Jet3 d2 = d1.derivative_jet();
    Jet3 d3 = d2.derivative_jet();
    Jet3 d4 = d3.derivative_jet();
    Vec3 v2 = d2.value() / 2.0;   // jet coordinates: γ''/2!
    Vec3 v3 = d3.value() / 6.0;   // γ'''/3!
    Vec3 v4 = d4.value() / 24.0;  // γ''''/4!
    if (v2.norm() <= 1e-12) throw FrameAdaptationError("cusp has no quadratic term");
    Vec3 e1 = v2.normalized();
    Vec3 n3 = v3 - v3.dot(e1) * e1;
    if (n3.norm() <= 1e-10 * std::max(v3.norm(), 1e-300))
        throw FrameAdaptationError("cubic term is tangent to the cusp direction; cannot adapt frame");
    Vec3 e2 = n3.normalized();
    Vec3 e3 = e1.cross(e2);

    const double a2 = v2.norm();
    const double b3 = v3.dot(e2);
    const double c3 = v3.dot(e3);
    const double b4 = v4.dot(e2);
    const double c4 = v4.dot(e3);
    out.a2b3 = a2 * b3;
    out.bc_det = b4 * c3 - b3 * c4;

    // (iii): s must independently steer the two normal-plane linear coefficients
    const double h1 = 1e-6 * std::max(fam.s_box[0][1] - fam.s_box[0][0], 1e-3);
    const double h2 = 1e-6 * std::max(fam.s_box[1][1] - fam.s_box[1][0], 1e-3);
    auto ell = [&](Vec2 s) {
        double ts = out.cusp_t;
        ts = marked_point(fam, s, ts, fam.t_min, fam.t_max);
        FamilyJets f2{&fam, s};
        Vec3 vel = f2.jets(ts, 1).derivative_jet().value();
        return Vec2{vel.dot(e2), vel.dot(e3)};
    };
    Vec2 dxp = ell({h1, 0.0}), dxm = ell({-h1, 0.0});
    Vec2 dyp = ell({0.0, h2}), dym = ell({0.0, -h2});
    double j11 = (dxp.x - dxm.x) / (2.0 * h1), j21 = (dxp.y - dxm.y) / (2.0 * h1);
    double j12 = (dyp.x - dym.x) / (2.0 * h2), j22 = (dyp.y - dym.y) / (2.0 * h2);
    out.param_det = j11 * j22 - j12 * j21;

    const double bc_scale = (std::abs(b3) + std::abs(c3)) * (std::abs(b4) + std::abs(c4));
    const double jac_scale = std::abs(j11 * j22) + std::abs(j12 * j21);
    out.generic = std::abs(out.a2b3) > 1e-10 * std::max(a2 * v3.norm(), 1e-300) &&
                  std::abs(out.bc_det) > 1e-8 * std::max(bc_scale, 1e-300) &&
                  std::abs(out.param_det) > 1e-8 * std::max(jac_scale, 1e-300);
    return out;
}

namespace {

std::string canonical_cycle(std::vector<std::pair<double, std::string>> branches) {
    if (branches.empty()) return {};
    std::sort(branches.begin(), branches.end());
    // merge tangent pairs (F/V) within 2 degrees into one token
    std::vector<std::string> tokens;
    const double merge_rad = 2.0 * 3.14159265358979323846 / 180.0;
    for (std::size_t i = 0; i < branches.size();) {
        std::string label = branches[i].second;
        std::size_t j = i + 1;
        while (j < branches.size() && branches[j].first - branches[i].first < merge_rad) {
            std::string both = label + branches[j].second;
            std::sort(both.begin(), both.end());
            label = both;
            ++j;
        }
        tokens.push_back(label);
        i = j;
    }
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += v[i];
        }
        return s;
    };
    std::string best;
    for (int refl = 0; refl < 2; ++refl) {
        std::vector<std::string> t = tokens;
        if (refl) std::reverse(t.begin(), t.end());
        for (std::size_t r = 0; r < t.size(); ++r) {
            std::rotate(t.begin(), t.begin() + 1, t.end());
            std::string cand = join(t);
            if (best.empty() || cand < best) best = cand;
        }
    }
    return best;
}

}  // namespace

ModelComparison compare_to_model(const DeformationFamily& fam, const TraceOptions& opt) {
    GenericityCertificates gc = frs_genericity(fam, opt);
    if (!gc.generic) throw Error("compare_to_model: family is not FRS-generic");

    ModelComparison out;
    StratumLocus locC = trace_bifurcation(fam, Stratum::C, fam.s_box, opt);
    StratumLocus locF = trace_bifurcation(fam, Stratum::F, fam.s_box, opt);
    StratumLocus locV = trace_bifurcation(fam, Stratum::V, fam.s_box, opt);
    StratumLocus locT = trace_bifurcation(fam, Stratum::T, fam.s_box, opt);

    out.strata_through_origin = (locC.points.empty() ? 0 : 1) + (locF.has_tangent ? 1 : 0) +
                                (locV.has_tangent ? 1 : 0) + (locT.has_tangent ? 1 : 0);

    auto angle_between = [](Vec2 a, Vec2 b) {
        double ca = std::abs(a.normalized().dot(b.normalized()));
        return std::acos(std::min(1.0, ca));
    };
    if (locF.has_tangent && locV.has_tangent)
        out.fv_angle = angle_between(locF.tangent_direction, locV.tangent_direction);
    if (locF.has_tangent && locT.has_tangent)
        out.tf_angle = angle_between(locT.tangent_direction, locF.tangent_direction);

    if (locF.has_tangent && locV.points.size() >= 5) {
        TangentCone vc = tangent_cone(locV, locF.tangent_direction);
        out.v_separation_exponent = vc.separation_exponent;
        out.v_cubic_coefficient = vc.cubic_coefficient;
    }

    auto push_branches = [&](const StratumLocus& loc, const char* label) {
        if (!loc.has_tangent) return;
        double a = std::atan2(loc.tangent_direction.y, loc.tangent_direction.x);
        const double two_pi = 2.0 * 3.14159265358979323846;
        double a1 = std::fmod(a + two_pi, two_pi);
        double a2 = std::fmod(a + 0.5 * two_pi + two_pi, two_pi);
        out.branches.push_back({a1, label});
        out.branches.push_back({a2, label});
    };
    push_branches(locF, "F");
    push_branches(locV, "V");
    push_branches(locT, "T");
    out.cyclic_pattern = canonical_cycle(out.branches);

    out.matches_model = out.strata_through_origin == 4 && out.fv_angle < 1e-3 &&
                        out.tf_angle > 0.05 && out.v_separation_exponent > 2.5 &&
                        out.cyclic_pattern == "FV,T,FV,T";
    return out;
}

}  // namespace curvekit
