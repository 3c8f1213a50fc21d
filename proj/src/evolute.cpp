#include "curvekit/evolute.hpp"

#include <algorithm>
#include <cmath>

namespace curvekit {

namespace {

double tau_reference(const FrameJets& F) {
    return F.d3.value().norm() / std::max(F.cross12.value().norm(), 1e-300);
}

void check_torsion(const FrameJets& F) {
    const double tau = F.tau_t.value();
    if (std::abs(tau) <= 1e-10 * std::max(tau_reference(F), 1e-300))
        throw ZeroTorsion("τ = 0 (flattening): the generalized evolute is at infinity");
}

Jet3 evolute_from_frame(const FrameJets& F) {
    const int md = F.m - 1;
    Jet kap = F.kappa_t.truncated(md);
    Jet tau = F.tau_t.truncated(md);
    Jet ks = F.Ds(F.kappa_t);  // degree m-1
    Jet mu1 = Jet::constant(1.0, md, F.t0) / kap;
    Jet mu2 = -(ks / (kap * kap * tau));
    return F.gamma.truncated(md) + mu1 * F.N.truncated(md) + mu2 * F.B.truncated(md);
}

double rel_dev(double computed, double closed_form) {
    return std::abs(computed - closed_form) /
           std::max({std::abs(closed_form), std::abs(computed), 1e-12});
}

void push(CoefficientReport& r, const std::string& name, double computed, double closed_form) {
    r.entries.push_back({name, computed, closed_form, rel_dev(computed, closed_form)});
}

// Neville extrapolation of (t_i, g_i) to t = 0.
double extrapolate_to_zero(std::vector<double> ts, std::vector<double> gs) {
    const std::size_t n = ts.size();
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = 0; i + level < n; ++i)
            gs[i] = (gs[i] * (0.0 - ts[i + level]) - gs[i + 1] * (0.0 - ts[i])) /
                    (ts[i] - ts[i + level]);
    return gs[0];
}

}  // namespace

FocalData focal_data(const JetCurve& c, double t, const Tolerances& tol) {
    FrameJets F = frame_jets(c.jets(t, 8), tol);
    check_torsion(F);
    FocalData out;
    const double kappa = F.kappa_t.value();
    const double tau = F.tau_t.value();
    const double kp = F.Ds(F.kappa_t).value();
    out.mu1 = 1.0 / kappa;
    out.mu2 = -kp / (kappa * kappa * tau);
    out.radius = std::sqrt(out.mu1 * out.mu1 + out.mu2 * out.mu2);
    out.center = F.gamma.value() + out.mu1 * F.N.value() + out.mu2 * F.B.value();
    return out;
}

Jet3 evolute_jet(const JetCurve& c, double t0, int degree, const Tolerances& tol) {
    if (degree + 4 > kMaxJetDegree)
        throw DegreeMismatch("evolute_jet degree exceeds the base jet budget");
    FrameJets F = frame_jets(c.jets(t0, degree + 4), tol);
    check_torsion(F);
    return evolute_from_frame(F);
}

Jet3 TangentIndicatrixView::jets(double t0, int degree) const {
    FrameJets F = frame_jets(base_->jets(t0, degree + 3));
    return F.T.truncated(degree);
}

Jet3 normalized_position_jets(const JetCurve& c, double t0, int degree, const Tolerances& tol) {
    Jet3 g = c.jets(t0, degree);
    FrameJets F = frame_jets(g, tol);
    Vec3 p = g.value();
    Vec3 T = F.T.value(), N = F.N.value(), B = F.B.value();
    Jet gx = g.x - p.x, gy = g.y - p.y, gz = g.z - p.z;
    Jet3 r{T.x * gx + T.y * gy + T.z * gz, N.x * gx + N.y * gy + N.z * gz,
           B.x * gx + B.y * gy + B.z * gz};
    // arc length from t0 and its inverse series
    Jet3 d1 = r.derivative_jet();
    Jet v = sqrt(d1.dot(d1));            // degree-1
    Jet s_of_t = v.antiderivative();     // back to full degree, zero constant term
    Jet t_of_s = invert_series(s_of_t);
    return {compose(r.x, t_of_s), compose(r.y, t_of_s), compose(r.z, t_of_s)};
}

CoefficientReport evolute_flattening_asymptotics(const SpaceCurve& c, double t0,
                                                 const Tolerances& tol) {
    // Rigid motion + parameter scaling + quadratic reparametrization put the
    // flattening at u = 0 in normalized position with <γ',γ''>(0) = 0; the
    // asymptotics hold there with the cubic-and-higher x-coefficients free.
    FrenetData fd = frenet_apparatus(c, t0, 10, tol);
    Mat3 Rt = Mat3::columns(fd.T, fd.N, fd.B).transpose();
    Vec3 p = curve_point(c, t0);
    SpaceCurve moved = rigidly_moved(c, Rt, Rt.apply(-p));

    const double lambda = fd.speed.value();
    Jet3 gm = CurveView(moved).jets(t0, 6);
    Jet3 gm1 = gm.derivative_jet();
    const double hdot = gm1.value().dot(gm1.derivative_jet().value());
    const double alpha = -hdot / (2.0 * lambda * lambda * lambda * lambda);
    // u -> t0 + u/lambda + alpha u^2
    ExprPtr u = expr_var(Var::T);
    ExprPtr sub = expr_binary(
        BinaryOp::Add, expr_const(t0),
        expr_binary(BinaryOp::Add, expr_binary(BinaryOp::Mul, expr_const(1.0 / lambda), u),
                    expr_binary(BinaryOp::Mul, expr_const(alpha), expr_pow(u, 2))));
    double half_span = 0.45 * lambda * std::min(t0 - c.t_min, c.t_max - t0);
    if (half_span <= 0.0) half_span = 0.5;
    SpaceCurve nc = reparametrized(moved, sub, -half_span, half_span);

    const int K = 12;
    FrameJets F = frame_jets(CurveView(nc).jets(0.0, K), tol);
    const double tau0 = F.tau_t.value();
    const double tau_ref = std::max(tau_reference(F), 1e-300);
    if (std::abs(tau0) > 1e-8 * tau_ref)
        throw NotAFlattening("τ(t0) does not vanish (relative residual " +
                             std::to_string(std::abs(tau0) / tau_ref) + ")");
    if (std::abs(F.Ds(F.tau_t).value()) <= 1e-8 * tau_ref)
        throw NotAFlattening("τ'(t0) vanishes as well: bi-flattening, not a generic flattening");

    Jet3 gn = CurveView(nc).jets(0.0, K);
    const double b2 = gn.y[2];
    const double b3 = gn.y[3];
    const double c4 = gn.z[4];

    CoefficientReport rep;
    rep.kind = "flattening";
    rep.context["b2"] = b2;
    rep.context["b3"] = b3;
    rep.context["c4"] = c4;
    rep.context["lambda"] = lambda;
    rep.context["alpha"] = alpha;
    if (std::abs(b3) <= 1e-7 * std::max(1.0, std::abs(b2)))
        rep.flags.push_back("degenerate: b3 ~ 0, x and z leading coefficients vanish");

    // jets of t*c_evolute(t): deflating τ by one power of t keeps every component finite
    const int m = F.m;
    const int md = m - 2;
    Jet tau_over_t = Jet::constant(0.0, md, 0.0);
    for (int j = 0; j <= md; ++j) tau_over_t[j] = F.tau_t[j + 1];
    Jet kap = F.kappa_t.truncated(md);
    Jet ks = F.Ds(F.kappa_t).truncated(md);
    Jet mu1 = Jet::constant(1.0, md, 0.0) / kap;
    Jet tmu2 = -(ks / (kap * kap * tau_over_t));
    Jet tvar = Jet::variable(0.0, md);
    tvar[0] = 0.0;
    Jet3 tc = tvar * (F.gamma.truncated(md) + mu1 * F.N.truncated(md)) +
              tmu2 * F.B.truncated(md);

    push(rep, "x_quadratic", tc.x[3], b3 / (2.0 * b2));
    push(rep, "y_constant", tc.y[1], 1.0 / (2.0 * b2));
    push(rep, "y_linear", tc.y[2], -3.0 * b3 / (4.0 * b2 * b2));

    // pole coefficient of z: evaluate t·z(t) on a geometric ladder and extrapolate
    std::vector<double> ts, gs;
    CurveView ncv(nc);
    for (int j = 0; j <= 6; ++j) {
        double t = 1e-2 * std::pow(0.5, j);
        FocalData fdp = focal_data(ncv, t, tol);
        ts.push_back(t);
        gs.push_back(t * fdp.center.z);
    }
    const double pole_ladder = extrapolate_to_zero(ts, gs);
    push(rep, "z_pole", pole_ladder, b3 / (-8.0 * c4 * b2));
    rep.context["z_pole_jet"] = tc.z[0];
    return rep;
}

CoefficientReport evolute_vertex_series(const JetCurve& c, double t0, const Tolerances& tol) {
    Jet3 gn = normalized_position_jets(c, t0, 12, tol);
    FrameJets F = frame_jets(gn, tol);
    check_torsion(F);

    // vertex precondition via the τ-cleared certificate
    Jet ks = F.Ds(F.kappa_t);
    Jet ks2 = F.Ds(ks);
    const double kappa = F.kappa_t.value(), tau = F.tau_t.value();
    const double kp = ks.value(), kpp = ks2.value(), tp = F.Ds(F.tau_t).value();
    const double nv = kappa * kp * tp + 2.0 * kp * kp * tau - kappa * kpp * tau +
                      kappa * kappa * tau * tau * tau;
    const double nv_ref = std::abs(kappa * kp * tp) + 2.0 * kp * kp * std::abs(tau) +
                          std::abs(kappa * kpp * tau) + kappa * kappa * std::abs(tau * tau * tau);
    if (std::abs(nv) > 1e-6 * std::max(nv_ref, 1e-300))
        throw NotAVertex("vertex certificate does not vanish (relative residual " +
                         std::to_string(std::abs(nv) / nv_ref) + ")");

    const double a3 = gn.x[3], a4 = gn.x[4];
    const double b2 = gn.y[2], b3 = gn.y[3], b5 = gn.y[5];
    const double c3 = gn.z[3], c5 = gn.z[5];

    Jet3 ev = evolute_from_frame(F);

    CoefficientReport rep;
    rep.kind = "vertex";
    for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"a3", a3}, {"a4", a4}, {"b2", b2}, {"b3", b3}, {"b5", b5}, {"c3", c3}, {"c5", c5}})
        rep.context[k] = v;
    rep.context["vertex_residual"] = std::abs(nv) / std::max(nv_ref, 1e-300);

    const double abar4 = 3.0 *
                         (8.0 * b2 * b2 * b3 * c3 - 3.0 * a3 * b3 * c3 + 10.0 * a4 * b2 * c3 +
                          5.0 * b3 * c5 - 5.0 * b5 * c3) /
                         (2.0 * c3 * b2);
    const double bbar0 = 1.0 / (2.0 * b2);
    const double bbar3 = (-34.0 * b2 * b2 * b3 * c3 + 9.0 * a3 * b3 * c3 - 40.0 * a4 * b2 * c3 -
                          20.0 * b3 * c5 + 20.0 * b5 * c3) /
                         (2.0 * c3 * b2 * b2);
    const double cbar0 = -b3 / (2.0 * b2 * c3);
    const double cbar2 = (18.0 * b2 * b2 * b3 * c3 - 3.0 * a3 * b3 * c3 + 20.0 * a4 * b2 * c3 +
                          10.0 * b3 * c5 - 10.0 * b5 * c3) /
                         (2.0 * c3 * c3 * b2);

    push(rep, "abar4", ev.x[4], abar4);
    push(rep, "bbar0", ev.y[0], bbar0);
    push(rep, "bbar3", ev.y[3], bbar3);
    push(rep, "cbar0", ev.z[0], cbar0);
    push(rep, "cbar2", ev.z[2], cbar2);
    return rep;
}

CoefficientReport evolute_twisting_series(const JetCurve& c, double t0, const Tolerances& tol) {
    Jet3 gn = normalized_position_jets(c, t0, kMaxJetDegree, tol);
    FrameJets F = frame_jets(gn, tol);
    check_torsion(F);

    Jet ks = F.Ds(F.kappa_t);
    Jet ts = F.Ds(F.tau_t);
    const double kappa = F.kappa_t.value(), tau = F.tau_t.value();
    const double tw = kappa * ts.value() - ks.value() * tau;
    const double tw_ref = std::abs(kappa * ts.value()) + std::abs(ks.value() * tau);
    if (std::abs(tw) > 1e-6 * std::max(tw_ref, 1e-300))
        throw NotATwisting("twisting certificate does not vanish (relative residual " +
                           std::to_string(std::abs(tw) / tw_ref) + ")");

    const double b2 = gn.y[2], b3 = gn.y[3], b4 = gn.y[4];
    const double c3 = gn.z[3], c5 = gn.z[5];
    const double delta = 4.0 * std::pow(b2, 4) + 12.0 * b2 * b4 - 27.0 * b3 * b3;
    const double delta_scale =
        4.0 * std::pow(b2, 4) + std::abs(12.0 * b2 * b4) + 27.0 * b3 * b3;
    if (std::abs(delta) <= 1e-8 * std::max(delta_scale, 1e-300))
        throw DegenerateDelta("δ = 4b2^4 + 12b2b4 - 27b3^2 vanishes");
    const double dtil = 12.0 * std::pow(b2, 4) * c3 - 20.0 * b2 * b2 * c5 +
                        48.0 * b2 * b4 * c3 + 27.0 * b3 * b3 * c3 + 27.0 * std::pow(c3, 3);

    Jet3 ev = evolute_from_frame(F);  // degree 11 with the full jet budget

    CoefficientReport rep;
    rep.kind = "twisting";
    for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"b2", b2}, {"b3", b3}, {"b4", b4}, {"c3", c3}, {"c5", c5},
             {"delta", delta}, {"delta_tilde", dtil}})
        rep.context[k] = v;
    rep.context["twist_residual"] = std::abs(tw) / std::max(tw_ref, 1e-300);
    if (std::abs(dtil) <= 1e-8 * (std::abs(12.0 * std::pow(b2, 4) * c3) +
                                  std::abs(20.0 * b2 * b2 * c5) + std::abs(48.0 * b2 * b4 * c3) +
                                  27.0 * b3 * b3 * std::abs(c3) + 27.0 * std::pow(std::abs(c3), 3)))
        rep.flags.push_back("degenerate: δ̃ ~ 0, evolute twisting coefficient loses its linear term");

    push(rep, "x_cubic", ev.x[3], -delta / (6.0 * b2 * b2));
    push(rep, "y_quadratic", ev.y[2], delta / (4.0 * std::pow(b2, 3)));
    push(rep, "z_constant", ev.z[0], -b3 / (2.0 * b2 * c3));
    push(rep, "z_linear", ev.z[1], -delta / (6.0 * b2 * b2 * c3));

    FrameJets Fc = frame_jets(ev, tol);
    push(rep, "kappa_c0", Fc.kappa_t.value(), 18.0 * b2 * c3 * c3 / std::abs(delta));
    push(rep, "tau_c0", Fc.tau_t.value(), -12.0 * c3 * std::pow(b2, 3) / delta);

    // κ'_c τ_c − τ'_c κ_c with plain t-derivatives: value ~0 at the twisting, and
    // |linear coefficient| = 216 b2² c3² |δ̃| / δ²  (sign is instance-dependent)
    const int mc = Fc.m - 1;
    Jet certc = Fc.kappa_t.derivative_jet().truncated(mc) * Fc.tau_t.truncated(mc) -
                Fc.tau_t.derivative_jet().truncated(mc) * Fc.kappa_t.truncated(mc);
    // reported with the opposite ordering sign convention κτ' - κ'τ
    certc = -certc;
    const double lead = 216.0 * b2 * b2 * c3 * c3 * std::abs(dtil) / (delta * delta);
    push(rep, "evolute_twist_linear_abs", std::abs(certc[1]), lead);
    rep.context["evolute_twist_value0"] = certc[0];
    rep.context["evolute_twist_linear_signed"] = certc[1];
    rep.context["evolute_twist_sign"] = certc[1] >= 0.0 ? 1.0 : -1.0;
    rep.context["evolute_twist_root"] = certc[1] != 0.0 ? -certc[0] / certc[1] : 0.0;
    return rep;
}

std::vector<std::array<double, 4>> evolute_polyline(const SpaceCurve& c, double lo, double hi,
                                                    int samples) {
    if (samples < 2) throw Error("evolute_polyline needs at least 2 samples");
    std::vector<std::array<double, 4>> rows;
    CurveView cv(c);
    for (int i = 0; i <= samples; ++i) {
        double t = lo + (hi - lo) * i / samples;
        try {
            FocalData fd = focal_data(cv, t);
            rows.push_back({t, fd.center.x, fd.center.y, fd.center.z});
        } catch (const Error&) {
            // flattening or singular point: the evolute escapes to infinity here
        }
    }
    return rows;
}

}  // namespace curvekit
