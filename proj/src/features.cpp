#include "curvekit/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace curvekit {

const char* feature_kind_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::Flattening: return "Flattening";
        case FeatureKind::BiFlattening: return "BiFlattening";
        case FeatureKind::Vertex: return "Vertex";
        case FeatureKind::Twisting: return "Twisting";
        case FeatureKind::Cusp: return "Cusp";
        case FeatureKind::Degenerate: return "Degenerate";
    }
    return "?";
}

namespace {

constexpr int kScanJetDegree = 8;

struct CertJets {
    Jet tau, tau_p, det3, vertex, twist;
};

CertJets certificate_jets(const FrameJets& F) {
    CertJets out;
    const int m = F.m;
    out.tau = F.tau_t;
    out.det3 = F.d1.dot(F.d2.cross(F.d3));
    Jet ks = F.Ds(F.kappa_t);                    // m-1
    Jet ts = F.Ds(F.tau_t);                      // m-1
    out.tau_p = ts;
    Jet kap1 = F.kappa_t.truncated(m - 1);
    Jet tau1 = F.tau_t.truncated(m - 1);
    out.twist = kap1 * ts - ks * tau1;
    Jet ks2 = F.Ds(ks);                          // m-2
    Jet kap2 = kap1.truncated(m - 2);
    Jet tau2 = tau1.truncated(m - 2);
    Jet ksb = ks.truncated(m - 2);
    Jet tsb = ts.truncated(m - 2);
    out.vertex = kap2 * ksb * tsb + 2.0 * (ksb * ksb * tau2) - kap2 * ks2 * tau2 +
                 kap2 * kap2 * tau2 * tau2 * tau2;
    return out;
}

CertificateRecord record_from(const FrameJets& F, const CertJets& cj, double t) {
    CertificateRecord r;
    r.t = t;
    r.speed = F.v.value();
    r.kappa = F.kappa_t.value();
    r.kappa_prime = F.Ds(F.kappa_t).value();
    r.tau = cj.tau.value();
    r.tau_prime = cj.tau_p.value();
    r.det3 = cj.det3.value();
    r.vertex = cj.vertex.value();
    r.twist = cj.twist.value();

    const double d1n = F.d1.value().norm();
    const double d2n = F.d2.value().norm();
    const double d3n = F.d3.value().norm();
    const double crn = F.cross12.value().norm();
    const double W = F.w2.value();
    const double tiny = 1e-300;
    r.tau_ref = d3n / std::max(crn, tiny);
    const double Pp = std::abs(F.p.derivative(1));
    const double Wp = std::abs(F.w2.derivative(1));
    r.tau_prime_ref =
        (Pp * W + std::abs(F.p.value()) * Wp) / std::max(W * W * F.v.value(), tiny);
    r.det3_ref = d1n * d2n * d3n;
    const double k = std::abs(r.kappa), kp = std::abs(r.kappa_prime);
    const double ta = std::abs(r.tau), tp = std::abs(r.tau_prime);
    const double kpp = std::abs(F.Ds(F.Ds(F.kappa_t)).value());
    // κ·tau_ref floors keep the references meaningful where the certificate
    // vanishes identically (helices: τ'=κ'=0; planar curves: τ itself is noise);
    // tau_ref >= |τ| always, by Cauchy-Schwarz on <γ'×γ'', γ'''>
    r.twist_ref = k * tp + kp * ta + k * r.tau_ref;
    r.tau_prime_ref += r.tau_ref;
    r.vertex_ref = k * kp * tp + 2.0 * kp * kp * ta + k * kpp * ta + k * k * ta * ta * ta +
                   k * k * r.tau_ref;
    return r;
}

double cert_component(const CertificateRecord& r, int which) {
    switch (which) {
        case 0: return r.tau;
        case 1: return r.tau_prime;
        case 2: return r.vertex;
        default: return r.twist;
    }
}

double cert_reference(const CertificateRecord& r, int which) {
    switch (which) {
        case 0: return r.tau_ref;
        case 1: return r.tau_prime_ref;
        case 2: return r.vertex_ref;
        default: return r.twist_ref;
    }
}

const Jet& cert_jet(const CertJets& cj, int which) {
    switch (which) {
        case 0: return cj.tau;
        case 1: return cj.tau_p;
        case 2: return cj.vertex;
        default: return cj.twist;
    }
}

struct Node {
    double t = 0.0;
    int status = 0;  // 0 valid, 1 irregular, 2 inflectional
    double speed2 = 0.0;
    double hdot = 0.0;  // <γ', γ''>
    CertificateRecord cert;
};

Node eval_node(const JetCurve& c, double t, const Tolerances& tol) {
    Node n;
    n.t = t;
    n.hdot = std::numeric_limits<double>::quiet_NaN();
    try {
        Jet3 g = c.jets(t, kScanJetDegree);
        Jet3 d1 = g.derivative_jet();
        Vec3 v1 = d1.value(), v2 = d1.derivative_jet().value();
        n.speed2 = v1.dot(v1);
        n.hdot = v1.dot(v2);
        FrameJets F = frame_jets(g, tol);
        CertJets cj = certificate_jets(F);
        n.cert = record_from(F, cj, t);
    } catch (const InflectionError&) {
        n.status = 2;
    } catch (const Error&) {
        n.status = 1;  // irregular or otherwise certificate-free node
    }
    return n;
}

struct RootResult {
    bool ok = false;
    double t = 0.0;
    double residual = 0.0;
    CertificateRecord cert;
};

RootResult refine_certificate_root(const JetCurve& c, int which, double a, double b, double fa,
                                   double fb, const Tolerances& tol) {
    RootResult out;
    auto eval = [&](double t) -> std::pair<double, CertificateRecord> {
        FrameJets F = frame_jets(c.jets(t, kScanJetDegree), tol);
        CertJets cj = certificate_jets(F);
        CertificateRecord r = record_from(F, cj, t);
        return {cert_component(r, which), r};
    };
    if (fa == 0.0) b = a;
    if (fb == 0.0) a = b;
    double lo = a, hi = b, flo = fa;
    for (int it = 0; it < 90 && hi - lo > 1e-16 * std::max({1.0, std::abs(lo), std::abs(hi)});
         ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm;
        try {
            fm = eval(mid).first;
        } catch (const Error&) {
            break;  // certificate undefined inside the bracket; keep the last valid interval
        }
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
    double t_hat = 0.5 * (lo + hi);
    double val;
    CertificateRecord rec;
    try {
        std::tie(val, rec) = eval(t_hat);
        // Newton polish on the certificate jet
        for (int it = 0; it < 3; ++it) {
            FrameJets F = frame_jets(c.jets(t_hat, kScanJetDegree), tol);
            CertJets cj = certificate_jets(F);
            const Jet& cjet = cert_jet(cj, which);
            double der = cjet.derivative(1);
            if (der == 0.0) break;
            double t_next = t_hat - cjet.value() / der;
            if (!(t_next >= a && t_next <= b)) break;
            auto [v2, r2] = eval(t_next);
            if (std::abs(v2) <= std::abs(val)) {
                t_hat = t_next;
                val = v2;
                rec = r2;
            } else {
                break;
            }
        }
    } catch (const Error&) {
        return out;  // root collided with a singular point; the cusp pass reports it
    }
    double ref = std::max(cert_reference(rec, which), 1e-300);
    out.ok = true;
    out.t = t_hat;
    out.residual = std::abs(val) / ref;
    out.cert = rec;
    return out;
}

std::map<std::string, double> certificate_map(const CertificateRecord& r) {
    return {{"speed", r.speed},   {"kappa", r.kappa},       {"kappa_prime", r.kappa_prime},
            {"tau", r.tau},       {"tau_prime", r.tau_prime}, {"det3", r.det3},
            {"vertex_cert", r.vertex}, {"twist_cert", r.twist}};
}

struct Bracket {
    int which;
    double a, b, fa, fb;
};

ScanReport assemble(const JetCurve& c, double lo, double hi, const ScanOptions& opt,
                    const std::vector<Node>& nodes, const std::vector<RootResult>& roots,
                    const std::vector<Bracket>& brackets,
                    const std::array<bool, 4>& degenerate_cert) {
    const int N = static_cast<int>(nodes.size()) - 1;
    const double h = (hi - lo) / N;
    const double merge_tol = h * 0.1;
    ScanReport report;

    // inflectional runs
    int run_start = -1;
    for (int i = 0; i <= N + 1; ++i) {
        bool bad = (i <= N) && nodes[i].status == 2;
        if (bad && run_start < 0) run_start = i;
        if (!bad && run_start >= 0) {
            report.notes.push_back({"InflectionError", nodes[run_start].t, nodes[i - 1].t,
                                    "inflectional segment: |γ'×γ''| below tolerance"});
            run_start = -1;
        }
    }

    // roots[] is index-aligned with brackets[]; merge grid-resolution duplicates
    std::vector<double> cert_roots[4];
    std::vector<CertificateRecord> cert_recs[4];
    std::vector<double> cert_res[4];
    for (std::size_t i = 0; i < brackets.size(); ++i) {
        if (!roots[i].ok) continue;
        int w = brackets[i].which;
        auto& list = cert_roots[w];
        if (!list.empty() && std::abs(list.back() - roots[i].t) < merge_tol) continue;
        list.push_back(roots[i].t);
        cert_recs[w].push_back(roots[i].cert);
        cert_res[w].push_back(roots[i].residual);
    }

    auto add_point = [&](FeatureKind kind, double t, const CertificateRecord& rec,
                         double residual, std::string note = {}) {
        FeaturePoint p;
        p.kind = kind;
        p.t = t;
        p.certificates = certificate_map(rec);
        p.residual = residual;
        p.note = std::move(note);
        report.points.push_back(std::move(p));
    };

    // degenerate certificates first
    const char* cert_names[4] = {"flattening (tau)", "tau_prime", "vertex", "twisting"};
    for (int w : {0, 2, 3}) {
        if (degenerate_cert[w]) {
            FeaturePoint p;
            p.kind = FeatureKind::Degenerate;
            p.t = 0.5 * (lo + hi);
            p.note = std::string(cert_names[w]) + " certificate identically ~0 on the interval";
            p.certificates["degenerate"] = 1.0;
            report.points.push_back(std::move(p));
        }
    }

    // flattenings: pair tau roots with tau' roots into bi-flattenings
    std::vector<bool> taup_used(cert_roots[1].size(), false);
    if (!degenerate_cert[0]) {
        for (std::size_t i = 0; i < cert_roots[0].size(); ++i) {
            double t = cert_roots[0][i];
            const auto& rec = cert_recs[0][i];
            int mate = -1;
            for (std::size_t j = 0; j < cert_roots[1].size(); ++j)
                if (!taup_used[j] && std::abs(cert_roots[1][j] - t) < merge_tol) mate = (int)j;
            if (mate >= 0) {
                taup_used[mate] = true;
                add_point(FeatureKind::BiFlattening, t, rec, cert_res[0][i],
                          "tau and tau' vanish together");
            } else {
                add_point(FeatureKind::Flattening, t, rec, cert_res[0][i]);
            }
        }
    }
    // vertices (guard: τ must not vanish there)
    if (!degenerate_cert[2]) {
        for (std::size_t i = 0; i < cert_roots[2].size(); ++i) {
            const auto& rec = cert_recs[2][i];
            if (std::abs(rec.tau) <= opt.tol.zero * std::max(rec.tau_ref, 1e-300)) {
                report.notes.push_back({"vertex_guard", cert_roots[2][i], cert_roots[2][i],
                                        "vertex certificate root rejected: τ ≈ 0 there"});
                continue;
            }
            add_point(FeatureKind::Vertex, cert_roots[2][i], rec, cert_res[2][i]);
        }
    }
    // twistings
    if (!degenerate_cert[3]) {
        for (std::size_t i = 0; i < cert_roots[3].size(); ++i)
            add_point(FeatureKind::Twisting, cert_roots[3][i], cert_recs[3][i], cert_res[3][i]);
    }

    // cusp candidates: refine <γ',γ''> sign changes, accept what detect_cusp accepts
    for (int i = 0; i < N; ++i) {
        const Node& na = nodes[i];
        const Node& nb = nodes[i + 1];
        if (!(na.hdot < 0.0 && nb.hdot >= 0.0)) continue;
        double a = na.t, b = nb.t, fa = na.hdot;
        CuspTest ct;
        try {
            for (int it = 0; it < 80 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
                double mid = 0.5 * (a + b);
                Jet3 g = c.jets(mid, 3);
                Jet3 d1 = g.derivative_jet();
                double fm = d1.value().dot(d1.derivative_jet().value());
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            ct = detect_cusp(c, 0.5 * (a + b));
        } catch (const Error&) {
            continue;
        }
        double t_hat = 0.5 * (a + b);
        if (ct.is_space_cusp) {
            FeaturePoint p;
            p.kind = FeatureKind::Cusp;
            p.t = t_hat;
            p.certificates = {{"d1_norm", ct.d1_norm},
                              {"d2_norm", ct.d2_norm},
                              {"d23_cross_norm", ct.d23_cross_norm}};
            p.residual = ct.d1_norm / std::max(ct.d2_norm, 1e-300);
            report.points.push_back(std::move(p));
        }
    }

    std::sort(report.points.begin(), report.points.end(), [](const auto& a, const auto& b) {
        if (a.t != b.t) return a.t < b.t;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return report;
}

struct ScanWork {
    std::vector<Node> nodes;
    std::vector<Bracket> brackets;
    std::array<bool, 4> degenerate{};
    int N = 0;
};

void enforce_residuals(const std::vector<Bracket>& brackets, const std::vector<RootResult>& roots) {
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i].ok && roots[i].residual > 1e-12)
            throw NonConvergence(brackets[i].a, brackets[i].b,
                                 "certificate root refinement stalled (residual " +
                                     std::to_string(roots[i].residual) + ")");
}

void collect_brackets(const std::vector<Node>& nodes, const ScanOptions& opt, ScanWork& work) {
    const int N = static_cast<int>(nodes.size()) - 1;
    int valid = 0;
    std::array<int, 4> small_count{};
    for (const auto& n : nodes) {
        if (n.status != 0) continue;
        ++valid;
        for (int w : {0, 1, 2, 3}) {
            double ref = std::max(cert_reference(n.cert, w), 1e-300);
            if (std::abs(cert_component(n.cert, w)) <= 1e-9 * ref) ++small_count[w];
        }
    }
    for (int w : {0, 1, 2, 3})
        work.degenerate[w] = valid > 0 && small_count[w] >= opt.degenerate_fraction * valid;

    for (int w : {0, 1, 2, 3}) {
        if (work.degenerate[w]) continue;
        for (int i = 0; i < N; ++i) {
            const Node& a = nodes[i];
            const Node& b = nodes[i + 1];
            if (a.status != 0 || b.status != 0) continue;
            double fa = cert_component(a.cert, w);
            double fb = cert_component(b.cert, w);
            if (fa == 0.0 && fb == 0.0) continue;
            if ((fa <= 0.0 && fb > 0.0) || (fa >= 0.0 && fb < 0.0) || fa == 0.0)
                work.brackets.push_back({w, a.t, b.t, fa, fb});
        }
    }
}

int resolve_samples(double lo, double hi, const ScanOptions& opt) {
    if (opt.samples != 0) {
        if (opt.samples < 16) throw Error("scan_features requires samples >= 16");
        return opt.samples;
    }
    int n = static_cast<int>(std::ceil(2048.0 * (hi - lo)));
    return std::max(64, n);
}

}  // namespace

CertificateRecord feature_certificates(const JetCurve& c, double t, const Tolerances& tol) {
    FrameJets F = frame_jets(c.jets(t, 10), tol);
    return record_from(F, certificate_jets(F), t);
}

ScanReport scan_features(const JetCurve& c, double lo, double hi, const ScanOptions& opt) {
    if (!(lo < hi)) throw Error("scan interval must satisfy lo < hi");
    const int N = resolve_samples(lo, hi, opt);
    ScanWork work;
    work.nodes.resize(N + 1);
    const double h = (hi - lo) / N;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i <= N; ++i) work.nodes[i] = eval_node(c, lo + i * h, opt.tol);

    collect_brackets(work.nodes, opt, work);

    std::vector<RootResult> roots(work.brackets.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(work.brackets.size()); ++i) {
        const Bracket& br = work.brackets[i];
        roots[i] = refine_certificate_root(c, br.which, br.a, br.b, br.fa, br.fb, opt.tol);
    }
    enforce_residuals(work.brackets, roots);
    return assemble(c, lo, hi, opt, work.nodes, roots, work.brackets, work.degenerate);
}

ScanReport scan_features_reference(const JetCurve& c, double lo, double hi,
                                   const ScanOptions& opt) {
    if (!(lo < hi)) throw Error("scan interval must satisfy lo < hi");
    const int N = resolve_samples(lo, hi, opt);
    ScanWork work;
    work.nodes.resize(N + 1);
    const double h = (hi - lo) / N;
    for (int i = 0; i <= N; ++i) work.nodes[i] = eval_node(c, lo + i * h, opt.tol);

    collect_brackets(work.nodes, opt, work);

    std::vector<RootResult> roots(work.brackets.size());
    for (std::size_t i = 0; i < work.brackets.size(); ++i) {
        const Bracket& br = work.brackets[i];
        roots[i] = refine_certificate_root(c, br.which, br.a, br.b, br.fa, br.fb, opt.tol);
    }
    enforce_residuals(work.brackets, roots);
    return assemble(c, lo, hi, opt, work.nodes, roots, work.brackets, work.degenerate);
}

CuspTest detect_cusp(const JetCurve& c, double t) {
    Jet3 g = c.jets(t, 4);
    Jet3 d1 = g.derivative_jet();
    Jet3 d2 = d1.derivative_jet();
    Jet3 d3 = d2.derivative_jet();
    CuspTest out;
    out.d1_norm = d1.value().norm();
    out.d2_norm = d2.value().norm();
    out.d23_cross_norm = d2.value().cross(d3.value()).norm();
    const double d3n = d3.value().norm();
    out.is_space_cusp = out.d1_norm <= 1e-8 * (1.0 + out.d2_norm) &&
                        out.d2_norm > 1e-12 * (1.0 + d3n) &&
                        out.d23_cross_norm > 1e-10 * (out.d2_norm * d3n + 1e-300);
    return out;
}

double vertex_kappa_identity(const JetCurve& c, double t) {
    FrameJets F = frame_jets(c.jets(t, 10));
    const double kappa = F.kappa_t.value();
    const double tau = F.tau_t.value();
    const double tau_ref = F.d3.value().norm() / std::max(F.cross12.value().norm(), 1e-300);
    if (std::abs(tau) <= 1e-10 * std::max(tau_ref, 1e-300))
        throw ZeroTorsion("vertex_kappa_identity needs τ ≠ 0");
    Jet ks = F.Ds(F.kappa_t);
    Jet ks2 = F.Ds(ks);
    Jet ts = F.Ds(F.tau_t);
    const double kp = ks.value(), kpp = ks2.value(), tp = ts.value();
    return kpp - (2.0 * kp * kp / kappa + kp * tp / tau + kappa * tau * tau);
}

}  // namespace curvekit
