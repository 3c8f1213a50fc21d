// Times the OpenMP scanners against their serial reference implementations.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "curvekit/features.hpp"
#include "curvekit/strata.hpp"

using namespace curvekit;

namespace {

template <class F>
double time_ms(F&& f, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto start = std::chrono::steady_clock::now();
        f();
        auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; parallel paths run serially\n");
#endif

    SpaceCurve curve = polynomial_curve({0, 1, 0, -0.4, 0.3, 0.1}, {0, 0, 1.1, 0.5, -0.7, 0.2},
                                        {0, 0, 0, 0.9, 0.4, -0.3}, -1.0, 1.0, "bench");
    ScanOptions sopt;
    sopt.samples = 20000;
    double scan_par = time_ms([&] { scan_features(curve, -1.0, 1.0, sopt); });
    double scan_ser = time_ms([&] { scan_features_reference(curve, -1.0, 1.0, sopt); });
    std::printf("feature scan   %7d samples: parallel %8.2f ms | serial %8.2f ms | speedup %.2fx\n",
                sopt.samples, scan_par, scan_ser, scan_ser / scan_par);

    DeformationFamily G;
    G.components = {parse_expression("t^2 + t^3 + t^4"), parse_expression("s1*t + t^3 + t^4"),
                    parse_expression("s2*t + t^3 - t^4")};
    G.t_min = -0.5;
    G.t_max = 0.5;
    G.s_box = {{{-0.2, 0.2}, {-0.2, 0.2}}};
    TraceOptions topt;
    topt.grid = 192;
    double tr_par = time_ms([&] { trace_bifurcation(G, Stratum::V, G.s_box, topt); });
    double tr_ser = time_ms([&] { trace_bifurcation_reference(G, Stratum::V, G.s_box, topt); });
    std::printf("V-locus trace  %7d^2 grid:   parallel %8.2f ms | serial %8.2f ms | speedup %.2fx\n",
                topt.grid, tr_par, tr_ser, tr_ser / tr_par);
    return 0;
}
