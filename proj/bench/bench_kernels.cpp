// Serial reference against the OpenMP kernel for each parallel hot path.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "chordarc/bmo.hpp"
#include "chordarc/embedding.hpp"
#include "chordarc/experiments.hpp"
#include "chordarc/extension.hpp"
#include "chordarc/parallel.hpp"
#include "chordarc/weights.hpp"
#include "chordarc/zipper.hpp"

using namespace chordarc;

namespace {

double seconds(const std::function<double()>& f, double& out) {
    auto t0 = std::chrono::steady_clock::now();
    out = f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void row(const char* name, const std::function<double()>& serial, const std::function<double()>& parallel) {
    double a = 0, b = 0;
    double ts = seconds(serial, a), tp = seconds(parallel, b);
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2f  |diff| %.3e\n", name, ts, tp, ts / tp,
                std::abs(a - b));
}

}  // namespace

int main() {
    int threads = configure_threads_from_env();
    std::printf("threads: %d\n", threads);

    Rng rng(7);
    StepFunction f = random_step(rng, 24, 8.0);
    row("bmo exact", [&] { return bmo_norm_exact_serial(f).value; }, [&] { return bmo_norm_exact(f).value; });

    IntervalFamily fam = IntervalFamily::default_for(f.breakpoints());
    FunctionCombination h{Function(f)};
    row("bmo family", [&] { return bmo_norm_family_serial(h, fam).value; },
        [&] { return bmo_norm_family(h, fam).value; });

    Function w = f;
    row("ap constant", [&] { return ap_constant_serial(w, 2.0, fam).value; },
        [&] { return ap_constant(w, 2.0, fam).value; });

    EmbeddingCurve c = wedge_curve(2.0);
    ChordArcSampler s;
    s.random_count = 20000;
    row("chord-arc", [&] { return chord_arc_constant_serial(c, s).constant; },
        [&] { return chord_arc_constant(c, s).constant; });

    std::vector<cplx> pts;
    std::size_t ref = 0, unit = 0;
    for (int j = -2048; j <= 2048; ++j) {
        double t = std::sinh(j / 256.0);
        if (j == 0) ref = pts.size();
        pts.push_back(c(t));
    }
    unit = ref + 200;
    row("zipper fit", [&] { return ZipperMap::fit(pts, ref, unit, false).boundary_images()[unit + 1]; },
        [&] { return ZipperMap::fit(pts, ref, unit, true).boundary_images()[unit + 1]; });

    MonotoneMap m = family_fk(2.0);
    ExtensionGrid g = ExtensionGrid::standard();
    row("heat extension", [&] { return ba_heat_extension_serial(m, g).U[12345]; },
        [&] { return ba_heat_extension(m, g).U[12345]; });
    return 0;
}
