#include "chordarc/hilbert.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "chordarc/bmo.hpp"

namespace chordarc {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// log|2 sin(psi/2)| and its conjugate -(pi - (psi mod 2 pi))/2.
double Lfun(double psi) { return std::log(std::abs(2.0 * std::sin(0.5 * psi))); }
double Sfun(double psi) {
    double m = std::fmod(psi, 2.0 * kPi);
    if (m < 0) m += 2.0 * kPi;
    return -0.5 * (kPi - m);
}

double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs.begin());
    if (k == 0) return ys.front();
    if (k == xs.size()) return ys.back();
    double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

double residual_on_nodes(const CayleyGrid& g, const std::vector<double>& tt, const std::vector<double>& minus_v,
                         const std::vector<double>& breaks) {
    SampledFunction a(g.x, std::vector<cplx>(tt.begin(), tt.end()));
    SampledFunction b(g.x, std::vector<cplx>(minus_v.begin(), minus_v.end()));
    IntervalFamily fam = IntervalFamily::dyadic(-64.0, 64.0, 12);
    if (!breaks.empty()) fam.add_straddling(breaks, -12, 6);
    return bmo_distance(Function(a), Function(b), BmoMode::Family, &fam).value;
}

}  // namespace

CayleyGrid CayleyGrid::make(int N) {
    if (N < 16 || !is_pow2(N)) throw PreconditionError("Cayley grid: N must be a power of two >= 16");
    CayleyGrid g;
    g.N = N;
    g.phi.resize(static_cast<std::size_t>(N));
    g.x.resize(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        double p = 2.0 * kPi * (j + 0.5) / N;
        g.phi[static_cast<std::size_t>(j)] = p;
        g.x[static_cast<std::size_t>(j)] = -1.0 / std::tan(0.5 * p);
    }
    return g;
}

double CayleyGrid::angle_of(double x) { return 2.0 * std::atan2(1.0, -x); }

double hilbert_anchor(const std::vector<double>& breakpoints) {
    return std::binary_search(breakpoints.begin(), breakpoints.end(), 3.0) ? kPi : 3.0;
}

LogSumFunction hilbert_step(const StepFunction& v) {
    if (!v.is_real()) throw PreconditionError("hilbert_step: v must be real");
    std::vector<LogTerm> terms;
    const auto& b = v.breakpoints();
    const auto& val = v.values();
    for (std::size_t i = 0; i < b.size(); ++i) terms.push_back({b[i], (val[i + 1] - val[i]).real() / kPi});
    return LogSumFunction(std::move(terms));
}

std::vector<double> conjugate_circle(const std::vector<double>& samples) {
    int N = static_cast<int>(samples.size());
    if (N < 2 || !is_pow2(N)) throw PreconditionError("conjugate_circle: size must be a power of two");
    std::vector<double> in(samples);
    std::vector<fftw_complex> spec(static_cast<std::size_t>(N / 2 + 1));
    std::vector<double> out(static_cast<std::size_t>(N));
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(N, in.data(), spec.data(), FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(N, spec.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    // multiply by -i for k > 0; drop k = 0 and Nyquist
    spec[0][0] = spec[0][1] = 0.0;
    for (int k = 1; k < N / 2; ++k) {
        double re = spec[static_cast<std::size_t>(k)][0], im = spec[static_cast<std::size_t>(k)][1];
        spec[static_cast<std::size_t>(k)][0] = im;
        spec[static_cast<std::size_t>(k)][1] = -re;
    }
    spec[static_cast<std::size_t>(N / 2)][0] = spec[static_cast<std::size_t>(N / 2)][1] = 0.0;
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    for (auto& o : out) o /= N;
    return out;
}

std::vector<double> conjugate_circle_reference(const std::vector<double>& samples) {
    std::size_t N = samples.size();
    std::vector<double> out(N, 0.0);
    // g_j = sum_{0<k<N/2} 2 Re(-i c_k e^{i k t_j}) with c_k the DFT coefficients.
    for (std::size_t k = 1; 2 * k < N; ++k) {
        double cr = 0.0, ci = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            double a = 2.0 * kPi * static_cast<double>(k * m % N) / static_cast<double>(N);
            cr += samples[m] * std::cos(a);
            ci -= samples[m] * std::sin(a);
        }
        cr /= static_cast<double>(N);
        ci /= static_cast<double>(N);
        for (std::size_t j = 0; j < N; ++j) {
            double a = 2.0 * kPi * static_cast<double>(k * j % N) / static_cast<double>(N);
            // -i (cr + i ci)(cos a + i sin a), real part times 2
            out[j] += 2.0 * (ci * std::cos(a) + cr * std::sin(a));
        }
    }
    return out;
}

SpectralResult hilbert_nodes(const std::vector<double>& values, const CayleyGrid& grid, double tol) {
    if (values.size() != grid.x.size()) throw PreconditionError("hilbert_nodes: size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw PreconditionError("hilbert_nodes: non-finite sample");
    int N = grid.N;
    // Spectral tail estimate from the magnitude spectrum.
    std::vector<double> in(values);
    std::vector<fftw_complex> spec(static_cast<std::size_t>(N / 2 + 1));
    fftw_plan p;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        p = fftw_plan_dft_r2c_1d(N, in.data(), spec.data(), FFTW_ESTIMATE);
    }
    fftw_execute(p);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(p);
    }
    double total = 0.0, tail = 0.0;
    for (int k = 1; k <= N / 2; ++k) {
        double m = std::hypot(spec[static_cast<std::size_t>(k)][0], spec[static_cast<std::size_t>(k)][1]);
        total += m;
        if (k > N / 4) tail += m;
    }
    SpectralResult r;
    r.tail_mass = total > 0.0 ? tail / total : 0.0;
    r.inconclusive = r.tail_mass > tol;
    std::vector<double> g = conjugate_circle(values);
    double anchor = interp_at(grid.x, g, 3.0);
    std::vector<cplx> vals(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) vals[j] = g[j] - anchor;
    r.value = SampledFunction(grid.x, std::move(vals));
    return r;
}

SpectralResult hilbert_sampled(const SampledFunction& v, const CayleyGrid& grid, double tol) {
    if (!v.is_real()) throw PreconditionError("hilbert_sampled: v must be real");
    auto check_tail = [](const Tail& t) {
        if (t.kind == Tail::Kind::Log && t.coef != cplx(0.0))
            throw PreconditionError("hilbert_sampled: logarithmic tails are not supported by the spectral path");
    };
    check_tail(v.left_tail());
    check_tail(v.right_tail());
    std::vector<double> vals(grid.x.size());
    for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = v(grid.x[j]).real();
    return hilbert_nodes(vals, grid, tol);
}

InvolutionReport check_involution(const Function& v, int N) {
    CayleyGrid g = CayleyGrid::make(N);
    InvolutionReport rep;
    rep.N = N;
    std::size_t n = g.x.size();
    std::vector<double> minus_v(n);
    if (auto* s = std::get_if<StepFunction>(&v)) {
        rep.method = "closed-form+spectral";
        if (!s->is_real()) throw PreconditionError("check_involution: v must be real");
        LogSumFunction t1 = hilbert_step(*s);
        std::vector<double> alpha;
        for (const auto& t : t1.terms()) alpha.push_back(CayleyGrid::angle_of(t.at));
        std::vector<double> raw(n), rem(n), analytic(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            double x = g.x[j];
            double val = t1(x).real();
            raw[j] = val;
            double sing = 0.0, conj = 0.0;
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                double c = t1.terms()[i].coef.real();
                sing += c * (Lfun(g.phi[j] - alpha[i]) - Lfun(g.phi[j]));
                conj += c * (Sfun(g.phi[j] - alpha[i]) - Sfun(g.phi[j]));
            }
            rem[j] = val - sing;
            analytic[j] = conj;
            minus_v[j] = -(*s)(x).real();
        }
        std::vector<double> t2 = conjugate_circle(rem);
        for (std::size_t j = 0; j < n; ++j) t2[j] += analytic[j];
        std::vector<double> t2raw = conjugate_circle(raw);
        rep.residual = residual_on_nodes(g, t2, minus_v, s->breakpoints());
        rep.raw_residual = residual_on_nodes(g, t2raw, minus_v, s->breakpoints());
        return rep;
    }
    if (auto* s = std::get_if<SampledFunction>(&v)) {
        rep.method = "spectral+spectral";
        SpectralResult t1 = hilbert_sampled(*s, g);
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = t1.value.values()[j].real();
            minus_v[j] = -(*s)(g.x[j]).real();
        }
        std::vector<double> t2 = conjugate_circle(a);
        rep.residual = residual_on_nodes(g, t2, minus_v, {});
        rep.raw_residual = rep.residual;
        return rep;
    }
    throw UnsupportedModeError("check_involution: log-sum input is not supported");
}

}  // namespace chordarc
