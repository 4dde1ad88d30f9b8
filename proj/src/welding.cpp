#include "chordarc/welding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chordarc/bmo.hpp"
#include "chordarc/hilbert.hpp"

namespace chordarc {

namespace {

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
    v.front() = a;
    v.back() = b;
    return v;
}

std::size_t index_of(const std::vector<double>& s, double x) {
    auto it = std::lower_bound(s.begin(), s.end(), x);
    if (it == s.end() || *it != x) throw PreconditionError("welding: sample grid lacks a normalization point");
    return static_cast<std::size_t>(it - s.begin());
}

}  // namespace

std::vector<double> WeldSampling::nodes() const {
    if (N < 64) throw PreconditionError("welding: N must be at least 64");
    if (!(smin > 0) || !(smax > smin) || !(smax > 1.0)) throw PreconditionError("welding: invalid sample range");
    std::vector<double> s{0.0, 1.0};
    if (kind == Kind::Geometric) {
        for (double x : geomspace(smin, smax, N / 2)) {
            s.push_back(x);
            s.push_back(-x);
        }
    } else {
        if (!(core > 1.0) || !(smax > core) || graded < 2) throw PreconditionError("welding: invalid core sampling");
        for (int i = 0; i < N; ++i) s.push_back(-core + 2.0 * core * i / (N - 1));
        auto g = geomspace(core, smax, graded + 1);
        for (std::size_t i = 1; i < g.size(); ++i) {
            s.push_back(g[i]);
            s.push_back(-g[i]);
        }
    }
    std::sort(s.begin(), s.end());
    // geomspace can land one ulp away from 1; keep the exact normalization node
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
    std::vector<double> out;
    for (double x : s) {
        if (!out.empty() && close(out.back(), x)) {
            if (x == 1.0) out.back() = 1.0;
            continue;
        }
        out.push_back(x);
    }
    return out;
}

std::string WeldSampling::to_string() const {
    std::ostringstream os;
    os.precision(17);
    if (kind == Kind::Geometric)
        os << "geometric(N=" << N << ",smin=" << smin << ",smax=" << smax << ")";
    else
        os << "core-graded(N=" << N << ",core=" << core << ",graded=" << graded << ",smax=" << smax << ")";
    return os.str();
}

BoundaryCorrespondence boundary_correspondence(const std::vector<double>& s, const std::vector<cplx>& points,
                                               Side side, bool parallel) {
    if (s.size() != points.size()) throw PreconditionError("welding: size mismatch");
    std::vector<cplx> fitpts = points;
    if (side == Side::Right)
        for (auto& p : fitpts) p = std::conj(p);
    ZipperMap Z = ZipperMap::fit(fitpts, index_of(s, 0.0), index_of(s, 1.0), parallel);
    BoundaryCorrespondence bc;
    bc.s = s;
    bc.points = points;
    bc.t = Z.boundary_images();
    bc.fit_residual = Z.fit_residual();
    return bc;
}

BoundaryCorrespondence riemann_parametrization(const EmbeddingCurve& gamma, const WeldSampling& sampling, Side side,
                                               bool parallel) {
    std::vector<double> s = sampling.nodes();
    std::vector<cplx> pts(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) pts[j] = gamma(s[j]);
    return boundary_correspondence(s, pts, side, parallel);
}

SampledFunction log_derivative_monotone(const std::vector<double>& s, const std::vector<double>& f) {
    std::size_t n = s.size();
    if (n < 3 || f.size() != n) throw PreconditionError("log_derivative_monotone: need at least 3 samples");
    std::vector<double> sec(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        sec[j] = (f[j + 1] - f[j]) / (s[j + 1] - s[j]);
        if (!(sec[j] > 0.0)) throw NumericalError("welding: non-monotone samples (fit too coarse)");
    }
    std::vector<cplx> lw(n);
    for (std::size_t j = 0; j < n; ++j) {
        double d;
        if (j == 0) {
            d = sec[0];
        } else if (j + 1 == n) {
            d = sec[n - 2];
        } else {
            double h1 = s[j] - s[j - 1], h2 = s[j + 1] - s[j];
            d = (h2 * sec[j - 1] + h1 * sec[j]) / (h1 + h2);
            double lo = std::min(sec[j - 1], sec[j]);
            if (!(d > 0.0)) d = lo;
            d = std::min(d, 3.0 * lo);
        }
        lw[j] = std::log(d);
    }
    return SampledFunction(s, std::move(lw));
}

WeldingResult welding_homeo(const EmbeddingCurve& gamma, const WeldSampling& sampling, Side side) {
    BoundaryCorrespondence bc = riemann_parametrization(gamma, sampling, side);
    WeldingResult r;
    r.s = bc.s;
    r.f = bc.t;
    r.h = bc.points;
    r.fit_residual = bc.fit_residual;
    r.N = sampling.N;
    r.sampling = sampling.to_string();
    r.log_fprime = log_derivative_monotone(r.s, r.f);
    return r;
}

namespace {

// ||P_f T P_f^{-1}(lf) + v|| over a window, family mode.
double identity_residual(const WeldingResult& w, const SampledFunction& lf, const Function& v) {
    std::vector<cplx> vals(lf.values());
    SampledFunction g(w.f, vals);  // lf o f^{-1}
    CayleyGrid cg = CayleyGrid::make(1 << 14);
    SpectralResult t = hilbert_sampled(g, cg, 1.0);
    std::vector<cplx> out(w.s.size());
    for (std::size_t j = 0; j < w.s.size(); ++j) out[j] = t.value(w.f[j]) + evaluate(v, w.s[j]);
    SampledFunction r(w.s, std::move(out));
    IntervalFamily fam = IntervalFamily::dyadic(-4.0, 4.0, 8);
    return bmo_norm_family(Function(r), fam).value;
}

}  // namespace

LambdaResult lambda_map(const Function& v, const WeldSampling& sampling, bool check_identity) {
    if (!is_real(v)) throw PreconditionError("lambda_map: v must be real");
    EmbeddingCurve c(scale(v, cplx(0.0, 1.0)));
    LambdaResult r;
    r.weld = welding_homeo(c, sampling, Side::Left);
    r.value = r.weld.log_fprime;
    if (check_identity) r.identity_residual = identity_residual(r.weld, r.value, v);
    return r;
}

RhoResult rho_map(const Function& v, const WeldSampling& sampling) {
    if (!is_real(v)) throw PreconditionError("rho_map: v must be real");
    EmbeddingCurve c(scale(v, cplx(0.0, 1.0)));
    std::vector<double> s = sampling.nodes();
    std::vector<cplx> pts(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) pts[j] = c(s[j]);
    BoundaryCorrespondence plus = boundary_correspondence(s, pts, Side::Left);
    BoundaryCorrespondence minus = boundary_correspondence(s, pts, Side::Right);
    RhoResult r;
    r.x = plus.t;
    r.W = minus.t;
    r.value = log_derivative_monotone(r.x, r.W);
    SampledFunction lp = log_derivative_monotone(s, plus.t);
    SampledFunction lm = log_derivative_monotone(s, minus.t);
    std::vector<double> diff;
    for (std::size_t j = 0; j < s.size(); ++j) {
        double as = std::abs(s[j]);
        if (as < 1e-2 || as > 10.0) continue;
        double chain = lm.values()[j].real() - lp.values()[j].real();
        diff.push_back(r.value.values()[j].real() - chain);
    }
    if (!diff.empty()) {
        double mean = 0.0;
        for (double d : diff) mean += d;
        mean /= static_cast<double>(diff.size());
        for (double d : diff) r.consistency = std::max(r.consistency, std::abs(d - mean));
    }
    return r;
}

}  // namespace chordarc
