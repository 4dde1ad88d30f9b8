#include "chordarc/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "chordarc/monotone_map.hpp"

namespace chordarc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

cplx phi1c(cplx z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return (std::exp(z) - 1.0) / z;
}

}  // namespace

EmbeddingCurve::EmbeddingCurve(Function w) : w_(std::move(w)) {
    if (auto* s = std::get_if<StepFunction>(&w_)) {
        const auto& b = s->breakpoints();
        const auto& v = s->values();
        for (std::size_t i = 0; i <= b.size(); ++i) {
            double l = i == 0 ? -kInf : b[i - 1];
            double r = i == b.size() ? kInf : b[i];
            pieces_.push_back({l, r, v[i], v[i], 0, 0.0, 0.0});
        }
    } else if (auto* s = std::get_if<SampledFunction>(&w_)) {
        const auto& g = s->grid();
        const auto& v = s->values();
        auto tail = [&](double l, double r, const Tail& t, double xe, cplx ve) {
            if (t.kind == Tail::Kind::Hold || t.coef == cplx(0.0))
                pieces_.push_back({l, r, ve, ve, 0, 0.0, 0.0});
            else
                pieces_.push_back({l, r, ve, ve, 2, t.coef, xe});
        };
        tail(-kInf, g.front(), s->left_tail(), g.front(), v.front());
        for (std::size_t k = 0; k + 1 < g.size(); ++k) pieces_.push_back({g[k], g[k + 1], v[k], v[k + 1], 1, 0.0, 0.0});
        tail(g.back(), kInf, s->right_tail(), g.back(), v.back());
    } else {
        throw UnsupportedModeError("curve: log-sum w is not supported; sample it first");
    }
    // Split the piece containing 0 so that 0 is a knot.
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        Piece& p = pieces_[k];
        if (!(p.l < 0.0 && 0.0 < p.r)) continue;
        Piece right = p;
        if (p.kind == 1) {
            cplx w0 = p.wl + (p.wr - p.wl) * ((0.0 - p.l) / (p.r - p.l));
            p.wr = w0;
            right.wl = w0;
        } else if (p.kind == 2) {
            throw PreconditionError("curve: logarithmic tail across the origin");
        }
        p.r = 0.0;
        right.l = 0.0;
        pieces_.insert(pieces_.begin() + static_cast<long>(k) + 1, right);
        break;
    }
    for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) knots_.push_back(pieces_[k].r);
    std::size_t K = knots_.size();
    cum_.assign(K, 0.0);
    cum_len_.assign(K, 0.0);
    for (std::size_t k = 1; k < K; ++k) cum_len_[k] = cum_len_[k - 1] + piece_length(pieces_[k], knots_[k - 1], knots_[k]);
    std::size_t i0 = static_cast<std::size_t>(std::lower_bound(knots_.begin(), knots_.end(), 0.0) - knots_.begin());
    cum_[i0] = 0.0;
    for (std::size_t k = i0 + 1; k < K; ++k) cum_[k] = cum_[k - 1] + piece_integral(pieces_[k], knots_[k - 1], knots_[k]);
    for (std::size_t k = i0; k-- > 0;) cum_[k] = cum_[k + 1] - piece_integral(pieces_[k + 1], knots_[k], knots_[k + 1]);
    z_ = raw(1.0);
    if (!(std::abs(z_) > 0.0) || !std::isfinite(std::abs(z_)))
        throw PreconditionError("curve: int_0^1 e^w must be finite and nonzero");
}

cplx EmbeddingCurve::piece_integral(const Piece& p, double a, double b) const {
    if (a == b) return 0.0;
    switch (p.kind) {
        case 0: return std::exp(p.wl) * (b - a);
        case 1: {
            double h = p.r - p.l;
            cplx wa = a == p.l ? p.wl : p.wl + (p.wr - p.wl) * ((a - p.l) / h);
            cplx wb = b == p.r ? p.wr : p.wl + (p.wr - p.wl) * ((b - p.l) / h);
            return (b - a) * std::exp(wa) * phi1c(wb - wa);
        }
        default: {
            cplx c1 = p.coef + 1.0;
            auto F = [&](double x) {
                double t = x / p.xe;
                return c1 == cplx(0.0) ? cplx(std::log(t)) : std::exp(c1 * std::log(t)) / c1;
            };
            return std::exp(p.wl) * p.xe * (F(b) - F(a));
        }
    }
}

double EmbeddingCurve::piece_length(const Piece& p, double a, double b) const {
    if (a == b) return 0.0;
    switch (p.kind) {
        case 0: return std::exp(p.wl.real()) * (b - a);
        case 1: {
            double h = p.r - p.l;
            double wa = a == p.l ? p.wl.real() : p.wl.real() + (p.wr.real() - p.wl.real()) * ((a - p.l) / h);
            double wb = b == p.r ? p.wr.real() : p.wl.real() + (p.wr.real() - p.wl.real()) * ((b - p.l) / h);
            return (b - a) * std::exp(wa) * phi1(wb - wa);
        }
        default: {
            double c1 = p.coef.real() + 1.0;
            auto F = [&](double x) {
                double t = x / p.xe;
                return c1 == 0.0 ? std::log(t) : std::pow(t, c1) / c1;
            };
            return std::exp(p.wl.real()) * p.xe * (F(b) - F(a));
        }
    }
}

std::size_t EmbeddingCurve::locate(double x) const {
    return static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), x) - knots_.begin());
}

cplx EmbeddingCurve::raw(double x) const {
    std::size_t k = locate(x);
    if (k == 0) return cum_[0] - piece_integral(pieces_[0], x, knots_[0]);
    return cum_[k - 1] + piece_integral(pieces_[k], knots_[k - 1], x);
}

double EmbeddingCurve::raw_arclength(double a, double b) const {
    if (b < a) std::swap(a, b);
    std::size_t ka = locate(a), kb = locate(b);
    if (kb - ka <= 8) {
        double len = 0.0;
        for (std::size_t k = ka; k <= kb; ++k) {
            double l = std::max(a, pieces_[k].l), r = std::min(b, pieces_[k].r);
            if (r > l) len += piece_length(pieces_[k], l, r);
        }
        return len;
    }
    // ka < kb - 8: both ends interior to the knot range
    double left = piece_length(pieces_[ka], a, knots_[ka]);
    double right = piece_length(pieces_[kb], knots_[kb - 1], b);
    return left + (cum_len_[kb - 1] - cum_len_[ka]) + right;
}

Function EmbeddingCurve::normalized_w() const {
    cplx lz = std::log(z_);
    if (auto* s = std::get_if<StepFunction>(&w_)) return *s + (-lz);
    return std::get<SampledFunction>(w_) + (-lz);
}

Function log_derivative_of_curve(const EmbeddingCurve& c) { return c.w(); }

SampledFunction log_derivative_of_samples(const std::function<cplx(double)>& gamma, std::vector<double> grid,
                                          double h) {
    if (!(h > 0)) throw PreconditionError("log_derivative_of_samples: step must be positive");
    std::vector<cplx> w(grid.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid[i];
        cplx d1 = (gamma(x + h) - gamma(x - h)) / (2.0 * h);
        cplx d2 = (gamma(x + 2.0 * h) - gamma(x - 2.0 * h)) / (4.0 * h);
        cplx d = (4.0 * d1 - d2) / 3.0;
        if (!(std::abs(d) > 0.0)) throw NumericalError("log_derivative_of_samples: vanishing derivative");
        cplx lw = std::log(d);
        double im = lw.imag();
        if (i > 0) im += 2.0 * kPi * std::round((prev - im) / (2.0 * kPi));
        prev = im;
        w[i] = {lw.real(), im};
    }
    return SampledFunction(std::move(grid), std::move(w));
}

EmbeddingCurve curve_from_logderiv(const Function& w) { return EmbeddingCurve(w); }

EmbeddingCurve wedge_curve(double theta) {
    if (!(std::abs(theta) < kPi)) throw PreconditionError("wedge_curve: need |theta| < pi");
    return EmbeddingCurve(StepFunction::heaviside(0.0, cplx(0.0, theta)));
}

std::string ChordArcSampler::to_string() const {
    std::ostringstream os;
    os << "straddle(spans=2^" << min_exp << "..2^" << max_exp << ",refinement=" << refinement
       << ")+random(count=" << random_count << ",window=" << random_window << ",seed=" << seed << ")";
    return os.str();
}

namespace {

std::vector<std::pair<double, double>> chord_pairs(const EmbeddingCurve& c, const ChordArcSampler& s) {
    std::vector<double> centers;
    collect_breaks(c.w(), -kInf, kInf, centers);
    if (centers.size() > 64) {
        std::vector<double> thin;
        std::size_t stride = centers.size() / 64 + 1;
        for (std::size_t i = 0; i < centers.size(); i += stride) thin.push_back(centers[i]);
        centers = std::move(thin);
    }
    centers.push_back(0.0);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    std::vector<std::pair<double, double>> pairs;
    int R = std::max(1, s.refinement);
    for (double ctr : centers)
        for (int e = s.min_exp; e <= s.max_exp; ++e) {
            double r = std::ldexp(1.0, e);
            for (int j = -R; j <= R; ++j) pairs.push_back({ctr - r, ctr + r * std::exp2(static_cast<double>(j) / R)});
        }
    Rng rng(s.seed);
    double lw = std::log2(2.0 * s.random_window);
    for (std::size_t i = 0; i < s.random_count; ++i) {
        double ctr = rng.uniform(-s.random_window, s.random_window);
        double span = std::exp2(rng.uniform(static_cast<double>(s.min_exp), lw));
        double a = ctr - span * rng.uniform();
        pairs.push_back({a, a + span});
    }
    return pairs;
}

double chord_ratio(const EmbeddingCurve& c, double a, double b) {
    double chord = std::abs(c.raw(b) - c.raw(a));
    if (!(chord > 0.0)) return -1.0;
    return c.raw_arclength(a, b) / chord;
}

ChordArcReport reduce_pairs(const std::vector<std::pair<double, double>>& pairs, const std::vector<double>& ratio,
                            const ChordArcSampler& s) {
    ChordArcReport rep;
    rep.pairs = pairs.size();
    rep.sampler = s.to_string();
    double best = -1.0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (ratio[i] > best) {
            best = ratio[i];
            rep.a = pairs[i].first;
            rep.b = pairs[i].second;
        }
    rep.constant = std::max(1.0, best);
    return rep;
}

}  // namespace

ChordArcReport chord_arc_constant_serial(const EmbeddingCurve& c, const ChordArcSampler& s) {
    auto pairs = chord_pairs(c, s);
    std::vector<double> ratio(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) ratio[i] = chord_ratio(c, pairs[i].first, pairs[i].second);
    return reduce_pairs(pairs, ratio, s);
}

ChordArcReport chord_arc_constant(const EmbeddingCurve& c, const ChordArcSampler& s) {
    auto pairs = chord_pairs(c, s);
    std::vector<double> ratio(pairs.size());
    long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        auto& p = pairs[static_cast<std::size_t>(i)];
        ratio[static_cast<std::size_t>(i)] = chord_ratio(c, p.first, p.second);
    }
    return reduce_pairs(pairs, ratio, s);
}

JResult j_map(const Function& u, const Function& v, bool check_bmo_star) {
    if (!is_real(u) || !is_real(v)) throw PreconditionError("j_map: u and v must be real");
    JResult r;
    MonotoneMap g = gamma_from_u(u);
    Function pv = scale(pullback(g, v), cplx(0.0, 1.0));
    r.w = add(u, pv);
    if (check_bmo_star) {
        r.checked = true;
        r.u_verdict = is_bmo_star(u).verdict;
    }
    return r;
}

JInverse j_inverse(const Function& w) {
    JInverse r;
    r.u = real_part(w);
    MonotoneMap g = gamma_from_u(r.u);
    r.v = pullback_inverse(g, imag_part(w));
    return r;
}

}  // namespace chordarc
