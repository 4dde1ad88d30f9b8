#include "chordarc/monotone_map.hpp"

#include <algorithm>
#include <cmath>

namespace chordarc {

namespace {

bool pinned(double x, double y) { return (x == 0.0 && y == 0.0) || (x == 1.0 && y == 1.0); }

// (e^z - 1)/z, stable near 0.
double phi1(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

// Index j with v[j] == key, or npos.
std::size_t find_exact(const std::vector<double>& v, double key) {
    auto it = std::lower_bound(v.begin(), v.end(), key);
    if (it != v.end() && *it == key) return static_cast<std::size_t>(it - v.begin());
    return static_cast<std::size_t>(-1);
}

}  // namespace

// ------------------------------------------------------------ PiecewiseLinearMap

PiecewiseLinearMap::PiecewiseLinearMap() : xs_{0.0, 1.0}, ys_{0.0, 1.0}, u_{0.0, 0.0, 0.0}, normalized_(true) {}

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> xs, std::vector<double> ys,
                                       std::vector<double> log_slopes, bool normalized)
    : xs_(std::move(xs)), ys_(std::move(ys)), u_(std::move(log_slopes)), normalized_(normalized) {
    if (xs_.empty() || xs_.size() != ys_.size() || u_.size() != xs_.size() + 1)
        throw PreconditionError("piecewise-linear map: inconsistent sizes");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]))
            throw PreconditionError("piecewise-linear map: non-finite knot");
        if (i > 0 && (!(xs_[i - 1] < xs_[i]) || !(ys_[i - 1] < ys_[i])))
            throw PreconditionError("piecewise-linear map: knots must be strictly increasing");
    }
    for (double u : u_)
        if (!std::isfinite(u)) throw PreconditionError("piecewise-linear map: slopes must be positive and finite");
    canonicalize();
}

PiecewiseLinearMap PiecewiseLinearMap::from_slopes(const std::vector<double>& breakpoints,
                                                   const std::vector<double>& slopes, double x0,
                                                   double y0, bool normalized) {
    if (slopes.size() != breakpoints.size() + 1)
        throw PreconditionError("piecewise-linear map: need len(slopes) = len(breakpoints) + 1");
    for (double s : slopes)
        if (!(s > 0) || !std::isfinite(s)) throw PreconditionError("piecewise-linear map: slopes must be positive");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i - 1] < breakpoints[i]))
            throw PreconditionError("piecewise-linear map: breakpoints must be strictly increasing");
    std::vector<double> xs = breakpoints;
    std::vector<double> u(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) u[i] = std::log(slopes[i]);
    // Insert the anchor as a knot so that evaluation there is exact.
    std::size_t p = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x0) - xs.begin());
    if (p == 0 || xs[p - 1] != x0) {
        xs.insert(xs.begin() + static_cast<long>(p), x0);
        u.insert(u.begin() + static_cast<long>(p), u[p]);
        ++p;
    }
    std::size_t a = p - 1;  // index of the anchor knot
    std::vector<double> ys(xs.size());
    ys[a] = y0;
    for (std::size_t i = a + 1; i < xs.size(); ++i) ys[i] = ys[i - 1] + std::exp(u[i]) * (xs[i] - xs[i - 1]);
    for (std::size_t i = a; i-- > 0;) ys[i] = ys[i + 1] - std::exp(u[i + 1]) * (xs[i + 1] - xs[i]);
    return PiecewiseLinearMap(std::move(xs), std::move(ys), std::move(u), normalized);
}

void PiecewiseLinearMap::canonicalize() {
    std::vector<double> xs, ys, u{u_[0]};
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (u_[i + 1] == u.back() && !pinned(xs_[i], ys_[i])) continue;
        xs.push_back(xs_[i]);
        ys.push_back(ys_[i]);
        u.push_back(u_[i + 1]);
    }
    if (xs.empty()) {
        xs.push_back(xs_[0]);
        ys.push_back(ys_[0]);
        u.push_back(u.back());
    }
    xs_ = std::move(xs);
    ys_ = std::move(ys);
    u_ = std::move(u);
}

std::vector<double> PiecewiseLinearMap::slopes() const {
    std::vector<double> s(u_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) s[i] = std::exp(u_[i]);
    return s;
}

std::size_t PiecewiseLinearMap::piece(double x) const {
    return static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
}

double PiecewiseLinearMap::operator()(double x) const {
    std::size_t K = xs_.size();
    if (x <= xs_[0]) return x == xs_[0] ? ys_[0] : ys_[0] + std::exp(u_[0]) * (x - xs_[0]);
    if (x >= xs_[K - 1]) return x == xs_[K - 1] ? ys_[K - 1] : ys_[K - 1] + std::exp(u_[K]) * (x - xs_[K - 1]);
    std::size_t i = piece(x) - 1;
    if (x == xs_[i]) return ys_[i];
    return ys_[i] + (x - xs_[i]) * ((ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]));
}

double PiecewiseLinearMap::inverse(double y) const {
    std::size_t K = ys_.size();
    if (y <= ys_[0]) return y == ys_[0] ? xs_[0] : xs_[0] + std::exp(-u_[0]) * (y - ys_[0]);
    if (y >= ys_[K - 1]) return y == ys_[K - 1] ? xs_[K - 1] : xs_[K - 1] + std::exp(-u_[K]) * (y - ys_[K - 1]);
    std::size_t i = static_cast<std::size_t>(std::upper_bound(ys_.begin(), ys_.end(), y) - ys_.begin()) - 1;
    if (y == ys_[i]) return xs_[i];
    return xs_[i] + (y - ys_[i]) * ((xs_[i + 1] - xs_[i]) / (ys_[i + 1] - ys_[i]));
}

bool PiecewiseLinearMap::is_identity() const {
    for (double u : u_)
        if (u != 0.0) return false;
    for (std::size_t i = 0; i < xs_.size(); ++i)
        if (xs_[i] != ys_[i]) return false;
    return true;
}

PiecewiseLinearMap PiecewiseLinearMap::normalize() const {
    double f0 = (*this)(0.0), f1 = (*this)(1.0);
    std::vector<double> xs = xs_, ys = ys_, u = u_;
    if (!(f0 == 0.0 && f1 == 1.0)) {
        double s = f1 - f0;
        double ls = std::log(s);
        for (auto& y : ys) y = (y - f0) / s;
        for (auto& v : u) v -= ls;
    }
    auto insert_pin = [&](double x) {
        std::size_t p = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        if (p > 0 && xs[p - 1] == x) {
            ys[p - 1] = x;
            return;
        }
        xs.insert(xs.begin() + static_cast<long>(p), x);
        ys.insert(ys.begin() + static_cast<long>(p), x);
        u.insert(u.begin() + static_cast<long>(p), u[p]);
    };
    insert_pin(0.0);
    insert_pin(1.0);
    return PiecewiseLinearMap(std::move(xs), std::move(ys), std::move(u), true);
}

// ------------------------------------------------------------------ IntegralMap

IntegralMap::IntegralMap(SampledFunction u) : u_(std::move(u)) {
    if (!u_.is_real()) throw PreconditionError("integral map: u must be real");
    auto check_tail = [](const Tail& t) {
        if (t.kind == Tail::Kind::Log && !(t.coef.real() > -1.0))
            throw PreconditionError("integral map: e^u tail must not be integrable at infinity");
    };
    check_tail(u_.left_tail());
    check_tail(u_.right_tail());
    const auto& g = u_.grid();
    const auto& v = u_.values();
    cum_.assign(g.size(), 0.0);
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        double h = g[k + 1] - g[k];
        cum_[k + 1] = cum_[k] + h * std::exp(v[k].real()) * phi1(v[k + 1].real() - v[k].real());
    }
    offset_ = 0.0;
    offset_ = raw(0.0);
    z_ = raw(1.0);
}

double IntegralMap::raw(double x) const {
    // Integral from grid[0] to x, minus offset_.
    const auto& g = u_.grid();
    const auto& v = u_.values();
    auto tail = [&](const Tail& t, double xe, double ue, double xx) {
        double e = std::exp(ue);
        if (t.kind == Tail::Kind::Hold) return e * (xx - xe);
        double c = t.coef.real();
        double r = xx / xe;
        if (c == -1.0) return e * xe * std::log(r);
        return e * xe * std::expm1((c + 1.0) * std::log(r)) / (c + 1.0);
    };
    double G;
    if (x <= g.front()) {
        G = tail(u_.left_tail(), g.front(), v.front().real(), x);
    } else if (x >= g.back()) {
        G = cum_.back() + tail(u_.right_tail(), g.back(), v.back().real(), x);
    } else {
        std::size_t k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
        double h = g[k + 1] - g[k];
        double s = (v[k + 1].real() - v[k].real()) / h;
        double dx = x - g[k];
        G = cum_[k] + dx * std::exp(v[k].real()) * phi1(s * dx);
    }
    return G - offset_;
}

double IntegralMap::raw_inverse(double F) const {
    const auto& g = u_.grid();
    const auto& v = u_.values();
    double G = F + offset_;
    auto tail_inv = [&](const Tail& t, double xe, double ue, double dG) {
        double e = std::exp(ue);
        if (t.kind == Tail::Kind::Hold) return xe + dG / e;
        double c = t.coef.real();
        if (c == -1.0) return xe * std::exp(dG / (e * xe));
        return xe * std::exp(std::log1p(dG * (c + 1.0) / (e * xe)) / (c + 1.0));
    };
    if (G <= 0.0) return tail_inv(u_.left_tail(), g.front(), v.front().real(), G);
    if (G >= cum_.back()) return tail_inv(u_.right_tail(), g.back(), v.back().real(), G - cum_.back());
    std::size_t k = static_cast<std::size_t>(std::upper_bound(cum_.begin(), cum_.end(), G) - cum_.begin()) - 1;
    double h = g[k + 1] - g[k];
    double s = (v[k + 1].real() - v[k].real()) / h;
    double d = (G - cum_[k]) / std::exp(v[k].real());
    if (s == 0.0) return g[k] + d;
    return g[k] + std::log1p(s * d) / s;
}

double IntegralMap::operator()(double x) const { return raw(x) / z_; }
double IntegralMap::inverse(double y) const { return raw_inverse(y * z_); }

// ---------------------------------------------------------------- MonotoneMap

double apply(const MonotoneMap& f, double x) {
    return std::visit([x](const auto& m) { return m(x); }, f);
}

double apply_inverse(const MonotoneMap& f, double y) {
    return std::visit([y](const auto& m) { return m.inverse(y); }, f);
}

bool is_normalized(const MonotoneMap& f) {
    return std::visit([](const auto& m) { return m.normalized(); }, f);
}

PiecewiseLinearMap gamma_from_step(const StepFunction& u) {
    if (!u.is_real()) throw PreconditionError("gamma_from_u: u must be real");
    // Reference value u(0) keeps constant shifts exact and avoids overflow.
    double uref = u(0.0).real();
    std::vector<double> xs = u.breakpoints();
    std::vector<double> lu;
    for (auto v : u.values()) lu.push_back(v.real() - uref);
    for (double pin : {0.0, 1.0}) {
        std::size_t p = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), pin) - xs.begin());
        if (p > 0 && xs[p - 1] == pin) continue;
        xs.insert(xs.begin() + static_cast<long>(p), pin);
        lu.insert(lu.begin() + static_cast<long>(p), lu[p]);
    }
    std::size_t i0 = find_exact(xs, 0.0), i1 = find_exact(xs, 1.0);
    double Z = 0.0;
    for (std::size_t i = i0; i < i1; ++i) Z += std::exp(lu[i + 1]) * (xs[i + 1] - xs[i]);
    double lz = std::log(Z);
    std::vector<double> ys(xs.size());
    ys[i0] = 0.0;
    for (std::size_t i = i0 + 1; i < xs.size(); ++i) ys[i] = ys[i - 1] + std::exp(lu[i]) * (xs[i] - xs[i - 1]) / Z;
    for (std::size_t i = i0; i-- > 0;) ys[i] = ys[i + 1] - std::exp(lu[i + 1]) * (xs[i + 1] - xs[i]) / Z;
    ys[i1] = 1.0;
    for (auto& v : lu) v -= lz;
    return PiecewiseLinearMap(std::move(xs), std::move(ys), std::move(lu), true);
}

MonotoneMap gamma_from_u(const Function& u) {
    if (auto* s = std::get_if<StepFunction>(&u)) return gamma_from_step(*s);
    if (auto* s = std::get_if<SampledFunction>(&u)) return IntegralMap(*s);
    throw UnsupportedModeError("gamma_from_u: log-sum input is not supported; sample it first");
}

PiecewiseLinearMap invert(const PiecewiseLinearMap& f) {
    std::vector<double> u = f.log_slopes();
    for (auto& v : u) v = -v;
    return PiecewiseLinearMap(f.ys(), f.xs(), std::move(u), f.normalized());
}

PiecewiseLinearMap compose(const PiecewiseLinearMap& f, const PiecewiseLinearMap& g) {
    struct Cand {
        double x;
        double gy;
        long fknot;
    };
    const auto& gx = g.xs();
    const auto& gyk = g.ys();
    const auto& fx = f.xs();
    std::vector<Cand> c;
    c.reserve(gx.size() + fx.size());
    for (std::size_t j = 0; j < gx.size(); ++j) c.push_back({gx[j], gyk[j], -1});
    for (std::size_t i = 0; i < fx.size(); ++i) {
        std::size_t j = find_exact(gyk, fx[i]);
        if (j != static_cast<std::size_t>(-1))
            c[j].fknot = static_cast<long>(i);
        else
            c.push_back({g.inverse(fx[i]), fx[i], static_cast<long>(i)});
    }
    std::stable_sort(c.begin(), c.end(), [](const Cand& a, const Cand& b) { return a.x < b.x; });
    std::vector<Cand> m;
    for (const auto& e : c) {
        if (!m.empty() && m.back().x == e.x) {
            if (m.back().fknot < 0) m.back().fknot = e.fknot;
            continue;
        }
        m.push_back(e);
    }
    std::vector<double> xs, ys, gys;
    for (const auto& e : m) {
        double y = e.fknot >= 0 ? f.ys()[static_cast<std::size_t>(e.fknot)] : f(e.gy);
        if (!ys.empty() && !(y > ys.back())) continue;  // rounding collapse of a vanishing piece
        xs.push_back(e.x);
        ys.push_back(y);
        gys.push_back(e.fknot >= 0 ? fx[static_cast<std::size_t>(e.fknot)] : e.gy);
    }
    const auto& fu = f.log_slopes();
    const auto& gu = g.log_slopes();
    std::vector<double> u(xs.size() + 1);
    u.front() = fu.front() + gu.front();
    u.back() = fu.back() + gu.back();
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        std::size_t gi = g.piece(0.5 * (xs[k] + xs[k + 1]));
        std::size_t fi = f.piece(0.5 * (gys[k] + gys[k + 1]));
        u[k + 1] = fu[fi] + gu[gi];
    }
    bool normalized = f.normalized() && g.normalized();
    PiecewiseLinearMap out(std::move(xs), std::move(ys), std::move(u), normalized);
    return normalized ? out.normalize() : out;
}

StepFunction log_derivative(const PiecewiseLinearMap& f) {
    std::vector<cplx> v(f.log_slopes().begin(), f.log_slopes().end());
    return StepFunction(f.xs(), std::move(v));
}

Function log_derivative(const MonotoneMap& f) {
    if (auto* p = std::get_if<PiecewiseLinearMap>(&f)) return log_derivative(*p);
    const auto& m = std::get<IntegralMap>(f);
    return m.u() + cplx(-std::log(m.normalizer()));
}

namespace {

// w o T where T(x) is increasing with inverse Tinv; extra_nodes are x-points
// where T has kinks.
template <class Fwd, class Bwd>
Function transport(const Function& w, Fwd T, Bwd Tinv, const std::vector<double>& extra_nodes) {
    if (auto* s = std::get_if<StepFunction>(&w)) {
        std::vector<double> bp;
        std::vector<cplx> vals{s->values()[0]};
        for (std::size_t i = 0; i < s->breakpoints().size(); ++i) {
            double x = Tinv(s->breakpoints()[i]);
            if (!bp.empty() && !(x > bp.back())) {
                vals.back() = s->values()[i + 1];  // collapsed piece
                continue;
            }
            bp.push_back(x);
            vals.push_back(s->values()[i + 1]);
        }
        return StepFunction(std::move(bp), std::move(vals));
    }
    if (auto* s = std::get_if<SampledFunction>(&w)) {
        std::vector<double> xs;
        for (double y : s->grid()) xs.push_back(Tinv(y));
        double lo = xs.front(), hi = xs.back();
        for (double x : extra_nodes)
            if (x > lo && x < hi) xs.push_back(x);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<cplx> v(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) v[i] = (*s)(T(xs[i]));
        return SampledFunction(std::move(xs), std::move(v), s->left_tail(), s->right_tail());
    }
    throw UnsupportedModeError("pullback: log-sum input is not supported; sample it first");
}

}  // namespace

StepFunction pullback(const PiecewiseLinearMap& f, const StepFunction& w) {
    auto Tinv = [&](double y) {
        std::size_t j = find_exact(f.ys(), y);
        return j != static_cast<std::size_t>(-1) ? f.xs()[j] : f.inverse(y);
    };
    return std::get<StepFunction>(transport(Function(w), f, Tinv, {}));
}

Function pullback(const MonotoneMap& f, const Function& w) {
    if (auto* p = std::get_if<PiecewiseLinearMap>(&f)) {
        if (auto* s = std::get_if<StepFunction>(&w)) return pullback(*p, *s);
        auto Tinv = [&](double y) { return p->inverse(y); };
        return transport(w, *p, Tinv, p->xs());
    }
    const auto& m = std::get<IntegralMap>(f);
    std::vector<double> nodes;
    for (double y : m.u().grid()) nodes.push_back(y);
    auto Tinv = [&](double y) { return m.inverse(y); };
    return transport(w, m, Tinv, nodes);
}

Function pullback_inverse(const MonotoneMap& f, const Function& w) {
    if (auto* p = std::get_if<PiecewiseLinearMap>(&f)) return pullback(invert(*p), w);
    const auto& m = std::get<IntegralMap>(f);
    std::vector<double> nodes;
    for (double x : m.u().grid()) nodes.push_back(m(x));
    auto T = [&](double y) { return m.inverse(y); };
    auto Tinv = [&](double x) { return m(x); };
    return transport(w, T, Tinv, nodes);
}

Function add(const Function& f, const Function& g) {
    auto* sf = std::get_if<StepFunction>(&f);
    auto* sg = std::get_if<StepFunction>(&g);
    if (sf && sg) return *sf + *sg;
    auto* pf = std::get_if<SampledFunction>(&f);
    auto* pg = std::get_if<SampledFunction>(&g);
    if (pf && pg) {
        std::vector<double> xs;
        std::set_union(pf->grid().begin(), pf->grid().end(), pg->grid().begin(), pg->grid().end(),
                       std::back_inserter(xs));
        std::vector<cplx> v(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) v[i] = (*pf)(xs[i]) + (*pg)(xs[i]);
        auto combine = [](const Tail& a, const Tail& b) {
            if (a.kind == Tail::Kind::Hold && b.kind == Tail::Kind::Hold) return Tail::hold();
            return Tail::log(a.coef + b.coef);
        };
        return SampledFunction(std::move(xs), std::move(v), combine(pf->left_tail(), pg->left_tail()),
                               combine(pf->right_tail(), pg->right_tail()));
    }
    throw UnsupportedModeError("add: incompatible function kinds");
}

Function q_affine(const Function& u, const Function& w) {
    return add(pullback(gamma_from_u(u), w), u);
}

PiecewiseLinearMap family_fk(double k) {
    if (!(k > 0) || !std::isfinite(k)) throw PreconditionError("family_fk: k must be positive");
    double x0 = -(k + 1.0) / k;
    return PiecewiseLinearMap({x0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, {0.0, -std::log1p(1.0 / k), 0.0, 0.0}, true);
}

PiecewiseLinearMap family_ln(double n) {
    if (!(n > 0) || !std::isfinite(n)) throw PreconditionError("family_ln: n must be positive");
    return PiecewiseLinearMap({0.0, 1.0}, {0.0, 1.0}, {-std::log1p(1.0 / n), 0.0, 0.0}, true);
}

PfNormReport pf_norm_lower_bound(const PiecewiseLinearMap& f, const std::vector<StepFunction>& ensemble,
                                 bool difference_mode) {
    PfNormReport rep;
    rep.certified = true;
    bool any = false;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const auto& w = ensemble[i];
        double nw = bmo_norm_exact(w).value;
        if (nw == 0.0) continue;
        any = true;
        StepFunction pw = pullback(f, w);
        double num = bmo_norm_exact(difference_mode ? pw - w : pw).value;
        double r = num / nw;
        if (r > rep.value) {
            rep.value = r;
            rep.witness = i;
        }
    }
    if (!any) throw PreconditionError("pf_norm_lower_bound: ensemble has no nonconstant member");
    return rep;
}

}  // namespace chordarc
