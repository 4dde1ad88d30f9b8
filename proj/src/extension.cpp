#include "chordarc/extension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chordarc/quadrature.hpp"

namespace chordarc {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);

double npdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }
double ncdf(double t) { return 0.5 * std::erfc(-t / kSqrt2); }

struct NodeValues {
    double U, V, Ux, Uy, Vx, Vy;
};

// X ~ N(x, sigma^2), sigma = y / sqrt 2; f = left line + sum of slope jumps.
NodeValues pwl_node(const PiecewiseLinearMap& f, const std::vector<double>& ds, double x, double y) {
    const auto& xs = f.xs();
    const auto& ys = f.ys();
    double s0 = std::exp(f.log_slopes().front());
    double sigma = y / kSqrt2;
    NodeValues n{ys[0] + s0 * (x - xs[0]), 0.0, s0, 0.0, 0.0, 0.0};
    double sum_phi = 0.0, sum_phi_t = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (ds[k] == 0.0) continue;
        double m = x - xs[k];
        double t = m / sigma;
        double p = npdf(t);
        n.U += ds[k] * (m * ncdf(t) + sigma * p);
        n.Ux += ds[k] * ncdf(t);
        sum_phi += ds[k] * p;
        sum_phi_t += ds[k] * p * t;
    }
    n.V = y * n.Ux;
    n.Uy = sum_phi / kSqrt2;
    n.Vx = kSqrt2 * sum_phi;
    n.Vy = n.Ux - sum_phi_t;
    return n;
}

struct IntegralEval {
    const IntegralMap& m;
    double fp(double x) const { return std::exp(m.u()(x).real()) / m.normalizer(); }
    double up(double x) const {
        const auto& g = m.u().grid();
        const auto& v = m.u().values();
        if (x < g.front()) {
            const Tail& t = m.u().left_tail();
            return t.kind == Tail::Kind::Hold ? 0.0 : t.coef.real() / x;
        }
        if (x >= g.back()) {
            const Tail& t = m.u().right_tail();
            return t.kind == Tail::Kind::Hold ? 0.0 : t.coef.real() / x;
        }
        std::size_t k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin()) - 1;
        return (v[k + 1].real() - v[k].real()) / (g[k + 1] - g[k]);
    }
};

NodeValues integral_node(const IntegralEval& e, const quad::Rule& gh, double x, double y) {
    // E over S with density e^{-s^2}/sqrt(pi): X = x - y S.
    NodeValues n{0, 0, 0, 0, 0, 0};
    double Uxy = 0.0, Uxx = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
        double s = gh.nodes[i], w = gh.weights[i] * kInvSqrtPi;
        double X = x - y * s;
        double fp = e.fp(X);
        double fpp = fp * e.up(X);
        n.U += w * e.m(X);
        n.Ux += w * fp;
        n.Uy -= w * s * fp;
        Uxx += w * fpp;
        Uxy -= w * s * fpp;
    }
    n.V = y * n.Ux;
    n.Vx = y * Uxx;
    n.Vy = n.Ux + y * Uxy;
    return n;
}

HeatExtensionField build(const MonotoneMap& f, const ExtensionGrid& grid, bool parallel) {
    if (grid.xs.empty() || grid.ys.empty()) throw PreconditionError("extension: empty grid");
    for (double y : grid.ys)
        if (!(y > 0.0)) throw PreconditionError("extension: grid y must be positive");
    HeatExtensionField F;
    F.grid = grid;
    std::size_t nx = grid.xs.size(), ny = grid.ys.size();
    F.U.assign(nx * ny, 0.0);
    F.V = F.Ux = F.Uy = F.Vx = F.Vy = F.U;
    F.has_derivatives = true;
    std::vector<double> ds;
    const PiecewiseLinearMap* pl = std::get_if<PiecewiseLinearMap>(&f);
    quad::Rule gh;
    if (pl) {
        auto s = pl->slopes();
        for (std::size_t k = 0; k < pl->xs().size(); ++k) ds.push_back(s[k + 1] - s[k]);
    } else {
        gh = quad::gauss_hermite(96);
    }
    auto row = [&](std::size_t j) {
        double y = grid.ys[j];
        for (std::size_t i = 0; i < nx; ++i) {
            NodeValues n = pl ? pwl_node(*pl, ds, grid.xs[i], y)
                              : integral_node(IntegralEval{std::get<IntegralMap>(f)}, gh, grid.xs[i], y);
            std::size_t id = F.index(i, j);
            F.U[id] = n.U;
            F.V[id] = n.V;
            F.Ux[id] = n.Ux;
            F.Uy[id] = n.Uy;
            F.Vx[id] = n.Vx;
            F.Vy[id] = n.Vy;
        }
    };
    long nyl = static_cast<long>(ny);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long j = 0; j < nyl; ++j) row(static_cast<std::size_t>(j));
    } else {
        for (long j = 0; j < nyl; ++j) row(static_cast<std::size_t>(j));
    }
    return F;
}

// Fourth-order first derivative at index k of a uniformly spaced sequence;
// falls back to second-order (one-sided at the ends). Sets low when reduced.
double d1(const std::vector<double>& v, std::size_t k, std::size_t n, std::size_t stride, std::size_t base, double h,
          bool& low) {
    auto at = [&](std::size_t q) { return v[base + q * stride]; };
    if (k >= 2 && k + 2 < n) return (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
    low = true;
    if (k >= 1 && k + 1 < n) return (at(k + 1) - at(k - 1)) / (2.0 * h);
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    return (3.0 * at(k) - 4.0 * at(k - 1) + at(k - 2)) / (2.0 * h);
}

}  // namespace

ExtensionGrid ExtensionGrid::make(double x0, double x1, std::size_t nx, double y0, double y1, int per_decade) {
    if (!(x1 > x0) || nx < 5 || !(y0 > 0) || !(y1 > y0) || per_decade < 1)
        throw PreconditionError("extension grid: invalid parameters");
    ExtensionGrid g;
    for (std::size_t i = 0; i < nx; ++i)
        g.xs.push_back(x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(nx - 1));
    double l0 = std::log10(y0), l1 = std::log10(y1);
    std::size_t ny = static_cast<std::size_t>(std::llround((l1 - l0) * per_decade)) + 1;
    if (ny < 5) throw PreconditionError("extension grid: too few y nodes");
    for (std::size_t j = 0; j < ny; ++j)
        g.ys.push_back(std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(j) / static_cast<double>(ny - 1)));
    return g;
}

ExtensionGrid ExtensionGrid::standard() { return make(-4.0, 4.0, 321, 1e-3, 1e3, 20); }

HeatExtensionField ba_heat_extension(const MonotoneMap& f, const ExtensionGrid& grid) { return build(f, grid, true); }

HeatExtensionField ba_heat_extension_serial(const MonotoneMap& f, const ExtensionGrid& grid) {
    return build(f, grid, false);
}

double BeltramiField::sup_abs() const {
    double s = 0.0;
    for (const auto& m : mu) s = std::max(s, std::abs(m));
    return s;
}

BeltramiField beltrami(const HeatExtensionField& F, DerivativeMethod method) {
    const auto& g = F.grid;
    std::size_t nx = g.xs.size(), ny = g.ys.size();
    if (nx < 5 || ny < 5) throw PreconditionError("beltrami: grid too small for the stencils");
    BeltramiField B;
    B.grid = g;
    B.mu.assign(nx * ny, 0.0);
    B.low_order.assign(nx * ny, false);
    bool analytic = method == DerivativeMethod::Auto && F.has_derivatives;
    B.analytic = analytic;
    double hx = g.xs[1] - g.xs[0];
    double heta = std::log(g.ys[1]) - std::log(g.ys[0]);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            std::size_t id = F.index(i, j);
            cplx Fx, Fy;
            if (analytic) {
                Fx = {F.Ux[id], F.Vx[id]};
                Fy = {F.Uy[id], F.Vy[id]};
            } else {
                bool low = false;
                double ux = d1(F.U, i, nx, 1, j * nx, hx, low);
                double vx = d1(F.V, i, nx, 1, j * nx, hx, low);
                double uy = d1(F.U, j, ny, nx, i, heta, low) / g.ys[j];
                double vy = d1(F.V, j, ny, nx, i, heta, low) / g.ys[j];
                B.low_order[id] = low;
                Fx = {ux, vx};
                Fy = {uy, vy};
            }
            cplx I(0.0, 1.0);
            cplx num = Fx + I * Fy, den = Fx - I * Fy;
            cplx mu = num / den;
            B.mu[id] = mu;
            bool interior = i > 0 && i + 1 < nx && j > 0 && j + 1 < ny;
            if (interior && !(std::abs(mu) < 1.0)) {
                std::ostringstream os;
                os << "beltrami: |mu| >= 1 at node x=" << g.xs[i] << " y=" << g.ys[j] << " (orientation failure)";
                throw NumericalError(os.str());
            }
        }
    return B;
}

CarlesonReport carleson_box_norm(const BeltramiField& B, const IntervalFamily& boxes) {
    const auto& g = B.grid;
    std::size_t nx = g.xs.size(), ny = g.ys.size();
    CarlesonReport rep;
    rep.y_min = g.ys.front();
    rep.y_max = g.ys.back();
    std::vector<double> eta(ny);
    for (std::size_t j = 0; j < ny; ++j) eta[j] = std::log(g.ys[j]);
    // |mu|^2 averaged over each (x, log y) cell
    std::vector<double> cell((nx - 1) * (ny - 1));
    for (std::size_t j = 0; j + 1 < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            auto m2 = [&](std::size_t a, std::size_t b) { return std::norm(B.mu[b * nx + a]); };
            cell[j * (nx - 1) + i] = 0.25 * (m2(i, j) + m2(i + 1, j) + m2(i, j + 1) + m2(i + 1, j + 1));
        }
    bool first = true;
    for (const auto& I : boxes.intervals()) {
        if (I.a < g.xs.front() || I.b > g.xs.back()) {
            ++rep.skipped;
            continue;
        }
        double etop = std::log(std::min(I.length(), g.ys.back()));
        double acc = 0.0;
        if (etop > eta.front()) {
            for (std::size_t j = 0; j + 1 < ny; ++j) {
                double e0 = eta[j], e1 = std::min(eta[j + 1], etop);
                if (!(e1 > e0)) break;
                for (std::size_t i = 0; i + 1 < nx; ++i) {
                    double x0 = std::max(g.xs[i], I.a), x1 = std::min(g.xs[i + 1], I.b);
                    if (!(x1 > x0)) continue;
                    acc += cell[j * (nx - 1) + i] * (x1 - x0) * (e1 - e0);
                }
            }
        }
        double v = acc / I.length();
        ++rep.evaluated;
        if (first || v > rep.value) {
            rep.value = v;
            rep.witness = I;
            first = false;
        }
    }
    return rep;
}

}  // namespace chordarc
