#include "chordarc/zipper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace chordarc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Square root onto the closed upper half-plane: i sqrt(-z).
cplx sqrtH(cplx z) { return cplx(0.0, 1.0) * std::sqrt(-z); }

double sgn(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

double geo_real(const ZipperMap::Geo& g, double x) {
    double w = x / (1.0 - x * g.cinv);
    return sgn(w) * std::sqrt(w * w + g.d * g.d);
}

cplx geo_cplx(const ZipperMap::Geo& g, cplx z) {
    cplx w = z / (1.0 - z * g.cinv);
    cplx id(0.0, g.d);
    return sqrtH((w - id) * (w + id));
}

cplx geo_inverse(const ZipperMap::Geo& g, cplx h) {
    cplx w = std::sqrt(h * h - g.d * g.d);
    if (w.imag() < 0.0 || (w.imag() == 0.0 && sgn(w.real()) != sgn(h.real()) && h.real() != 0.0)) w = -w;
    return w / (1.0 + w * g.cinv);
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
    double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

void require_simple_polyline(const std::vector<cplx>& p) {
    std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag()))
            throw PreconditionError("zipper: non-finite sample");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (p[i] == p[i + 1]) throw PreconditionError("zipper: repeated consecutive sample");
    long m = static_cast<long>(n) - 1;
    int bad = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : bad)
    for (long i = 0; i < m; ++i) {
        std::size_t a = static_cast<std::size_t>(i);
        double xlo = std::min(p[a].real(), p[a + 1].real()), xhi = std::max(p[a].real(), p[a + 1].real());
        double ylo = std::min(p[a].imag(), p[a + 1].imag()), yhi = std::max(p[a].imag(), p[a + 1].imag());
        for (std::size_t c = a + 2; c + 1 < n; ++c) {
            if (std::max(p[c].real(), p[c + 1].real()) < xlo || std::min(p[c].real(), p[c + 1].real()) > xhi ||
                std::max(p[c].imag(), p[c + 1].imag()) < ylo || std::min(p[c].imag(), p[c + 1].imag()) > yhi)
                continue;
            if (segments_intersect(p[a], p[a + 1], p[c], p[c + 1])) ++bad;
        }
    }
    if (bad) throw PreconditionError("zipper: self-intersecting samples");
}

ZipperMap ZipperMap::fit(const std::vector<cplx>& pts, std::size_t ref, std::size_t unit, bool parallel) {
    std::size_t n = pts.size();
    if (n < 64) throw PreconditionError("zipper: need at least 64 samples");
    if (ref == 0 || ref >= n || unit >= n || unit == ref) throw PreconditionError("zipper: bad reference indices");
    require_simple_polyline(pts);
    ZipperMap Z;
    Z.points_ = pts;
    cplx dirL = pts[1] - pts[0];
    Z.p0_ = pts[0];
    Z.rot_ = std::conj(-dirL) / std::abs(dirL);
    std::vector<cplx> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = sqrtH((pts[j] - Z.p0_) * Z.rot_);
    z[0] = 0.0;
    std::vector<double> b(n, 0.0), nb(n, 0.0);
    bool have_ref = false;
    double bref = 0.0;
    double inf_img = kInf;
    Z.geos_.reserve(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        cplx zeta = z[k];
        if (!(zeta.imag() > 0.0) || !std::isfinite(zeta.imag())) {
            std::ostringstream os;
            os << "zipper: ill-conditioned slit parameter at sample " << k << "; refine the sampling";
            throw NumericalError(os.str());
        }
        double az2 = std::norm(zeta);
        Geo g{az2 / zeta.imag(), zeta.real() / az2};
        Z.geos_.push_back(g);
        long lo = static_cast<long>(k) + 1, hi = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (parallel)
        for (long j = lo; j < hi; ++j) z[static_cast<std::size_t>(j)] = geo_cplx(g, z[static_cast<std::size_t>(j)]);
        long kk = static_cast<long>(k);
        if (!have_ref) {
#pragma omp parallel for schedule(static) if (parallel)
            for (long j = 0; j < kk; ++j) b[static_cast<std::size_t>(j)] = geo_real(g, b[static_cast<std::size_t>(j)]);
            b[k - 1] = -g.d;
        } else {
            double xr = bref;
            double wr = xr / (1.0 - xr * g.cinv);
            double Sr = std::sqrt(wr * wr + g.d * g.d);
            double sr = wr != 0.0 ? sgn(wr) : -1.0;
            double den_r = 1.0 - xr * g.cinv;
#pragma omp parallel for schedule(static) if (parallel)
            for (long jj = 0; jj < kk; ++jj) {
                std::size_t j = static_cast<std::size_t>(jj);
                double dl = b[j];
                double xj = xr + dl;
                double den_j = 1.0 - xj * g.cinv;
                double wj = xj / den_j;
                double dw = dl / (den_j * den_r);
                double Sj = std::sqrt(wj * wj + g.d * g.d);
                double sj = wj == 0.0 ? -1.0 : sgn(wj);
                nb[j] = sj == sr ? sr * dw * (wj + wr) / (Sj + Sr) : sj * Sj - sr * Sr;
            }
            std::copy(nb.begin(), nb.begin() + kk, b.begin());
            bref = sr * Sr;
        }
        if (std::isinf(inf_img)) {
            if (g.cinv != 0.0) {
                double c = 1.0 / g.cinv;
                inf_img = -sgn(c) * std::sqrt(c * c + g.d * g.d);
            }
        } else {
            inf_img = geo_real(g, inf_img);
        }
        z[k] = 0.0;
        if (k == ref) {
            have_ref = true;
            bref = 0.0;
            b[k] = 0.0;
        } else if (have_ref) {
            b[k] = -bref;
        }
    }
    if (!have_ref) throw PreconditionError("zipper: reference sample not reached");
    double ci = std::isinf(inf_img) ? 0.0 : 1.0 / inf_img;
    Z.ci_ = ci;
    double wr = bref / (1.0 - bref * ci);
    std::vector<double> F(n);
    for (std::size_t j = 0; j < n; ++j) {
        double xj = bref + b[j];
        double wj = xj / (1.0 - xj * ci);
        double dw = b[j] / ((1.0 - xj * ci) * (1.0 - bref * ci));
        F[j] = -(dw * (wj + wr));
    }
    Z.fref_ = -wr * wr;
    Z.scale_ = F[unit];
    if (!(Z.scale_ > 0.0)) throw NumericalError("zipper: normalization sample maps to the wrong side");
    Z.images_.resize(n);
    for (std::size_t j = 0; j < n; ++j) Z.images_[j] = F[j] / Z.scale_;
    Z.images_[ref] = 0.0;
    Z.images_[unit] = 1.0;
    return Z;
}

cplx ZipperMap::evaluate_map(cplx p) const {
    cplx z = sqrtH((p - p0_) * rot_);
    for (const auto& g : geos_) z = geo_cplx(g, z);
    cplx w = z / (1.0 - z * ci_);
    cplx F = -w * w;
    return (F - fref_) / scale_;
}

cplx ZipperMap::evaluate_inverse(cplx Fn) const {
    cplx F = Fn * scale_ + fref_;
    cplx w = sqrtH(-F);
    cplx z = w / (1.0 + w * ci_);
    for (auto it = geos_.rbegin(); it != geos_.rend(); ++it) z = geo_inverse(*it, z);
    return p0_ + z * z / rot_;
}

double ZipperMap::fit_residual() const {
    double r = 0.0;
    long n = static_cast<long>(points_.size());
#pragma omp parallel for schedule(static) reduction(max : r)
    for (long jj = 0; jj < n; ++jj) {
        auto j = static_cast<std::size_t>(jj);
        r = std::max(r, std::abs(evaluate_inverse(images_[j]) - points_[j]) / std::max(1.0, std::abs(points_[j])));
    }
    return r;
}

}  // namespace chordarc
