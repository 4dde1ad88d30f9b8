#pragma once

#include <string>
#include <vector>

#include "chordarc/interval_family.hpp"
#include "chordarc/monotone_map.hpp"

namespace chordarc {

// Rectangular grid: uniform in x, log-spaced in y.
struct ExtensionGrid {
    std::vector<double> xs;
    std::vector<double> ys;
    // x in [-4,4] at spacing 0.025, y in [1e-3, 1e3] with 20 nodes per decade.
    static ExtensionGrid standard();
    static ExtensionGrid make(double x0, double x1, std::size_t nx, double y0, double y1, int per_decade);
};

// F = U + iV with U = f * phi_y, V = f * psi_y, phi(t) = pi^{-1/2} e^{-t^2},
// psi = phi'. Node (i, j) is stored at j * nx + i (row j has fixed y).
struct HeatExtensionField {
    ExtensionGrid grid;
    std::vector<double> U, V;
    // Analytic first derivatives when the map admits them.
    bool has_derivatives = false;
    std::vector<double> Ux, Uy, Vx, Vy;
    std::size_t index(std::size_t i, std::size_t j) const { return j * grid.xs.size() + i; }
};

// Piecewise-linear f: closed-form Gaussian convolutions. Integral-form f:
// Gauss-Hermite quadrature.
HeatExtensionField ba_heat_extension(const MonotoneMap& f, const ExtensionGrid& grid);
HeatExtensionField ba_heat_extension_serial(const MonotoneMap& f, const ExtensionGrid& grid);

struct BeltramiField {
    ExtensionGrid grid;
    std::vector<cplx> mu;
    bool analytic = false;
    // rows/columns differentiated with lower-order one-sided stencils
    std::vector<bool> low_order;
    double sup_abs() const;
};

enum class DerivativeMethod { Auto, Stencil };

// mu = (F_x + i F_y)/(F_x - i F_y). Auto uses the analytic derivatives when
// present; Stencil uses fourth-order differences in x and in log y.
// Throws NumericalError if |mu| >= 1 at an interior node.
BeltramiField beltrami(const HeatExtensionField& F, DerivativeMethod method = DerivativeMethod::Auto);

struct CarlesonReport {
    double value = 0.0;
    Interval witness{0.0, 1.0};
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // boxes outside the x-footprint
    double y_min = 0.0;       // truncation of the box integrals
    double y_max = 0.0;
};

// sup over boxes of (1/|I|) int_{I x (y_min, min(|I|, y_max))} |mu|^2 / y, by
// cell quadrature in (x, log y).
CarlesonReport carleson_box_norm(const BeltramiField& mu, const IntervalFamily& boxes);

}  // namespace chordarc
