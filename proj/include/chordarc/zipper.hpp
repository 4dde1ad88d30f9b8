#pragma once

#include <vector>

#include "chordarc/core.hpp"

namespace chordarc {

// Geodesic zipper: conformal map of the left domain of a curve through
// infinity onto the upper half-plane. The curve is given by ordered samples
// p_0..p_{n-1}; outside the samples it is continued by straight rays.
class ZipperMap {
public:
    struct Geo {
        double d;     // |zeta|^2 / Im zeta
        double cinv;  // Re zeta / |zeta|^2
    };

    // ref: index of the sample sent to 0; unit: index of the sample sent to 1.
    static ZipperMap fit(const std::vector<cplx>& points, std::size_t ref, std::size_t unit, bool parallel = true);

    // Normalized boundary images F_j of the samples (F_ref = 0, F_unit = 1);
    // computed with offset arithmetic, increasing along the curve.
    const std::vector<double>& boundary_images() const { return images_; }
    const std::vector<cplx>& points() const { return points_; }
    std::size_t size() const { return geos_.size(); }

    // Map of an interior point of the left domain to the upper half-plane.
    // Boundary samples have their images in boundary_images().
    cplx evaluate_map(cplx p) const;
    // Inverse map from the closed upper half-plane.
    cplx evaluate_inverse(cplx F) const;
    // max_j |evaluate_inverse(F_j) - p_j| / max(1, |p_j|). At a corner of the
    // curve at the reference sample this is limited by the conditioning of the
    // inverse there (square-root-like), not by the images F_j.
    double fit_residual() const;

private:
    std::vector<cplx> points_;
    std::vector<double> images_;
    cplx p0_ = 0.0;
    cplx rot_ = 1.0;
    std::vector<Geo> geos_;
    double ci_ = 0.0;     // 1 / image of infinity (0 if infinity stayed at infinity)
    double fref_ = 0.0;   // unnormalized F at the reference sample
    double scale_ = 1.0;  // unnormalized F_unit - F_ref
};

// Ordered samples must not self-intersect; throws PreconditionError otherwise.
void require_simple_polyline(const std::vector<cplx>& points);

}  // namespace chordarc
