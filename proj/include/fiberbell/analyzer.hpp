#pragma once

// Detection-arm model: step phase plate (orientation phi, transverse offset
// along the edge normal) followed by projection onto a possibly displaced
// fundamental Gaussian through the single-mode fiber.
//
// Geometry convention: the plate edge normal is n = (sin phi, cos phi),
// i.e. phi is measured from the y axis. The plate multiplies the field by
// -1 on the half-plane where x*sin(phi) + y*cos(phi) > delta_pp. With this
// choice a centered plate at orientation phi projects (after the SMF) onto
// sin(phi)|HG10> + cos(phi)|HG01> up to a global sign. delta_smf displaces
// the detection Gaussian along the same edge normal; positive plate offsets
// therefore put the nonlocal dip at positive fiber offsets.

#include <cmath>
#include <utility>
#include <vector>

#include "fiberbell/modes.hpp"

namespace fiberbell {

struct AnalyzerSetting {
    double phi_rad = 0.0;       // plate orientation (paper's alpha / beta)
    double delta_pp_m = 0.0;    // plate offset along the edge normal
    double delta_smf_m = 0.0;   // detection-fiber offset along the edge normal
    BeamGeometry geom;
    bool plate_present = true;
};

inline double plate_sign(double x_m, double y_m, double phi_rad, double delta_pp_m) {
    return (x_m * std::sin(phi_rad) + y_m * std::cos(phi_rad) > delta_pp_m) ? -1.0 : 1.0;
}

// Multiply by exp(i*pi) on the offset half-plane. Unitary; applying the same
// plate twice is the identity.
inline ScalarField phase_plate_apply(const ScalarField& field, double phi_rad,
                                     double delta_pp_m) {
    ScalarField out = field;
    const auto& xs = out.quad()->xs();
    const auto& ys = out.quad()->ys();
    for (Eigen::Index i = 0; i < out.values().rows(); ++i)
        for (Eigen::Index j = 0; j < out.values().cols(); ++j)
            out.values()(i, j) *= plate_sign(xs[i], ys[j], phi_rad, delta_pp_m);
    return out;
}

// The field whose overlap with HG_j gives the analyzer amplitude a_j:
// plate (if present) applied to the displaced detection Gaussian.
inline ScalarField analyzer_probe_field(const AnalyzerSetting& s, QuadPtr quad) {
    const double nx = std::sin(s.phi_rad), ny = std::cos(s.phi_rad);
    ScalarField g = ScalarField::gaussian(std::move(quad), s.geom, s.delta_smf_m * nx,
                                          s.delta_smf_m * ny);
    if (!s.plate_present) return g;
    return phase_plate_apply(g, s.phi_rad, s.delta_pp_m);
}

// a_j = <HG_j | plate^dagger | Gaussian displaced by delta_smf>. Amplitudes
// are physical coupling efficiencies (norm2 <= 1); use
// ModeVector::renormalized() / renormalized_in() for Bell analysis.
inline ModeVector analyzer_vector(const AnalyzerSetting& s, const BasisGrid& basis_grid) {
    return basis_grid.project(analyzer_probe_field(s, basis_grid.quad()));
}

inline ModeVector analyzer_vector(const AnalyzerSetting& s, const std::vector<ModeIndex>& basis,
                                  QuadPtr quad) {
    BasisGrid bg(std::move(quad), basis, s.geom);
    return analyzer_vector(s, bg);
}

}  // namespace fiberbell
