#pragma once

// Intermodal group-delay of a hollow dielectric capillary and the resulting
// coherence factor between mode-order blocks for a given spectral filter.

#include <cmath>
#include <complex>
#include <numbers>

#include "fiberbell/errors.hpp"

namespace fiberbell {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct CapillaryParams {
    double core_radius_m = 12.5e-6;
    double wavelength_m = 826e-9;
    double n_clad = 1.45;   // enters Marcatili loss corrections, not the
                            // leading-order group delay; kept for completeness
    double u1 = 2.405;      // first zero of J0 (fundamental mode eigenvalue)
    double u2 = 3.832;      // first zero of J1 (first higher mode)

    void validate() const {
        if (!(core_radius_m > 0.0)) throw std::invalid_argument("capillary: radius must be > 0");
        if (!(wavelength_m > 0.0)) throw std::invalid_argument("capillary: wavelength must be > 0");
        if (!(n_clad > 1.0)) throw std::invalid_argument("capillary: n_clad must be > 1");
        if (!(u2 > u1 && u1 > 0.0))
            throw std::invalid_argument("capillary: need u2 > u1 > 0");
    }
};

// Group-delay difference per meter between the two capillary modes,
// dtau = (u2^2 - u1^2) / (2 k^2 r^2 c), from the leading-order propagation
// constant beta ~ k - u^2/(2 k r^2). Throws when u/(k r) exceeds 0.2 and the
// paraxial expansion no longer applies.
inline double capillary_intermodal_delay_s_per_m(const CapillaryParams& p) {
    p.validate();
    const double k = 2.0 * std::numbers::pi / p.wavelength_m;
    if (p.u2 / (k * p.core_radius_m) > 0.2)
        throw NumericsError("capillary delay: u/(k r) > 0.2, outside validity range");
    const double r2 = p.core_radius_m * p.core_radius_m;
    return (p.u2 * p.u2 - p.u1 * p.u1) / (2.0 * k * k * r2 * kSpeedOfLight);
}

struct SpectralFilter {
    enum class Shape { gaussian, rectangular };

    double center_wavelength_m = 826.1e-9;
    double fwhm_m = 1e-9;
    Shape shape = Shape::gaussian;

    void validate() const {
        if (!(fwhm_m > 0.0)) throw std::invalid_argument("filter: fwhm must be > 0");
        if (!(center_wavelength_m > 0.0))
            throw std::invalid_argument("filter: center wavelength must be > 0");
    }

    // FWHM in optical frequency at the filter center.
    double fwhm_hz() const {
        return kSpeedOfLight * fwhm_m / (center_wavelength_m * center_wavelength_m);
    }
};

// |integral S(nu) exp(i 2 pi nu tau) d nu| for the normalized spectral
// density S of the filter, evaluated at tau = delay_per_m * length. The
// integral is done numerically (midpoint rule on the detuning axis); the
// carrier frequency only contributes a phase and drops out of the modulus.
inline double coherence_factor(double delay_s_per_m, double length_m,
                               const SpectralFilter& filter) {
    filter.validate();
    if (length_m < 0.0) throw std::invalid_argument("coherence_factor: negative length");
    const double tau = delay_s_per_m * length_m;
    if (tau == 0.0) return 1.0;
    const double dnu_fwhm = filter.fwhm_hz();

    double half_span;
    if (filter.shape == SpectralFilter::Shape::rectangular)
        half_span = 0.5 * dnu_fwhm;
    else
        half_span = 5.0 * dnu_fwhm;  // +-5 FWHM covers the Gaussian to < 1e-12

    // resolve the e^{i 2 pi nu tau} oscillation across the whole span
    const double periods = 2.0 * half_span * std::abs(tau);
    const int n = std::max(4001, static_cast<int>(std::min(4e6, 16.0 * periods)) | 1);
    const double step = 2.0 * half_span / n;
    std::complex<double> acc = 0.0;
    double weight = 0.0;
    for (int i = 0; i < n; ++i) {
        const double nu = -half_span + (i + 0.5) * step;
        double s;
        if (filter.shape == SpectralFilter::Shape::rectangular)
            s = 1.0;
        else
            s = std::exp(-4.0 * std::numbers::ln2 * nu * nu / (dnu_fwhm * dnu_fwhm));
        acc += s * std::polar(1.0, 2.0 * std::numbers::pi * nu * tau);
        weight += s;
    }
    return std::min(1.0, std::abs(acc) / weight);
}

}  // namespace fiberbell
