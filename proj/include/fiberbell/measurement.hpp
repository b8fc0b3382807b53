#pragma once

// Coincidence-rate computation from the post-channel state and two analyzer
// vectors; Poisson count simulation with accidentals; fringe scans and the
// peak/dip visibility estimator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "fiberbell/analyzer.hpp"
#include "fiberbell/channel.hpp"
#include "fiberbell/rng.hpp"

namespace fiberbell {

struct DetectionConfig {
    double pair_rate_hz = 2000.0;        // pairs/s reaching the analyzers
    double integration_time_s = 10.0;    // per setting
    double coincidence_window_s = 2e-9;
    double singles_rate_a_hz = 0.0;      // uncorrelated background per detector
    double singles_rate_b_hz = 0.0;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(coincidence_window_s > 0.0))
            throw std::invalid_argument("detection: coincidence window must be > 0");
        if (pair_rate_hz < 0.0 || integration_time_s < 0.0 || singles_rate_a_hz < 0.0 ||
            singles_rate_b_hz < 0.0)
            throw std::invalid_argument("detection: rates and times must be >= 0");
    }
};

struct CoincidenceRecord {
    AnalyzerSetting setting_a;
    AnalyzerSetting setting_b;
    double expected_rate = 0.0;  // coincidence probability per emitted pair
    double counts = 0.0;         // integer-valued for simulated data
    double singles_a = 0.0;
    double singles_b = 0.0;
};

// <a (x) b| rho |a (x) b>. Unrenormalized analyzer vectors carry the
// physical coupling efficiency; sub-normalized rho carries the loss.
inline double coincidence_probability(const DensityOperator& rho, const ModeVector& a,
                                      const ModeVector& b) {
    if (a.basis != rho.basis || b.basis != rho.basis)
        throw std::invalid_argument("coincidence_probability: analyzer/state basis mismatch");
    const int d = rho.dim();
    Eigen::VectorXcd v(d * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) v(j * d + k) = a.amplitudes(j) * b.amplitudes(k);
    const double p = (v.adjoint() * rho.rho * v).value().real();
    return std::max(0.0, p);
}

// Singles detection probability for one arm: <a| tr_other(rho) |a>.
inline double singles_probability(const DensityOperator& rho, const ModeVector& a, Arm arm) {
    if (a.basis != rho.basis)
        throw std::invalid_argument("singles_probability: analyzer/state basis mismatch");
    Eigen::MatrixXcd red = partial_trace(rho, arm);
    return std::max(0.0, (a.amplitudes.adjoint() * red * a.amplitudes).value().real());
}

// Poisson counts for one setting. Mean coincidences are
// p*pair_rate*T + accidentals, with accidentals from the total singles rates
// (configured background plus pair-driven singles) times the coincidence
// window. Deterministic for a fixed rng stream.
inline CoincidenceRecord simulate_record(double p, double p_single_a, double p_single_b,
                                         const DetectionConfig& cfg, CounterRng rng) {
    cfg.validate();
    const double t = cfg.integration_time_s;
    const double ra = cfg.singles_rate_a_hz + cfg.pair_rate_hz * p_single_a;
    const double rb = cfg.singles_rate_b_hz + cfg.pair_rate_hz * p_single_b;
    const double accidentals = ra * rb * cfg.coincidence_window_s * t;
    CoincidenceRecord rec;
    rec.expected_rate = p;
    rec.counts = static_cast<double>(poisson_sample(rng, p * cfg.pair_rate_hz * t + accidentals));
    rec.singles_a = static_cast<double>(poisson_sample(rng, ra * t));
    rec.singles_b = static_cast<double>(poisson_sample(rng, rb * t));
    return rec;
}

inline CoincidenceRecord simulate_counts(double p, const DetectionConfig& cfg, CounterRng rng) {
    return simulate_record(p, 0.0, 0.0, cfg, rng);
}

inline CoincidenceRecord simulate_counts(double p, const DetectionConfig& cfg) {
    return simulate_counts(p, cfg, CounterRng(cfg.rng_seed));
}

// Rotate plate A over phi_values with plate B fixed; reports per-setting
// coincidence counts plus simulated singles (flat for a maximally mixed
// reduced state, up to shot noise).
inline std::vector<CoincidenceRecord> fringe_scan(const DensityOperator& rho,
                                                  const AnalyzerSetting& fixed_b,
                                                  const std::vector<double>& phi_values,
                                                  const DetectionConfig& cfg,
                                                  const BasisGrid& grid, bool noiseless = false,
                                                  std::uint64_t stream = 0) {
    cfg.validate();
    const ModeVector b = analyzer_vector(fixed_b, grid);
    const double p_sb = singles_probability(rho, b, Arm::B);
    CounterRng root(cfg.rng_seed, stream);
    std::vector<CoincidenceRecord> out;
    out.reserve(phi_values.size());
    for (std::size_t i = 0; i < phi_values.size(); ++i) {
        AnalyzerSetting sa;
        sa.phi_rad = phi_values[i];
        sa.geom = fixed_b.geom;
        const ModeVector a = analyzer_vector(sa, grid);
        const double p = coincidence_probability(rho, a, b);
        const double p_sa = singles_probability(rho, a, Arm::A);
        CoincidenceRecord rec;
        if (noiseless) {
            rec.expected_rate = p;
            const double t = cfg.integration_time_s;
            const double ra = cfg.singles_rate_a_hz + cfg.pair_rate_hz * p_sa;
            const double rb = cfg.singles_rate_b_hz + cfg.pair_rate_hz * p_sb;
            rec.counts = p * cfg.pair_rate_hz * t + ra * rb * cfg.coincidence_window_s * t;
            rec.singles_a = ra * t;
            rec.singles_b = rb * t;
        } else {
            rec = simulate_record(p, p_sa, p_sb, cfg, root.split(i));
        }
        rec.setting_a = sa;
        rec.setting_b = fixed_b;
        out.push_back(rec);
    }
    return out;
}

// Fringe contrast per the dip definition: MAX is the average of the two
// peaks adjacent to the dip, MIN is the count rate in the dip. `scan` holds
// (position, value) pairs ordered by position. Optional moving-average
// smoothing (window an odd sample count; 0 disables).
inline double visibility(const std::vector<std::pair<double, double>>& scan,
                         int smoothing_window = 0) {
    if (scan.size() < 3) throw NumericsError("visibility: scan too short");
    std::vector<double> v(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i) v[i] = scan[i].second;
    if (smoothing_window > 1) {
        const int half = smoothing_window / 2;
        std::vector<double> sm(v.size());
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
            double acc = 0.0;
            int cnt = 0;
            for (int j = std::max(0, i - half);
                 j <= std::min(static_cast<int>(v.size()) - 1, i + half); ++j, ++cnt)
                acc += v[j];
            sm[i] = acc / cnt;
        }
        v = std::move(sm);
    }

    // dip = deepest interior local minimum that has a rise on both sides
    int dip = -1;
    double dip_val = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] <= v[i - 1] && v[i] <= v[i + 1] && (v[i] < v[i - 1] || v[i] < v[i + 1])) {
            double left_peak = *std::max_element(v.begin(), v.begin() + i);
            double right_peak = *std::max_element(v.begin() + i + 1, v.end());
            if (left_peak > v[i] && right_peak > v[i]) {
                if (dip < 0 || v[i] < dip_val) {
                    dip = static_cast<int>(i);
                    dip_val = v[i];
                }
            }
        }
    }
    if (dip < 0) throw NumericsError("visibility: no dip found in scan");

    // nearest local maximum on each side (scan end counts as a peak)
    auto local_max_left = [&](int from) {
        for (int i = from; i > 0; --i)
            if (v[i] >= v[i - 1] && v[i] >= v[std::min<int>(i + 1, v.size() - 1)]) return v[i];
        return v[0];
    };
    auto local_max_right = [&](int from) {
        for (int i = from; i + 1 < static_cast<int>(v.size()); ++i)
            if (v[i] >= v[i + 1] && v[i] >= v[std::max(i - 1, 0)]) return v[i];
        return v.back();
    };
    const double max_avg = 0.5 * (local_max_left(dip - 1) + local_max_right(dip + 1));
    if (max_avg + dip_val <= 0.0) throw NumericsError("visibility: degenerate scan");
    return (max_avg - dip_val) / (max_avg + dip_val);
}

}  // namespace fiberbell
