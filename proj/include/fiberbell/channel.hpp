#pragma once

// Bipartite state model and the one-arm fiber channel: Schmidt-form SPDC
// state on a truncated basis, then per-mode attenuation, rotation within the
// degenerate {HG10, HG01} pair, dephasing between mode-order blocks and
// anisotropic mixing within the pair, all applied to arm A only.
//
// Loss is carried as a sub-normalized density operator (no sink mode);
// coincidence post-selection renormalizes at rate computation.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fiberbell/errors.hpp"
#include "fiberbell/modes.hpp"

namespace fiberbell {

// Pure bipartite state: coeffs(j, k) multiplies |HG_j>_A |HG_k>_B.
struct TwoPhotonState {
    std::vector<ModeIndex> basis;  // shared by both arms
    Eigen::MatrixXcd coeffs;

    int dim() const { return static_cast<int>(basis.size()); }
    double norm2() const { return coeffs.squaredNorm(); }
};

// Diagonal-correlated state sum_j lambda_j |HG_j>_A |HG_j>_B, normalized.
inline TwoPhotonState spdc_state(const std::vector<std::pair<ModeIndex, Complex>>& schmidt) {
    if (schmidt.empty()) throw std::invalid_argument("spdc_state: empty Schmidt list");
    TwoPhotonState st;
    st.basis.reserve(schmidt.size());
    for (const auto& [idx, lam] : schmidt) st.basis.push_back(idx);
    require_duplicate_free(st.basis);
    const int d = st.dim();
    st.coeffs = Eigen::MatrixXcd::Zero(d, d);
    double n2 = 0.0;
    for (int j = 0; j < d; ++j) {
        st.coeffs(j, j) = schmidt[j].second;
        n2 += std::norm(schmidt[j].second);
    }
    if (n2 <= 0.0) throw std::invalid_argument("spdc_state: all Schmidt coefficients are zero");
    st.coeffs /= std::sqrt(n2);
    return st;
}

inline TwoPhotonState uniform_schmidt_state(const std::vector<ModeIndex>& basis) {
    std::vector<std::pair<ModeIndex, Complex>> s;
    s.reserve(basis.size());
    for (const auto& idx : basis) s.emplace_back(idx, Complex(1.0, 0.0));
    return spdc_state(s);
}

// Bipartite density operator on basis x basis; row/column index j*d + k for
// arm-A mode j and arm-B mode k. Sub-normalized after loss: trace <= 1.
struct DensityOperator {
    std::vector<ModeIndex> basis;
    Eigen::MatrixXcd rho;

    int dim() const { return static_cast<int>(basis.size()); }

    static DensityOperator pure(const TwoPhotonState& st) {
        DensityOperator d;
        d.basis = st.basis;
        const int n = st.dim();
        Eigen::VectorXcd psi(n * n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) psi(j * n + k) = st.coeffs(j, k);
        d.rho = psi * psi.adjoint();
        return d;
    }

    double trace_real() const { return rho.trace().real(); }

    double hermiticity_defect() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()),
                                                           Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    DensityOperator renormalized() const {
        double t = trace_real();
        if (t <= 0.0) throw NumericsError("DensityOperator: non-positive trace");
        DensityOperator out = *this;
        out.rho /= t;
        return out;
    }
};

// One-arm fiber channel. `transmission` is the per-mode amplitude
// transmission aligned with the state basis; gamma multiplies coherences
// between arm-A modes of different mode order (gamma^|order difference|);
// mix dephases the degenerate {HG10, HG01} pair in the principal-axis frame
// at mix_axis.
struct FiberChannel {
    double length_m = 0.3;
    std::vector<double> transmission;
    double theta_rot_rad = 0.0;
    double mix = 0.0;
    double mix_axis_rad = 0.0;
    double gamma = 1.0;

    void validate(std::size_t basis_size) const {
        if (transmission.size() != basis_size)
            throw std::invalid_argument("FiberChannel: transmission size != basis size");
        for (double t : transmission)
            if (!(t > 0.0 && t <= 1.0))
                throw std::invalid_argument("FiberChannel: transmissions must lie in (0, 1]");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("FiberChannel: gamma must lie in [0, 1]");
        if (!(mix >= 0.0 && mix <= 1.0))
            throw std::invalid_argument("FiberChannel: mix must lie in [0, 1]");
    }
};

namespace detail {

// Rotation acting on span{HG10, HG01} (identity if the pair is absent):
// |10> -> cos t |10> + sin t |01>, |01> -> -sin t |10> + cos t |01>.
inline Eigen::MatrixXcd pair_rotation(const std::vector<ModeIndex>& basis, double theta) {
    const int d = static_cast<int>(basis.size());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    int i10 = -1, i01 = -1;
    for (int i = 0; i < d; ++i) {
        if (basis[i] == ModeIndex{1, 0}) i10 = i;
        if (basis[i] == ModeIndex{0, 1}) i01 = i;
    }
    if (i10 < 0 || i01 < 0) return u;
    const double c = std::cos(theta), s = std::sin(theta);
    u(i10, i10) = c;
    u(i01, i10) = s;
    u(i10, i01) = -s;
    u(i01, i01) = c;
    return u;
}

// Apply the arm-A operator M: rho -> (M (x) I) rho (M (x) I)^dagger.
inline Eigen::MatrixXcd conjugate_arm_a(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& m) {
    const int d = static_cast<int>(m.rows());
    Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (int j = 0; j < d; ++j)
        for (int jp = 0; jp < d; ++jp) {
            if (m(j, jp) == Complex(0.0, 0.0)) continue;
            for (int k = 0; k < d; ++k) big(j * d + k, jp * d + k) = m(j, jp);
        }
    return big * rho * big.adjoint();
}

}  // namespace detail

inline DensityOperator apply_channel_arm_a(const DensityOperator& in, const FiberChannel& ch) {
    ch.validate(in.basis.size());
    const int d = in.dim();
    DensityOperator out = in;

    // 1. per-mode amplitude transmission (arm A)
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            for (int jp = 0; jp < d; ++jp)
                for (int kp = 0; kp < d; ++kp)
                    out.rho(j * d + k, jp * d + kp) *= ch.transmission[j] * ch.transmission[jp];

    // 2. unitary rotation within the degenerate pair
    if (ch.theta_rot_rad != 0.0)
        out.rho = detail::conjugate_arm_a(out.rho, detail::pair_rotation(in.basis,
                                                                         ch.theta_rot_rad));

    // 3. intermodal-dispersion dephasing between mode-order blocks
    if (ch.gamma < 1.0) {
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp) {
                int dorder = std::abs(in.basis[j].order() - in.basis[jp].order());
                if (dorder == 0) continue;
                double f = std::pow(ch.gamma, dorder);
                for (int k = 0; k < d; ++k)
                    for (int kp = 0; kp < d; ++kp) out.rho(j * d + k, jp * d + kp) *= f;
            }
    }

    // 4. anisotropic mixing: dephasing of the pair in the principal-axis
    //    frame (coherences touching either principal axis scaled by 1-mix)
    if (ch.mix > 0.0) {
        int i10 = -1, i01 = -1;
        for (int i = 0; i < d; ++i) {
            if (in.basis[i] == ModeIndex{1, 0}) i10 = i;
            if (in.basis[i] == ModeIndex{0, 1}) i01 = i;
        }
        if (i10 >= 0 && i01 >= 0) {
            Eigen::MatrixXcd to_axes = detail::pair_rotation(in.basis, -ch.mix_axis_rad);
            out.rho = detail::conjugate_arm_a(out.rho, to_axes);
            const double keep = 1.0 - ch.mix;
            for (int j = 0; j < d; ++j)
                for (int jp = 0; jp < d; ++jp) {
                    if (j == jp) continue;
                    bool touches = (j == i10 || j == i01 || jp == i10 || jp == i01);
                    if (!touches) continue;
                    for (int k = 0; k < d; ++k)
                        for (int kp = 0; kp < d; ++kp) out.rho(j * d + k, jp * d + kp) *= keep;
                }
            out.rho = detail::conjugate_arm_a(out.rho, to_axes.adjoint());
        }
    }

    return out;
}

inline DensityOperator apply_channel_arm_a(const TwoPhotonState& st, const FiberChannel& ch) {
    return apply_channel_arm_a(DensityOperator::pure(st), ch);
}

enum class Arm { A, B };

// Reduced single-arm state; `arm` selects which arm is KEPT.
inline Eigen::MatrixXcd partial_trace(const DensityOperator& rho, Arm keep) {
    const int d = rho.dim();
    Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(d, d);
    if (keep == Arm::A) {
        for (int j = 0; j < d; ++j)
            for (int jp = 0; jp < d; ++jp)
                for (int k = 0; k < d; ++k) red(j, jp) += rho.rho(j * d + k, jp * d + k);
    } else {
        for (int k = 0; k < d; ++k)
            for (int kp = 0; kp < d; ++kp)
                for (int j = 0; j < d; ++j) red(k, kp) += rho.rho(j * d + k, j * d + kp);
    }
    return red;
}

}  // namespace fiberbell
