#pragma once

// Hermite-Gaussian mode evaluation, 2-D Gauss-Legendre quadrature and
// decomposition of transverse fields onto a truncated mode basis.
//
// Conventions fixed here and relied on everywhere else:
//  * HG_{m,n} is evaluated at the waist plane, unit-normalized
//    (integral of |HG|^2 over the plane equals 1) and real, with a
//    positive peak lobe: HG_{0,0}(0,0) = sqrt(2/pi)/w0 > 0.
//  * Mode order is m+n; the default analysis basis is
//    {HG00, HG10, HG01} but any duplicate-free list is accepted.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fiberbell/errors.hpp"

namespace fiberbell {

using Complex = std::complex<double>;

struct ModeIndex {
    int m = 0;  // polynomial order in x
    int n = 0;  // polynomial order in y

    int order() const { return m + n; }
    bool operator==(const ModeIndex&) const = default;
};

struct BeamGeometry {
    double w0_m = 1.0;  // beam waist of the HG basis at the analysis plane

    bool valid() const { return w0_m > 0.0 && std::isfinite(w0_m); }
};

// Physicists' Hermite polynomial H_n(u).
inline double hermite(int n, double u) {
    if (n == 0) return 1.0;
    double hkm1 = 1.0, hk = 2.0 * u;
    for (int k = 1; k < n; ++k) {
        double hkp1 = 2.0 * u * hk - 2.0 * k * hkm1;
        hkm1 = hk;
        hk = hkp1;
    }
    return hk;
}

// Value of the unit-normalized HG_{m,n} mode at (x, y), waist plane.
inline double hg_eval(ModeIndex idx, double x_m, double y_m, const BeamGeometry& geom) {
    if (idx.m < 0 || idx.n < 0) throw std::invalid_argument("hg_eval: negative mode index");
    if (!geom.valid()) throw std::invalid_argument("hg_eval: invalid beam geometry");
    const double w0 = geom.w0_m;
    // 1/sqrt(2^(m+n) m! n!) via lgamma, stable for high orders
    const double log_fact = 0.5 * ((idx.m + idx.n) * std::numbers::ln2 +
                                   std::lgamma(idx.m + 1.0) + std::lgamma(idx.n + 1.0));
    const double norm = std::sqrt(2.0 / std::numbers::pi) / w0 * std::exp(-log_fact);
    const double u = std::numbers::sqrt2 * x_m / w0;
    const double v = std::numbers::sqrt2 * y_m / w0;
    return norm * hermite(idx.m, u) * hermite(idx.n, v) *
           std::exp(-(x_m * x_m + y_m * y_m) / (w0 * w0));
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace detail

struct QuadratureSpec {
    int points_per_axis = 200;
    double extent_w0 = 6.0;  // half-extent of the grid in units of w0
};

// Tensor-product Gauss-Legendre grid over [-E, E]^2 with E = extent_w0 * w0.
// Construction runs a self-consistency check (norm of HG_{2,2}); a grid too
// coarse to hold it at 1e-4 is rejected with NumericsError.
class Quadrature2D {
public:
    static std::shared_ptr<const Quadrature2D> for_waist(const BeamGeometry& geom,
                                                         const QuadratureSpec& spec = {}) {
        if (!geom.valid()) throw std::invalid_argument("Quadrature2D: invalid beam geometry");
        if (spec.points_per_axis < 2) throw std::invalid_argument("Quadrature2D: need >= 2 points");
        if (spec.extent_w0 < 4.0)
            throw NumericsError("Quadrature2D: grid extent below 4*w0 violates field coverage");
        auto q = std::shared_ptr<Quadrature2D>(new Quadrature2D(geom, spec));
        double norm2 = 0.0;
        for (std::size_t i = 0; i < q->x_.size(); ++i)
            for (std::size_t j = 0; j < q->y_.size(); ++j) {
                double v = hg_eval({2, 2}, q->x_[i], q->y_[j], geom);
                norm2 += q->wx_[i] * q->wy_[j] * v * v;
            }
        if (std::abs(norm2 - 1.0) > 1e-4)
            throw NumericsError("Quadrature2D: grid too coarse (HG22 norm check failed)");
        return q;
    }

    const std::vector<double>& xs() const { return x_; }
    const std::vector<double>& ys() const { return y_; }
    const std::vector<double>& wxs() const { return wx_; }
    const std::vector<double>& wys() const { return wy_; }
    int points_per_axis() const { return static_cast<int>(x_.size()); }
    double extent_m() const { return extent_m_; }

    bool same_grid(const Quadrature2D& other) const {
        return x_ == other.x_ && y_ == other.y_;
    }

private:
    Quadrature2D(const BeamGeometry& geom, const QuadratureSpec& spec) {
        extent_m_ = spec.extent_w0 * geom.w0_m;
        std::vector<double> t, w;
        detail::gauss_legendre(spec.points_per_axis, t, w);
        const int n = spec.points_per_axis;
        x_.resize(n);
        wx_.resize(n);
        for (int i = 0; i < n; ++i) {
            x_[i] = extent_m_ * t[i];
            wx_[i] = extent_m_ * w[i];
        }
        y_ = x_;
        wy_ = wx_;
    }

    std::vector<double> x_, y_, wx_, wy_;
    double extent_m_ = 0.0;
};

using QuadPtr = std::shared_ptr<const Quadrature2D>;

// Complex scalar field sampled on a quadrature grid; value(i, j) at (x_i, y_j).
class ScalarField {
public:
    template <typename F>
    static ScalarField from_function(QuadPtr quad, F&& f) {
        ScalarField s(std::move(quad));
        const auto& xs = s.quad_->xs();
        const auto& ys = s.quad_->ys();
        s.v_.resize(xs.size(), ys.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < ys.size(); ++j) s.v_(i, j) = f(xs[i], ys[j]);
        return s;
    }

    static ScalarField mode(QuadPtr quad, ModeIndex idx, const BeamGeometry& geom) {
        return from_function(std::move(quad),
                             [&](double x, double y) { return hg_eval(idx, x, y, geom); });
    }

    // Fundamental Gaussian displaced by (dx, dy).
    static ScalarField gaussian(QuadPtr quad, const BeamGeometry& geom, double dx_m = 0.0,
                                double dy_m = 0.0) {
        return from_function(std::move(quad), [&](double x, double y) {
            return hg_eval({0, 0}, x - dx_m, y - dy_m, geom);
        });
    }

    const QuadPtr& quad() const { return quad_; }
    const Eigen::MatrixXcd& values() const { return v_; }
    Eigen::MatrixXcd& values() { return v_; }

    double norm2() const {
        double acc = 0.0;
        const auto& wx = quad_->wxs();
        const auto& wy = quad_->wys();
        for (Eigen::Index i = 0; i < v_.rows(); ++i)
            for (Eigen::Index j = 0; j < v_.cols(); ++j)
                acc += wx[i] * wy[j] * std::norm(v_(i, j));
        return acc;
    }

private:
    explicit ScalarField(QuadPtr quad) : quad_(std::move(quad)) {
        if (!quad_) throw std::invalid_argument("ScalarField: null quadrature");
    }

    QuadPtr quad_;
    Eigen::MatrixXcd v_;
};

// Quadrature inner product <f|g> = integral of conj(f) g.
inline Complex inner_product(const ScalarField& f, const ScalarField& g) {
    if (!f.quad()->same_grid(*g.quad()))
        throw std::invalid_argument("inner_product: fields on different grids");
    const auto& wx = f.quad()->wxs();
    const auto& wy = f.quad()->wys();
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < f.values().rows(); ++i)
        for (Eigen::Index j = 0; j < f.values().cols(); ++j)
            acc += wx[i] * wy[j] * std::conj(f.values()(i, j)) * g.values()(i, j);
    return acc;
}

inline void require_duplicate_free(const std::vector<ModeIndex>& basis) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            if (basis[i] == basis[j]) throw std::invalid_argument("basis contains duplicate modes");
}

// Complex amplitudes over a truncated HG basis. Amplitudes are physical
// coupling coefficients, so norm2() <= 1 for any physical vector; leakage
// into truncated modes shows up as norm2() < 1.
struct ModeVector {
    std::vector<ModeIndex> basis;
    Eigen::VectorXcd amplitudes;
    BeamGeometry geom;

    double norm2() const { return amplitudes.squaredNorm(); }

    int find(ModeIndex idx) const {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == idx) return static_cast<int>(i);
        return -1;
    }

    // Unit-norm copy; the physical coupling efficiency is dropped.
    ModeVector renormalized() const {
        double n = std::sqrt(norm2());
        if (n <= 0.0) throw NumericsError("ModeVector: cannot renormalize a zero vector");
        ModeVector out = *this;
        out.amplitudes /= n;
        return out;
    }

    // Restriction to `subspace` (components outside it dropped), renormalized
    // within it. Used by the Bell analysis on the degenerate pair.
    ModeVector renormalized_in(const std::vector<ModeIndex>& subspace) const {
        ModeVector out;
        out.geom = geom;
        out.basis = subspace;
        out.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(subspace.size()));
        for (std::size_t i = 0; i < subspace.size(); ++i) {
            int k = find(subspace[i]);
            if (k >= 0) out.amplitudes(static_cast<Eigen::Index>(i)) = amplitudes(k);
        }
        return out.renormalized();
    }
};

// Real-valued basis mode samples cached on a grid, for repeated projections.
class BasisGrid {
public:
    BasisGrid(QuadPtr quad, std::vector<ModeIndex> basis, const BeamGeometry& geom)
        : quad_(std::move(quad)), basis_(std::move(basis)), geom_(geom) {
        if (basis_.empty()) throw std::invalid_argument("BasisGrid: empty basis");
        require_duplicate_free(basis_);
        const auto& xs = quad_->xs();
        const auto& ys = quad_->ys();
        vals_.reserve(basis_.size());
        for (const auto& idx : basis_) {
            Eigen::MatrixXd m(xs.size(), ys.size());
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j)
                    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        hg_eval(idx, xs[i], ys[j], geom_);
            vals_.push_back(std::move(m));
        }
    }

    const QuadPtr& quad() const { return quad_; }
    const std::vector<ModeIndex>& basis() const { return basis_; }
    const BeamGeometry& geom() const { return geom_; }

    // a_j = <HG_j | field>
    ModeVector project(const ScalarField& field) const {
        if (!quad_->same_grid(*field.quad()))
            throw std::invalid_argument("BasisGrid::project: field on a different grid");
        const auto& wx = quad_->wxs();
        const auto& wy = quad_->wys();
        ModeVector mv;
        mv.basis = basis_;
        mv.geom = geom_;
        mv.amplitudes.resize(static_cast<Eigen::Index>(basis_.size()));
        for (std::size_t k = 0; k < basis_.size(); ++k) {
            Complex acc = 0.0;
            const auto& mk = vals_[k];
            for (Eigen::Index i = 0; i < mk.rows(); ++i)
                for (Eigen::Index j = 0; j < mk.cols(); ++j)
                    acc += wx[i] * wy[j] * mk(i, j) * field.values()(i, j);
            mv.amplitudes(static_cast<Eigen::Index>(k)) = acc;
        }
        return mv;
    }

private:
    QuadPtr quad_;
    std::vector<ModeIndex> basis_;
    BeamGeometry geom_;
    std::vector<Eigen::MatrixXd> vals_;
};

struct Decomposition {
    ModeVector vec;
    double residual_power = 0.0;  // field norm^2 minus captured norm^2
};

inline Decomposition decompose(const ScalarField& field, const std::vector<ModeIndex>& basis,
                               const BeamGeometry& geom) {
    if (basis.empty()) throw std::invalid_argument("decompose: empty basis");
    BasisGrid bg(field.quad(), basis, geom);
    Decomposition d;
    d.vec = bg.project(field);
    d.residual_power = field.norm2() - d.vec.norm2();
    return d;
}

// The paper's analysis basis: fundamental plus the two first-order modes.
inline std::vector<ModeIndex> basis_three_mode() { return {{0, 0}, {1, 0}, {0, 1}}; }

// x-ladder basis {HG00, HG10, ..., HG_{max_m,0}} for the non-degenerate
// dip experiment (higher orders approximate the strongly correlated source).
inline std::vector<ModeIndex> basis_x_ladder(int max_m) {
    if (max_m < 0) throw std::invalid_argument("basis_x_ladder: negative order");
    std::vector<ModeIndex> b;
    b.reserve(max_m + 1);
    for (int m = 0; m <= max_m; ++m) b.push_back({m, 0});
    return b;
}

}  // namespace fiberbell
