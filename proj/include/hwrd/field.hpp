#pragma once

// Piecewise-constant parameter fields with axis-aligned jump regions, and
// Haar-series approximation of functions by collocation interpolation.
//
// A ParameterField is a base value overridden inside zero or more boxes;
// regions are kept in declaration order and the LAST region containing a
// point wins.  Region bounds are closed intervals.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwrd/haar.hpp"
#include "hwrd/matrix.hpp"
#include "hwrd/tensor.hpp"

namespace hwrd {

using Point = std::array<double, 3>;

struct JumpRegion {
    // lo[a] <= x[a] <= hi[a] for every axis a < dim
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{0.0, 0.0, 0.0};
    double value = 0.0;

    bool contains(const Point& x, int dim) const {
        for (int a = 0; a < dim; ++a)
            if (x[a] < lo[a] || x[a] > hi[a]) return false;
        return true;
    }
};

struct ParameterField {
    int dim = 1;
    std::array<double, 3> domain_lo{0.0, 0.0, 0.0};
    std::array<double, 3> domain_hi{1.0, 1.0, 1.0};
    double base = 0.0;
    std::vector<JumpRegion> regions;

    static ParameterField constant(int dim, double value,
                                   std::array<double, 3> lo = {0.0, 0.0, 0.0},
                                   std::array<double, 3> hi = {1.0, 1.0, 1.0}) {
        ParameterField f;
        f.dim = dim;
        f.domain_lo = lo;
        f.domain_hi = hi;
        f.base = value;
        return f;
    }

    bool is_constant() const { return regions.empty(); }

    double eval(const Point& x) const {
        for (int a = 0; a < dim; ++a)
            if (x[a] < domain_lo[a] || x[a] > domain_hi[a])
                throw std::domain_error("ParameterField: point outside domain on axis " +
                                        std::to_string(a));
        double v = base;
        for (const JumpRegion& r : regions)
            if (r.contains(x, dim)) v = r.value;
        return v;
    }
};

inline double field_eval(const ParameterField& f, const Point& x) { return f.eval(x); }

// ---------------------------------------------------------------------------
// Haar series by collocation interpolation.
//
// Per axis the analysis step solves sum_i alpha_i h_i(y_k) = f(y_k).  The
// rows of H are orthogonal under the collocation inner product (the midpoint
// sum is an exact quadrature for products of family members), so
// H H^T = diag(D) with integer entries and the solve is the exact identity
// alpha = D^{-1} H f — no factorization, no roundoff amplification.

struct WaveletSeries {
    int dim = 1;
    std::array<HaarBasis, 3> bases;
    Tensor coef;  // alpha indexed (i1-1, i2-1, i3-1), x-fastest
};

// Analysis operator W = D^{-1} H (rows: family index, cols: collocation).
inline Matrix analysis_matrix(const HaarMatrices& hm) {
    const int n = hm.basis.size();
    Matrix w = hm.H;
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int k = 0; k < n; ++k) d += hm.H(i, k) * hm.H(i, k);
        for (int k = 0; k < n; ++k) w(i, k) /= d;
    }
    return w;
}

// Synthesis operator S(k,i) = h_i(y_k) = H^T.
inline Matrix synthesis_matrix(const HaarMatrices& hm) {
    const int n = hm.basis.size();
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) s(k, i) = hm.H(i, k);
    return s;
}

// Sample f at the tensor collocation grid (x-fastest ordering).
inline Tensor sample_on_collocation(int dim, const std::array<HaarBasis, 3>& bases,
                                    const std::function<double(const Point&)>& f) {
    std::array<std::size_t, 3> ext = {1, 1, 1};
    std::array<std::vector<double>, 3> y;
    for (int a = 0; a < dim; ++a) {
        y[a] = bases[a].collocation_points();
        ext[a] = y[a].size();
    }
    Tensor t(dim, ext);
    Point p{0.0, 0.0, 0.0};
    for (std::size_t k3 = 0; k3 < ext[2]; ++k3) {
        if (dim > 2) p[2] = y[2][k3];
        for (std::size_t k2 = 0; k2 < ext[1]; ++k2) {
            if (dim > 1) p[1] = y[1][k2];
            for (std::size_t k1 = 0; k1 < ext[0]; ++k1) {
                p[0] = y[0][k1];
                t.at(k1, k2, k3) = f(p);
            }
        }
    }
    return t;
}

inline WaveletSeries approximate(int dim, const std::array<HaarBasis, 3>& bases,
                                 const std::function<double(const Point&)>& f) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("approximate: dim must be 1..3");
    WaveletSeries s;
    s.dim = dim;
    s.bases = bases;
    Tensor samples = sample_on_collocation(dim, bases, f);
    for (int a = 0; a < dim; ++a) {
        const HaarMatrices hm = build_matrices(bases[a]);
        samples = mode_apply(samples, a, analysis_matrix(hm));
    }
    s.coef = std::move(samples);
    return s;
}

inline double series_eval(const WaveletSeries& s, const Point& x) {
    std::array<std::vector<double>, 3> hx;
    for (int a = 0; a < s.dim; ++a) {
        const int n = s.bases[a].size();
        hx[a].resize(n);
        for (int i = 1; i <= n; ++i) hx[a][i - 1] = s.bases[a].eval(i, x[a]);
    }
    double acc = 0.0;
    const auto& c = s.coef;
    for (std::size_t i3 = 0; i3 < c.n[2]; ++i3) {
        const double f3 = (s.dim > 2) ? hx[2][i3] : 1.0;
        if (f3 == 0.0) continue;
        for (std::size_t i2 = 0; i2 < c.n[1]; ++i2) {
            const double f2 = (s.dim > 1) ? hx[1][i2] : 1.0;
            if (f2 == 0.0) continue;
            double row = 0.0;
            for (std::size_t i1 = 0; i1 < c.n[0]; ++i1) {
                const double f1 = hx[0][i1];
                if (f1 != 0.0) row += c.at(i1, i2, i3) * f1;
            }
            acc += row * f2 * f3;
        }
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Coefficient decay report.
//
// Magnitudes are reported in the inner-product normalization
//   a_i = alpha_i * ||h_i||^2   (per axis),
// i.e. the convention of the decay bound |a| <= L/(8 m^4), so smooth inputs
// show the characteristic factor-4-per-level (1D) / m^-4-or-faster (3D
// diagonal) decay.  Level of index i >= 2 is its dilation level j; the i = 1
// scaling entry is reported separately.

struct DecayReport {
    std::vector<int> levels;        // dilation levels j with at least one entry
    std::vector<double> max_abs;    // per-level max of |scaled coefficient|
    double scaling_entry = 0.0;     // |scaled coefficient| of the pure i=1 mode
    double fitted_slope = 0.0;      // least-squares slope of log2(max_abs) vs j
    bool slope_valid = false;       // false when fewer than 2 nonzero levels
};

inline int wavelet_level(const HaarBasis& b, int i) {
    return (i == 1) ? -1 : b.decode(i).j;
}

inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return (n * sxy - sx * sy) / denom;
}

// Per-level maxima of the scaled coefficients.  In 1D all wavelet entries
// at level j are scanned; for dim > 1 the scan is over the level-diagonal
// (all axes at the same dilation level j), matching the bound's setting.
inline DecayReport coefficient_decay(const WaveletSeries& s) {
    DecayReport rep;
    const int dim = s.dim;
    const int max_level = s.bases[0].level();  // wavelet levels run 0..J
    for (int a = 1; a < dim; ++a)
        if (s.bases[a].level() != max_level)
            throw std::invalid_argument("coefficient_decay: per-axis levels must match");

    std::array<std::vector<double>, 3> norm_sq;
    for (int a = 0; a < dim; ++a) {
        const int n = s.bases[a].size();
        norm_sq[a].resize(n);
        for (int i = 1; i <= n; ++i) norm_sq[a][i - 1] = haar_norm_sq(s.bases[a], i);
    }

    auto scaled = [&](std::size_t i1, std::size_t i2, std::size_t i3) {
        double v = s.coef.at(i1, i2, i3) * norm_sq[0][i1];
        if (dim > 1) v *= norm_sq[1][i2];
        if (dim > 2) v *= norm_sq[2][i3];
        return std::abs(v);
    };

    rep.scaling_entry = scaled(0, 0, 0);
    for (int j = 0; j <= max_level; ++j) {
        const int lo = (1 << j) + 1, hi = 2 * (1 << j);  // family indices at level j
        double mx = 0.0;
        if (dim == 1) {
            for (int i = lo; i <= hi; ++i) mx = std::max(mx, scaled(i - 1, 0, 0));
        } else if (dim == 2) {
            for (int i1 = lo; i1 <= hi; ++i1)
                for (int i2 = lo; i2 <= hi; ++i2) mx = std::max(mx, scaled(i1 - 1, i2 - 1, 0));
        } else {
            for (int i1 = lo; i1 <= hi; ++i1)
                for (int i2 = lo; i2 <= hi; ++i2)
                    for (int i3 = lo; i3 <= hi; ++i3)
                        mx = std::max(mx, scaled(i1 - 1, i2 - 1, i3 - 1));
        }
        rep.levels.push_back(j);
        rep.max_abs.push_back(mx);
    }

    std::vector<double> xs, ys;
    for (std::size_t t = 0; t < rep.levels.size(); ++t) {
        if (rep.max_abs[t] > 0.0) {
            xs.push_back(rep.levels[t]);
            ys.push_back(std::log2(rep.max_abs[t]));
        }
    }
    if (xs.size() >= 2) {
        rep.fitted_slope = fit_slope(xs, ys);
        rep.slope_valid = true;
    }
    return rep;
}

inline DecayReport coefficient_decay(int dim, const std::array<HaarBasis, 3>& bases,
                                     const std::function<double(const Point&)>& f) {
    return coefficient_decay(approximate(dim, bases, f));
}

}  // namespace hwrd
