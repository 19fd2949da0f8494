#pragma once

// Haar wavelet family on an interval [A,B] at resolution level J, plus the
// repeated integrals needed by the collocation method.
//
// Family indexing (1-based, n = 2M = 2^(J+1) members):
//   i = 1            scaling function, identically 1 on [A,B]
//   i = m + k + 1    wavelet at dilation level j (m = 2^j, j = 0..J) and
//                    translation k = 0..m-1
// The wavelet i >= 2 is +1 on [beta1, beta2), -1 on [beta2, beta3) and 0
// elsewhere, where
//   beta1 = A + 2 k zeta dx,  beta2 = A + (2k+1) zeta dx,
//   beta3 = A + 2 (k+1) zeta dx,   zeta = M / m,  dx = (B-A) / 2M.
// Supports are half-open; at x = B every wavelet evaluates to 0 and the
// scaling function to 1 (collocation points never touch B).

#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwrd/matrix.hpp"

namespace hwrd {

struct WaveletIndex {
    int j = 0;       // dilation level (i >= 2 only)
    int m = 1;       // 2^j
    int k = 0;       // translation, 0..m-1
    double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
};

class HaarBasis {
public:
    HaarBasis() = default;

    HaarBasis(double a, double b, int level)
        : a_(a), b_(b), level_(level) {
        if (!(b > a)) throw std::invalid_argument("HaarBasis: requires B > A");
        if (level < 0 || level > 12)
            throw std::invalid_argument("HaarBasis: level J out of range [0,12]");
        m_coarse_ = 1 << level;          // M = 2^J
        n_ = 2 * m_coarse_;              // 2M basis functions / collocation points
        dx_ = (b_ - a_) / static_cast<double>(n_);
    }

    double a() const { return a_; }
    double b() const { return b_; }
    int level() const { return level_; }
    int big_m() const { return m_coarse_; }
    int size() const { return n_; }      // number of basis functions = 2M
    double dx() const { return dx_; }

    // Grid nodes x_k = A + k dx, k = 0..2M.
    std::vector<double> grid() const {
        std::vector<double> g(n_ + 1);
        for (int k = 0; k <= n_; ++k) g[k] = a_ + k * dx_;
        return g;
    }

    // Collocation points y_k = (x_{k-1} + x_k) / 2, k = 1..2M (cell midpoints).
    std::vector<double> collocation_points() const {
        std::vector<double> y(n_);
        for (int k = 0; k < n_; ++k) y[k] = a_ + (k + 0.5) * dx_;
        return y;
    }

    // Decode a 1-based family index i >= 2 into (j, m, k) and support breaks.
    WaveletIndex decode(int i) const {
        check_index(i);
        if (i < 2) throw std::invalid_argument("decode: i=1 is the scaling function");
        WaveletIndex w;
        w.j = std::bit_width(static_cast<unsigned>(i - 1)) - 1;  // floor(log2(i-1))
        w.m = 1 << w.j;
        w.k = i - w.m - 1;
        const double zeta_dx = (b_ - a_) / (2.0 * w.m);  // = zeta * dx, zeta = M/m
        w.beta1 = a_ + 2.0 * w.k * zeta_dx;
        w.beta2 = a_ + (2.0 * w.k + 1.0) * zeta_dx;
        w.beta3 = a_ + 2.0 * (w.k + 1.0) * zeta_dx;
        return w;
    }

    // h_i(x).  Throws std::out_of_range for x outside [A,B] or bad i.
    double eval(int i, double x) const {
        check_index(i);
        check_point(x);
        if (i == 1) return 1.0;
        const WaveletIndex w = decode(i);
        if (x >= w.beta1 && x < w.beta2) return 1.0;
        if (x >= w.beta2 && x < w.beta3) return -1.0;
        return 0.0;
    }

    // Repeated integral p_{alpha,i}(x) = integral of h_i applied alpha times,
    // all from A.  alpha = 0 falls back to eval.  Closed four-branch form:
    //   0                                                       x < beta1
    //   (x-beta1)^a / a!                                        beta1 <= x < beta2
    //   [(x-beta1)^a - 2 (x-beta2)^a] / a!                      beta2 <= x < beta3
    //   [(x-beta1)^a - 2 (x-beta2)^a + (x-beta3)^a] / a!        x >= beta3
    // For i = 1: p_{alpha,1}(x) = (x-A)^alpha / alpha!.
    double integral(int i, int alpha, double x) const {
        check_index(i);
        check_point(x);
        if (alpha < 0) throw std::invalid_argument("integral: alpha must be >= 0");
        if (alpha == 0) return eval(i, x);
        const double fact = factorial(alpha);
        if (i == 1) return std::pow(x - a_, alpha) / fact;
        const WaveletIndex w = decode(i);
        if (x < w.beta1) return 0.0;
        double s = std::pow(x - w.beta1, alpha);
        if (x >= w.beta2) s -= 2.0 * std::pow(x - w.beta2, alpha);
        if (x >= w.beta3) s += std::pow(x - w.beta3, alpha);
        return s / fact;
    }

private:
    void check_index(int i) const {
        if (i < 1 || i > n_)
            throw std::out_of_range("HaarBasis: index i=" + std::to_string(i) +
                                    " outside 1.." + std::to_string(n_));
    }
    void check_point(double x) const {
        if (!(x >= a_ && x <= b_))
            throw std::out_of_range("HaarBasis: x=" + std::to_string(x) +
                                    " outside [" + std::to_string(a_) + "," +
                                    std::to_string(b_) + "]");
    }
    static double factorial(int n) {
        double f = 1.0;
        for (int v = 2; v <= n; ++v) f *= v;
        return f;
    }

    double a_ = 0.0, b_ = 1.0;
    int level_ = 0;
    int m_coarse_ = 1;
    int n_ = 2;
    double dx_ = 0.5;
};

// Operational matrices sampled at the collocation points, 1-based family
// index mapped to row i-1:  H(i,k) = h_i(y_k), P1(i,k) = p_{1,i}(y_k),
// P2(i,k) = p_{2,i}(y_k).  All are 2M x 2M dense.
struct HaarMatrices {
    HaarBasis basis;
    Matrix H, P1, P2;
};

inline HaarMatrices build_matrices(const HaarBasis& basis) {
    const int n = basis.size();
    HaarMatrices hm;
    hm.basis = basis;
    hm.H = Matrix(n, n);
    hm.P1 = Matrix(n, n);
    hm.P2 = Matrix(n, n);
    const std::vector<double> y = basis.collocation_points();
    for (int i = 1; i <= n; ++i) {
        for (int k = 0; k < n; ++k) {
            hm.H(i - 1, k) = basis.eval(i, y[k]);
            hm.P1(i - 1, k) = basis.integral(i, 1, y[k]);
            hm.P2(i - 1, k) = basis.integral(i, 2, y[k]);
        }
    }
    return hm;
}

// Free-function spellings used by callers that hold a basis by value.
inline double haar_eval(const HaarBasis& basis, int i, double x) { return basis.eval(i, x); }
inline double haar_integral(const HaarBasis& basis, int i, int alpha, double x) {
    return basis.integral(i, alpha, x);
}
inline std::vector<double> collocation_points(const HaarBasis& basis) {
    return basis.collocation_points();
}

// Exact value of the squared L2 norm of h_i on [A,B]: (B-A) for i = 1 and
// 2^{-j} (B-A) for a wavelet at dilation level j.
inline double haar_norm_sq(const HaarBasis& basis, int i) {
    if (i == 1) return basis.b() - basis.a();
    return (basis.b() - basis.a()) / static_cast<double>(basis.decode(i).m);
}

}  // namespace hwrd
