// Wavelet family and repeated-integral checks.  Because every family member
// is constant on each fine grid cell, cell-midpoint sums evaluate the exact
// integrals, which gives an independent oracle for orthogonality and for the
// cumulative integrals.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hwrd/haar.hpp"

using namespace hwrd;

namespace {

// exact L2 inner product of two family members (both piecewise constant on
// the fine cells, so the midpoint sum is exact)
double inner(const HaarBasis& b, int p, int q) {
    const std::vector<double> y = b.collocation_points();
    double s = 0.0;
    for (double x : y) s += b.eval(p, x) * b.eval(q, x);
    return s * b.dx();
}

}  // namespace

TEST_CASE("family is orthogonal with the predicted norms on [0,1] and [2,4]") {
    for (const auto& [a, bb] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {2.0, 4.0}}) {
        for (int level = 0; level <= 6; ++level) {
            const HaarBasis basis(a, bb, level);
            const int n = basis.size();
            for (int p = 1; p <= n; ++p) {
                for (int q = p; q <= n; ++q) {
                    const double ip = inner(basis, p, q);
                    if (p == q) {
                        REQUIRE(ip == Catch::Approx(haar_norm_sq(basis, p)).margin(1e-12));
                    } else {
                        REQUIRE(std::abs(ip) < 1e-12);
                    }
                }
            }
        }
    }
}

TEST_CASE("norm formula matches the dilation level") {
    const HaarBasis basis(2.0, 4.0, 5);
    REQUIRE(haar_norm_sq(basis, 1) == Catch::Approx(2.0));
    for (int i = 2; i <= basis.size(); ++i) {
        const WaveletIndex w = basis.decode(i);
        REQUIRE(haar_norm_sq(basis, i) ==
                Catch::Approx(std::pow(2.0, -w.j) * 2.0).epsilon(1e-14));
    }
}

TEST_CASE("integral closed forms at the right endpoint") {
    for (const auto& [a, bb] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {2.0, 4.0}}) {
        const double len = bb - a;
        for (int level = 0; level <= 6; ++level) {
            const HaarBasis basis(a, bb, level);
            REQUIRE(std::abs(basis.integral(1, 1, bb) - len) < 1e-12);
            REQUIRE(std::abs(basis.integral(1, 2, bb) - len * len / 2.0) < 1e-12);
            for (int i = 2; i <= basis.size(); ++i) {
                const double m = basis.decode(i).m;
                // first integral closes to zero, second to (B-A)^2 / (4 m^2)
                REQUIRE(std::abs(basis.integral(i, 1, bb)) < 1e-12);
                REQUIRE(std::abs(basis.integral(i, 2, bb) - len * len / (4.0 * m * m)) < 1e-12);
            }
        }
    }
}

TEST_CASE("decode reproduces the sign pattern and support breaks") {
    const HaarBasis basis(0.0, 1.0, 4);
    for (int i = 2; i <= basis.size(); ++i) {
        const WaveletIndex w = basis.decode(i);
        REQUIRE(w.m == (1 << w.j));
        REQUIRE(i == w.m + w.k + 1);
        REQUIRE(w.k >= 0);
        REQUIRE(w.k < w.m);
        REQUIRE(w.beta1 >= basis.a() - 1e-15);
        REQUIRE(w.beta3 <= basis.b() + 1e-15);
        REQUIRE(w.beta2 - w.beta1 == Catch::Approx(w.beta3 - w.beta2));
        const double eps = 1e-9;
        REQUIRE(basis.eval(i, w.beta1 + eps) == 1.0);
        REQUIRE(basis.eval(i, w.beta2 - eps) == 1.0);
        REQUIRE(basis.eval(i, w.beta2 + eps) == -1.0);
        REQUIRE(basis.eval(i, w.beta3 - eps) == -1.0);
        if (w.beta1 > basis.a()) REQUIRE(basis.eval(i, w.beta1 - eps) == 0.0);
        if (w.beta3 < basis.b()) REQUIRE(basis.eval(i, w.beta3 + eps) == 0.0);
    }
}

TEST_CASE("integrals agree with cumulative sums on the grid") {
    const HaarBasis basis(0.0, 1.0, 4);
    const std::vector<double> g = basis.grid();
    const std::vector<double> y = basis.collocation_points();
    for (int i = 1; i <= basis.size(); ++i) {
        // p1 at node k = sum of cell values * dx (exact: h is constant per cell)
        double acc1 = 0.0;
        // p2 at node k = trapezoid of p1 (exact: p1 is linear per cell)
        double acc2 = 0.0;
        double p1_prev = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) {
            acc1 += basis.eval(i, y[k]) * basis.dx();
            acc2 += 0.5 * (p1_prev + acc1) * basis.dx();
            p1_prev = acc1;
            REQUIRE(std::abs(basis.integral(i, 1, g[k + 1]) - acc1) < 1e-13);
            REQUIRE(std::abs(basis.integral(i, 2, g[k + 1]) - acc2) < 1e-13);
        }
    }
}

TEST_CASE("collocation points are the cell midpoints") {
    const HaarBasis basis(2.0, 4.0, 3);
    const std::vector<double> y = basis.collocation_points();
    REQUIRE(static_cast<int>(y.size()) == basis.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        REQUIRE(y[k] == Catch::Approx(2.0 + (k + 0.5) * basis.dx()));
    // scaling function row of H is identically one
    const HaarMatrices hm = build_matrices(basis);
    for (int k = 0; k < basis.size(); ++k) REQUIRE(hm.H(0, k) == 1.0);
}

TEST_CASE("argument guards") {
    REQUIRE_THROWS(HaarBasis(1.0, 1.0, 2));
    REQUIRE_THROWS(HaarBasis(0.0, 1.0, -1));
    const HaarBasis basis(0.0, 1.0, 2);
    REQUIRE_THROWS(basis.eval(0, 0.5));
    REQUIRE_THROWS(basis.eval(basis.size() + 1, 0.5));
    REQUIRE_THROWS(basis.eval(1, -0.1));
    REQUIRE_THROWS(basis.eval(1, 1.1));
    REQUIRE_THROWS(basis.integral(2, -1, 0.5));
    REQUIRE_THROWS(basis.decode(1));
}
