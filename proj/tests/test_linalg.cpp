// Dense LU, sparse storage, incomplete factorization, and the Krylov solver
// suite, each against exactly solvable systems.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hwrd/linalg.hpp"

using namespace hwrd;

namespace {

// reproducible well-conditioned test matrix: diagonally dominant + noise
Matrix make_matrix(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            a(i, j) = u(rng);
            off += std::abs(a(i, j));
        }
        a(i, i) = off + 1.0 + std::abs(u(rng));
    }
    return a;
}

Vector make_rhs(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector b(n);
    for (double& v : b) v = u(rng);
    return b;
}

double residual(const Matrix& a, const Vector& x, const Vector& b) {
    Vector r = matvec(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm2(r) / norm2(b);
}

}  // namespace

TEST_CASE("dense factorization reproduces PA = LU") {
    const Matrix a = make_matrix(12, 7);
    const LuFactors lu = dense_lu_factor(a);
    // unpack the combined factor storage: L below the diagonal (unit), U on/above
    const std::size_t n = a.rows();
    Matrix l(n, n), u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        l(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) l(i, j) = lu.lu(i, j);
        for (std::size_t j = i; j < n; ++j) u(i, j) = lu.lu(i, j);
    }
    // apply the recorded row swaps to a copy of A
    Matrix pa = a;
    for (std::size_t k = 0; k < pa.rows(); ++k)
        if (static_cast<std::size_t>(lu.piv[k]) != k)
            for (std::size_t j = 0; j < pa.cols(); ++j)
                std::swap(pa(k, j), pa(lu.piv[k], j));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double lu_ij = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) lu_ij += l(i, k) * u(k, j);
            REQUIRE(lu_ij == Catch::Approx(pa(i, j)).margin(1e-12));
        }
}

TEST_CASE("dense solve handles pivoting across many rows") {
    // sizes chosen so partial pivoting must cross previously eliminated rows
    for (std::size_t n : {3u, 8u, 20u, 50u}) {
        Matrix a = make_matrix(n, 11 + static_cast<unsigned>(n));
        // force pivot churn: put the dominant entries off the diagonal
        for (std::size_t i = 0; i + 1 < n; ++i) std::swap(a.row(i)[i], a.row(i)[n - 1 - i]);
        const Vector b = make_rhs(n, 5);
        const LuFactors lu = dense_lu_factor(a);
        const Vector x = lu.solve(b);
        REQUIRE(residual(a, x, b) < 1e-12);
    }
}

TEST_CASE("singular matrix is rejected") {
    Matrix a(3, 3);
    a(0, 0) = 1.0; a(0, 1) = 2.0; a(0, 2) = 3.0;
    a(1, 0) = 2.0; a(1, 1) = 4.0; a(1, 2) = 6.0;  // 2 x row 0
    a(2, 0) = 1.0; a(2, 1) = 0.0; a(2, 2) = 1.0;
    REQUIRE_THROWS(dense_lu_factor(a));
}

TEST_CASE("sparse storage round-trips and multiplies like dense") {
    const Matrix a = make_matrix(9, 3);
    const CsrMatrix csr = CsrMatrix::from_dense(a);
    const Matrix back = csr.to_dense();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            REQUIRE(back(i, j) == Catch::Approx(a(i, j)).margin(0.0));
    const Vector v = make_rhs(9, 4);
    const Vector d1 = matvec(a, v), s1 = csr.apply(v);
    const Vector d2 = matvec_transpose(a, v), s2 = csr.apply_transpose(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        REQUIRE(s1[i] == Catch::Approx(d1[i]).margin(1e-14));
        REQUIRE(s2[i] == Catch::Approx(d2[i]).margin(1e-14));
    }
}

TEST_CASE("incomplete factorization is exact when the pattern is full") {
    // on a dense pattern ILU(0) degenerates to LU, so M^{-1} A = I
    const Matrix a = make_matrix(8, 9);
    const Ilu0 m = ilu0_factor(a);
    const Vector v = make_rhs(8, 6);
    const Vector mv = m.apply(matvec(a, v));
    for (std::size_t i = 0; i < v.size(); ++i)
        REQUIRE(mv[i] == Catch::Approx(v[i]).margin(1e-10));
    // transpose application consistent with the dense factors
    const Vector mtv = m.apply_transpose(v);
    const Matrix l = m.l_dense(), u = m.u_dense();
    // solve (LU)^T y = v  densely for the oracle
    Matrix lut(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 8; ++k) s += l(j, k) * u(k, i);
            lut(i, j) = s;
        }
    const Vector oracle = dense_lu_factor(lut).solve(v);
    for (std::size_t i = 0; i < v.size(); ++i)
        REQUIRE(mtv[i] == Catch::Approx(oracle[i]).margin(1e-10));
}

TEST_CASE("small symmetric system solved by every method") {
    // A = [[4,1],[1,3]], b = [1,2]  =>  x = (1/11, 7/11)
    Matrix a(2, 2);
    a(0, 0) = 4.0; a(0, 1) = 1.0; a(1, 0) = 1.0; a(1, 1) = 3.0;
    const LinearSystem sys{a, Vector{1.0, 2.0}};
    for (SolveMethod m : {SolveMethod::direct, SolveMethod::cgs, SolveMethod::bicg,
                          SolveMethod::bicgstab, SolveMethod::gmres}) {
        SolverConfig cfg;
        cfg.method = m;
        cfg.tol = 1e-12;
        const SolveReport rep = solve(sys, cfg);
        INFO(to_string(m));
        REQUIRE(rep.converged());
        REQUIRE(rep.x[0] == Catch::Approx(1.0 / 11.0).margin(1e-9));
        REQUIRE(rep.x[1] == Catch::Approx(7.0 / 11.0).margin(1e-9));
        if (m != SolveMethod::direct) REQUIRE(rep.iterations <= 2);
    }
}

TEST_CASE("methods agree on a general dense system, plain and preconditioned") {
    const std::size_t n = 40;
    const Matrix a = make_matrix(n, 21);
    const Vector b = make_rhs(n, 22);
    const LinearSystem sys{a, b};
    SolverConfig direct_cfg;
    direct_cfg.method = SolveMethod::direct;
    const Vector x_ref = solve(sys, direct_cfg).x;
    for (SolveMethod m : {SolveMethod::cgs, SolveMethod::bicg, SolveMethod::bicgstab,
                          SolveMethod::gmres}) {
        for (PrecondKind pk : {PrecondKind::none, PrecondKind::ilu0}) {
            SolverConfig cfg;
            cfg.method = m;
            cfg.tol = 1e-12;
            cfg.preconditioner = pk;
            const SolveReport rep = solve(sys, cfg);
            INFO(to_string(m) << "+" << to_string(pk));
            REQUIRE(rep.converged());
            double diff = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                diff = std::max(diff, std::abs(rep.x[i] - x_ref[i]));
            REQUIRE(diff < 1e-8);
        }
    }
}

TEST_CASE("zero right-hand side short-circuits to the zero solution") {
    Matrix a(2, 2);
    a(0, 0) = 4.0; a(0, 1) = 1.0; a(1, 0) = 1.0; a(1, 1) = 3.0;
    const LinearSystem sys{a, Vector{0.0, 0.0}};
    for (SolveMethod m : {SolveMethod::direct, SolveMethod::gmres, SolveMethod::cgs}) {
        SolverConfig cfg;
        cfg.method = m;
        const SolveReport rep = solve(sys, cfg);
        REQUIRE(rep.converged());
        REQUIRE(rep.x[0] == 0.0);
        REQUIRE(rep.x[1] == 0.0);
        REQUIRE(rep.iterations == 0);
    }
}

TEST_CASE("breakdown is reported, not looped on") {
    // skew-symmetric system: the unpreconditioned two-sided recurrences hit
    // an immediate rho breakdown (r0 . r0* = 0 territory) on b = (1,1)
    Matrix a(2, 2);
    a(0, 0) = 0.0; a(0, 1) = 1.0; a(1, 0) = -1.0; a(1, 1) = 0.0;
    const LinearSystem sys{a, Vector{1.0, 1.0}};
    SolverConfig cfg;
    cfg.method = SolveMethod::bicg;
    cfg.max_iter = 50;
    const SolveReport rep = solve(sys, cfg);
    if (!rep.converged()) {
        REQUIRE(rep.status == SolveStatus::breakdown);
        REQUIRE_FALSE(rep.message.empty());
    }
}

TEST_CASE("iteration cap stops divergence-prone runs") {
    const Matrix a = make_matrix(10, 31);
    const LinearSystem sys{a, make_rhs(10, 32)};
    SolverConfig cfg;
    cfg.method = SolveMethod::gmres;
    cfg.tol = 1e-30;   // unreachable
    cfg.max_iter = 3;  // forced stop
    const SolveReport rep = solve(sys, cfg);
    REQUIRE_FALSE(rep.converged());
    REQUIRE(rep.status == SolveStatus::max_iterations);
    REQUIRE(rep.iterations <= 4);
}

TEST_CASE("reported residual is the true relative residual") {
    const Matrix a = make_matrix(15, 41);
    const Vector b = make_rhs(15, 42);
    const LinearSystem sys{a, b};
    SolverConfig cfg;
    cfg.method = SolveMethod::bicgstab;
    cfg.tol = 1e-10;
    const SolveReport rep = solve(sys, cfg);
    REQUIRE(rep.converged());
    REQUIRE(rep.final_residual == Catch::Approx(residual(a, rep.x, b)).margin(1e-12));
    REQUIRE(rep.final_residual <= cfg.tol * (1.0 + 1e-12));
}

TEST_CASE("factor-once front end matches the one-shot front end") {
    const Matrix a = make_matrix(30, 51);
    const LinearSystem sys{a, make_rhs(30, 52)};
    SolverConfig cfg;
    cfg.method = SolveMethod::gmres;
    cfg.tol = 1e-12;
    cfg.preconditioner = PrecondKind::ilu0;
    const SolveReport one_shot = solve(sys, cfg);
    const Ilu0 m = ilu0_factor(a);
    const SolveReport prepared = solve_prepared(sys, cfg, m);
    REQUIRE(one_shot.converged());
    REQUIRE(prepared.converged());
    for (std::size_t i = 0; i < sys.n(); ++i)
        REQUIRE(prepared.x[i] == Catch::Approx(one_shot.x[i]).margin(1e-12));
}
