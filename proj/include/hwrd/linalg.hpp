#pragma once

// Linear solver suite: dense LU (partial pivoting), ILU(0) on a CSR
// pattern, and the four Krylov methods compared by the benchmark CLI
// (CGS, BiCG, BiCGStab, restarted GMRES), all optionally left-preconditioned
// with ILU(0).
//
// Reporting contract: every SolveReport carries the iteration count, the
// RECOMPUTED true relative residual ||b - A x||_2 / ||b||_2 (never the
// internal estimate), and monotonic-clock timings for setup (factorization)
// and the solve itself.  A report is `converged` only if the recomputed
// residual meets the tolerance; Lanczos-type breakdowns surface as status
// `breakdown` with the iteration at which they occurred.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hwrd/matrix.hpp"

namespace hwrd {

// -- dense LU ----------------------------------------------------------------

struct LuFactors {
    Matrix lu;               // L (unit diagonal, below) and U (on/above) packed
    std::vector<int> piv;    // row swaps applied at each elimination step

    Vector solve(const Vector& b) const {
        const std::size_t n = lu.rows();
        Vector x = b;
        // apply all row swaps first: the stored L lives in the final row order
        for (std::size_t k = 0; k < n; ++k) {
            const auto p = static_cast<std::size_t>(piv[k]);
            if (p != k) std::swap(x[k], x[p]);
        }
        for (std::size_t i = 1; i < n; ++i) {  // L y = Pb (unit diagonal)
            const double* r = lu.row(i);
            double s = x[i];
            for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {  // U x = y
            const double* r = lu.row(i);
            double s = x[i];
            for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
            x[i] = s / r[i];
        }
        return x;
    }
};

inline LuFactors dense_lu_factor(Matrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("dense_lu_factor: matrix not square");
    LuFactors f;
    f.piv.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0)
            throw std::runtime_error("dense_lu_factor: singular at column " + std::to_string(k));
        f.piv[k] = static_cast<int>(p);
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        const double pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double lik = a(i, k) / pivot;
            a(i, k) = lik;
            if (lik != 0.0) {
                const double* rk = a.row(k);
                double* ri = a.row(i);
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= lik * rk[j];
            }
        }
    }
    f.lu = std::move(a);
    return f;
}

// -- ILU(0) -------------------------------------------------------------------

// Incomplete LU with zero fill-in: L and U inherit exactly the sparsity
// pattern of A (so on a fully dense pattern this coincides with unpivoted
// LU).  Stored packed in CSR, unit diagonal of L implicit.
struct Ilu0 {
    CsrMatrix lu;
    std::vector<std::size_t> diag_pos;  // position of the diagonal in each row
    std::size_t pivot_fixups = 0;       // structurally zero pivots replaced

    // x = U^{-1} L^{-1} v
    Vector apply(const Vector& v) const {
        const std::size_t n = lu.n_rows;
        Vector x = v;
        for (std::size_t i = 0; i < n; ++i) {  // L solve (unit diagonal)
            double s = x[i];
            for (std::size_t p = lu.row_ptr[i]; p < diag_pos[i]; ++p)
                s -= lu.val[p] * x[lu.col_idx[p]];
            x[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {  // U solve
            double s = x[i];
            for (std::size_t p = diag_pos[i] + 1; p < lu.row_ptr[i + 1]; ++p)
                s -= lu.val[p] * x[lu.col_idx[p]];
            x[i] = s / lu.val[diag_pos[i]];
        }
        return x;
    }

    // x = L^{-T} U^{-T} v  (needed by the BiCG shadow recurrence)
    Vector apply_transpose(const Vector& v) const {
        const std::size_t n = lu.n_rows;
        Vector x = v;
        for (std::size_t i = 0; i < n; ++i) {  // U^T solve (forward, column sweep)
            x[i] /= lu.val[diag_pos[i]];
            const double xi = x[i];
            for (std::size_t p = diag_pos[i] + 1; p < lu.row_ptr[i + 1]; ++p)
                x[lu.col_idx[p]] -= lu.val[p] * xi;
        }
        for (std::size_t i = n; i-- > 0;) {  // L^T solve (backward, unit diagonal)
            const double xi = x[i];
            for (std::size_t p = lu.row_ptr[i]; p < diag_pos[i]; ++p)
                x[lu.col_idx[p]] -= lu.val[p] * xi;
        }
        return x;
    }

    Matrix l_dense() const {
        const std::size_t n = lu.n_rows;
        Matrix l(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            l(i, i) = 1.0;
            for (std::size_t p = lu.row_ptr[i]; p < diag_pos[i]; ++p)
                l(i, lu.col_idx[p]) = lu.val[p];
        }
        return l;
    }
    Matrix u_dense() const {
        const std::size_t n = lu.n_rows;
        Matrix u(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t p = diag_pos[i]; p < lu.row_ptr[i + 1]; ++p)
                u(i, lu.col_idx[p]) = lu.val[p];
        return u;
    }
};

inline Ilu0 ilu0_factor(const CsrMatrix& a) {
    const std::size_t n = a.n_rows;
    if (a.n_cols != n) throw std::invalid_argument("ilu0_factor: matrix not square");
    Ilu0 f;
    f.lu = a;

    // The factorization needs every diagonal position in its pattern, but
    // rows whose diagonal coefficient is exactly zero arrive without one
    // (sparse storage keeps only nonzeros).  Pad such rows with an explicit
    // zero entry, keeping columns sorted; the pivot substitution below then
    // gives it a usable value.
    {
        std::size_t missing = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool has = false;
            for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p)
                if (a.col_idx[p] == i) { has = true; break; }
            if (!has) ++missing;
        }
        if (missing > 0) {
            CsrMatrix padded;
            padded.n_rows = n;
            padded.n_cols = n;
            padded.row_ptr.assign(n + 1, 0);
            padded.col_idx.reserve(a.col_idx.size() + missing);
            padded.val.reserve(a.val.size() + missing);
            for (std::size_t i = 0; i < n; ++i) {
                bool placed = false;
                for (std::size_t p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
                    const std::size_t j = a.col_idx[p];
                    if (!placed && j > i) {
                        padded.col_idx.push_back(i);
                        padded.val.push_back(0.0);
                        placed = true;
                    }
                    if (j == i) placed = true;
                    padded.col_idx.push_back(j);
                    padded.val.push_back(a.val[p]);
                }
                if (!placed) {
                    padded.col_idx.push_back(i);
                    padded.val.push_back(0.0);
                }
                padded.row_ptr[i + 1] = padded.col_idx.size();
            }
            f.lu = std::move(padded);
        }
    }
    f.diag_pos.assign(n, 0);

    std::vector<std::ptrdiff_t> pos(n, -1);  // column -> packed position in row i
    for (std::size_t i = 0; i < n; ++i) {
        bool has_diag = false;
        for (std::size_t p = f.lu.row_ptr[i]; p < f.lu.row_ptr[i + 1]; ++p) {
            pos[f.lu.col_idx[p]] = static_cast<std::ptrdiff_t>(p);
            if (f.lu.col_idx[p] == i) {
                f.diag_pos[i] = p;
                has_diag = true;
            }
        }
        if (!has_diag)
            throw std::runtime_error("ilu0_factor: missing diagonal at row " + std::to_string(i));

        for (std::size_t p = f.lu.row_ptr[i]; p < f.lu.row_ptr[i + 1]; ++p) {
            const std::size_t k = f.lu.col_idx[p];
            if (k >= i) break;  // columns sorted; lower part done
            const double ukk = f.lu.val[f.diag_pos[k]];
            if (ukk == 0.0)
                throw std::runtime_error("ilu0_factor: zero pivot at row " + std::to_string(k));
            const double lik = f.lu.val[p] / ukk;
            f.lu.val[p] = lik;
            for (std::size_t q = f.diag_pos[k] + 1; q < f.lu.row_ptr[k + 1]; ++q) {
                const std::ptrdiff_t t = pos[f.lu.col_idx[q]];
                if (t >= 0) f.lu.val[static_cast<std::size_t>(t)] -= lik * f.lu.val[q];
            }
        }
        // Zero pivots here are usually structural (a leading column exactly
        // dependent on earlier ones), not ill-conditioning of the whole
        // matrix.  Substitute a row-scaled value so the factorization stays
        // defined; the preconditioner is then inexact in that one direction,
        // which the outer Krylov iteration absorbs.
        double& uii = f.lu.val[f.diag_pos[i]];
        double scale = 0.0;
        for (std::size_t p = f.lu.row_ptr[i]; p < f.lu.row_ptr[i + 1]; ++p)
            scale = std::max(scale, std::abs(f.lu.val[p]));
        if (scale == 0.0) scale = 1.0;
        if (std::abs(uii) < 1e-12 * scale) {
            uii = (uii < 0.0 ? -1.0 : 1.0) * 0.01 * scale;
            ++f.pivot_fixups;
        }
        for (std::size_t p = f.lu.row_ptr[i]; p < f.lu.row_ptr[i + 1]; ++p)
            pos[f.lu.col_idx[p]] = -1;
    }
    return f;
}

inline Ilu0 ilu0_factor(const Matrix& a) { return ilu0_factor(CsrMatrix::from_dense(a)); }

// -- linear system + solver configuration ------------------------------------

// Dense below this size, CSR above; assembly routines honor the same cutoff
// so either storage yields the same logical matrix.
inline constexpr std::size_t kDenseLimit = 4096;

struct LinearSystem {
    std::variant<Matrix, CsrMatrix> a;
    Vector b;

    std::size_t n() const {
        return std::holds_alternative<Matrix>(a) ? std::get<Matrix>(a).rows()
                                                 : std::get<CsrMatrix>(a).n_rows;
    }
    Vector apply(const Vector& x) const {
        return std::holds_alternative<Matrix>(a) ? matvec(std::get<Matrix>(a), x)
                                                 : std::get<CsrMatrix>(a).apply(x);
    }
    Vector apply_transpose(const Vector& x) const {
        return std::holds_alternative<Matrix>(a)
                   ? matvec_transpose(std::get<Matrix>(a), x)
                   : std::get<CsrMatrix>(a).apply_transpose(x);
    }
    Matrix dense() const {
        return std::holds_alternative<Matrix>(a) ? std::get<Matrix>(a)
                                                 : std::get<CsrMatrix>(a).to_dense();
    }
};

enum class SolveMethod { direct, cgs, bicg, bicgstab, gmres };
enum class PrecondKind { none, ilu0 };

inline std::string to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::direct: return "direct";
        case SolveMethod::cgs: return "cgs";
        case SolveMethod::bicg: return "bicg";
        case SolveMethod::bicgstab: return "bicgstab";
        case SolveMethod::gmres: return "gmres";
    }
    return "?";
}

inline std::string to_string(PrecondKind p) {
    return p == PrecondKind::none ? "none" : "ilu0";
}

struct SolverConfig {
    SolveMethod method = SolveMethod::gmres;
    double tol = 1e-8;          // on the relative residual
    std::size_t max_iter = 0;   // 0 -> 10 * N
    std::size_t restart = 30;   // GMRES only
    PrecondKind preconditioner = PrecondKind::none;
};

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveReport {
    Vector x;
    std::size_t iterations = 0;
    double final_residual = 0.0;  // recomputed ||b - A x|| / ||b||
    double setup_seconds = 0.0;   // preconditioner / factorization time
    double solve_seconds = 0.0;
    SolveStatus status = SolveStatus::converged;
    std::string message;
    SolveMethod method = SolveMethod::direct;

    bool converged() const { return status == SolveStatus::converged; }
    double total_seconds() const { return setup_seconds + solve_seconds; }
};

// M^{-1} (A v): one preconditioned operator application (the Krylov kernel).
inline Vector apply_preconditioned(const LinearSystem& sys, const std::optional<Ilu0>& m,
                                   const Vector& v) {
    Vector w = sys.apply(v);
    return m ? m->apply(w) : w;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline double true_rel_residual(const LinearSystem& sys, const Vector& x, double bnorm) {
    Vector r = sys.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = sys.b[i] - r[i];
    const double rn = norm2(r);
    return bnorm > 0.0 ? rn / bnorm : rn;
}

// Shared state for the transpose-free methods.
struct KrylovEnv {
    const LinearSystem& sys;
    const std::optional<Ilu0>& m;
    double tol_abs;  // tolerance on the preconditioned residual norm
    std::size_t max_iter;

    Vector op(const Vector& v) const { return apply_preconditioned(sys, m, v); }
    Vector op_t(const Vector& v) const {
        return sys.apply_transpose(m ? m->apply_transpose(v) : v);
    }
};

inline constexpr double kBreakdownEps = 1e-300;

}  // namespace detail

// -- the four Krylov kernels --------------------------------------------------
// Each returns (x, iterations, status, message); the caller recomputes the
// true residual and finalizes the report.

namespace detail {

struct KernelResult {
    Vector x;
    std::size_t iters = 0;
    SolveStatus status = SolveStatus::max_iterations;
    std::string message;
};

inline KernelResult run_cgs(const KrylovEnv& env, Vector r0) {
    const std::size_t n = r0.size();
    KernelResult res;
    res.x.assign(n, 0.0);
    Vector r = r0, rhat = r0, u = r0, p = r0;
    double rho = dot(rhat, r);
    while (res.iters < env.max_iter) {
        if (std::abs(rho) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "cgs: rho breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        Vector v = env.op(p);
        const double sigma = dot(rhat, v);
        if (std::abs(sigma) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "cgs: sigma breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        const double alpha = rho / sigma;
        Vector q = u;
        axpy(-alpha, v, q);  // q = u - alpha v
        Vector uq = u;
        axpy(1.0, q, uq);  // u + q
        axpy(alpha, uq, res.x);
        Vector w = env.op(uq);
        axpy(-alpha, w, r);
        ++res.iters;
        if (norm2(r) <= env.tol_abs) {
            res.status = SolveStatus::converged;
            return res;
        }
        const double rho_new = dot(rhat, r);
        const double beta = rho_new / rho;
        rho = rho_new;
        u = r;
        axpy(beta, q, u);  // u = r + beta q
        Vector tmp = q;
        axpy(beta, p, tmp);  // q + beta p
        p = u;
        axpy(beta, tmp, p);  // p = u + beta (q + beta p)
    }
    return res;
}

inline KernelResult run_bicg(const KrylovEnv& env, Vector r0) {
    const std::size_t n = r0.size();
    KernelResult res;
    res.x.assign(n, 0.0);
    Vector r = r0, rhat = r0, p = r0, phat = r0;
    double rho = dot(rhat, r);
    while (res.iters < env.max_iter) {
        if (std::abs(rho) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicg: rho breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        Vector q = env.op(p);
        Vector qhat = env.op_t(phat);
        const double sigma = dot(phat, q);
        if (std::abs(sigma) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicg: sigma breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        const double alpha = rho / sigma;
        axpy(alpha, p, res.x);
        axpy(-alpha, q, r);
        axpy(-alpha, qhat, rhat);
        ++res.iters;
        if (norm2(r) <= env.tol_abs) {
            res.status = SolveStatus::converged;
            return res;
        }
        const double rho_new = dot(rhat, r);
        const double beta = rho_new / rho;
        rho = rho_new;
        axpby(1.0, r, beta, p);        // p = r + beta p
        axpby(1.0, rhat, beta, phat);  // phat = rhat + beta phat
    }
    return res;
}

inline KernelResult run_bicgstab(const KrylovEnv& env, Vector r0) {
    const std::size_t n = r0.size();
    KernelResult res;
    res.x.assign(n, 0.0);
    Vector r = r0, rhat = r0;
    Vector p(n, 0.0), v(n, 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    while (res.iters < env.max_iter) {
        const double rho_new = dot(rhat, r);
        if (std::abs(rho_new) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicgstab: rho breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        // p = r + beta (p - omega v)
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        v = env.op(p);
        const double sigma = dot(rhat, v);
        if (std::abs(sigma) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicgstab: sigma breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        alpha = rho / sigma;
        Vector s = r;
        axpy(-alpha, v, s);
        ++res.iters;
        if (norm2(s) <= env.tol_abs) {
            axpy(alpha, p, res.x);
            res.status = SolveStatus::converged;
            return res;
        }
        Vector t = env.op(s);
        const double tt = dot(t, t);
        if (tt < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicgstab: t breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        omega = dot(t, s) / tt;
        if (std::abs(omega) < kBreakdownEps) {
            res.status = SolveStatus::breakdown;
            res.message = "bicgstab: omega breakdown at iteration " + std::to_string(res.iters);
            return res;
        }
        axpy(alpha, p, res.x);
        axpy(omega, s, res.x);
        r = s;
        axpy(-omega, t, r);
        if (norm2(r) <= env.tol_abs) {
            res.status = SolveStatus::converged;
            return res;
        }
    }
    return res;
}

inline KernelResult run_gmres(const KrylovEnv& env, const Vector& b_pre, std::size_t restart) {
    const std::size_t n = b_pre.size();
    KernelResult res;
    res.x.assign(n, 0.0);
    const std::size_t m = std::min<std::size_t>(restart == 0 ? 30 : restart, env.max_iter);

    std::vector<Vector> v_basis;
    Matrix h(m + 1, m);
    Vector cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);

    while (res.iters < env.max_iter) {
        // Residual at the current iterate (preconditioned space).
        Vector r = env.op(res.x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b_pre[i] - r[i];
        double beta = norm2(r);
        if (beta <= env.tol_abs) {
            res.status = SolveStatus::converged;
            return res;
        }
        v_basis.assign(1, r);
        scale(v_basis[0], 1.0 / beta);
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;

        std::size_t j = 0;
        bool happy = false;
        for (; j < m && res.iters < env.max_iter; ++j) {
            Vector w = env.op(v_basis[j]);
            for (std::size_t i = 0; i <= j; ++i) {  // modified Gram-Schmidt
                h(i, j) = dot(w, v_basis[i]);
                axpy(-h(i, j), v_basis[i], w);
            }
            h(j + 1, j) = norm2(w);
            if (h(j + 1, j) > 0.0) {
                Vector vn = w;
                scale(vn, 1.0 / h(j + 1, j));
                v_basis.push_back(std::move(vn));
            }
            for (std::size_t i = 0; i < j; ++i) {  // apply stored rotations
                const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
                h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
                h(i, j) = t;
            }
            const double denom = std::hypot(h(j, j), h(j + 1, j));
            if (denom == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else {
                cs[j] = h(j, j) / denom;
                sn[j] = h(j + 1, j) / denom;
            }
            h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
            h(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            ++res.iters;
            if (std::abs(g[j + 1]) <= env.tol_abs) {
                ++j;
                happy = true;
                break;
            }
            if (v_basis.size() == std::size_t(j + 1)) {  // exact breakdown: solution in span
                ++j;
                happy = true;
                break;
            }
        }
        // y = H^{-1} g on the j x j leading block; x += V y
        Vector y(j, 0.0);
        for (std::size_t i = j; i-- > 0;) {
            double s = g[i];
            for (std::size_t l = i + 1; l < j; ++l) s -= h(i, l) * y[l];
            y[i] = s / h(i, i);
        }
        for (std::size_t l = 0; l < j; ++l) axpy(y[l], v_basis[l], res.x);
        if (happy) {
            res.status = SolveStatus::converged;
            return res;
        }
    }
    return res;
}

}  // namespace detail

// -- front end ----------------------------------------------------------------

// Iterative solve with a caller-supplied preconditioner (pass std::nullopt
// for none).  `cfg.preconditioner` is not consulted here: the caller decides
// what `precond` holds, which lets a time-stepping loop factor once and reuse.
inline SolveReport solve_prepared(const LinearSystem& sys, const SolverConfig& cfg,
                                  const std::optional<Ilu0>& precond) {
    const std::size_t n = sys.n();
    if (sys.b.size() != n) throw std::invalid_argument("solve: rhs size mismatch");
    SolveReport rep;
    rep.method = cfg.method;
    const double bnorm = norm2(sys.b);

    if (bnorm == 0.0) {  // trivial system; x = 0 is exact
        rep.x.assign(n, 0.0);
        rep.status = SolveStatus::converged;
        rep.final_residual = 0.0;
        return rep;
    }

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.method == SolveMethod::direct) {
        LuFactors f = dense_lu_factor(sys.dense());
        rep.setup_seconds = detail::seconds_since(t0);
        const auto t1 = std::chrono::steady_clock::now();
        rep.x = f.solve(sys.b);
        rep.solve_seconds = detail::seconds_since(t1);
        rep.final_residual = detail::true_rel_residual(sys, rep.x, bnorm);
        rep.status = SolveStatus::converged;
        return rep;
    }

    const std::optional<Ilu0>& m = precond;
    Vector b_pre = m ? m->apply(sys.b) : sys.b;
    const double b_pre_norm = norm2(b_pre);

    detail::KrylovEnv env{sys, m, cfg.tol * b_pre_norm,
                          cfg.max_iter == 0 ? 10 * n : cfg.max_iter};

    const auto t1 = std::chrono::steady_clock::now();
    detail::KernelResult kr;
    switch (cfg.method) {
        case SolveMethod::cgs: kr = detail::run_cgs(env, b_pre); break;
        case SolveMethod::bicg: kr = detail::run_bicg(env, b_pre); break;
        case SolveMethod::bicgstab: kr = detail::run_bicgstab(env, b_pre); break;
        case SolveMethod::gmres: kr = detail::run_gmres(env, b_pre, cfg.restart); break;
        case SolveMethod::direct: break;  // handled above
    }
    rep.solve_seconds = detail::seconds_since(t1);
    rep.x = std::move(kr.x);
    rep.iterations = kr.iters;
    rep.message = std::move(kr.message);
    rep.final_residual = detail::true_rel_residual(sys, rep.x, bnorm);

    // `converged` is claimed only when the recomputed residual agrees.
    if (kr.status == SolveStatus::converged &&
        rep.final_residual <= cfg.tol * (1.0 + 1e-12)) {
        rep.status = SolveStatus::converged;
    } else if (kr.status == SolveStatus::breakdown) {
        rep.status = SolveStatus::breakdown;
    } else {
        rep.status = SolveStatus::max_iterations;
        if (rep.message.empty())
            rep.message = to_string(cfg.method) + ": no convergence within " +
                          std::to_string(env.max_iter) + " iterations";
    }
    return rep;
}

inline SolveReport solve(const LinearSystem& sys, const SolverConfig& cfg) {
    if (cfg.method != SolveMethod::direct &&
        cfg.preconditioner == PrecondKind::ilu0 && norm2(sys.b) != 0.0) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::optional<Ilu0> m =
            std::holds_alternative<Matrix>(sys.a)
                ? ilu0_factor(std::get<Matrix>(sys.a))
                : ilu0_factor(std::get<CsrMatrix>(sys.a));
        const double setup = detail::seconds_since(t0);
        SolveReport rep = solve_prepared(sys, cfg, m);
        rep.setup_seconds += setup;
        return rep;
    }
    return solve_prepared(sys, cfg, std::nullopt);
}

}  // namespace hwrd
