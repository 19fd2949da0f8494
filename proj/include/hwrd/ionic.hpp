#pragma once

// Cell models coupling to the transmembrane potential v:
//   FitzHugh-Nagumo      1 gate, cubic recovery kinetics
//   Mitchell-Schaeffer   1 gate, two-current model with a gate switch
//   Hodgkin-Huxley       3 gates (m, h, n), squid-axon kinetics in the
//                        shifted convention (v = 0 at rest, depolarization
//                        positive, E_Na = 115, E_K = -12, E_L = 10.613)
//
// reaction_rate() returns the ionic contribution to dv/dt, i.e. the solver
// integrates  eps dv/dt = div(D grad v) + reaction + I_app.  For HH that is
// the negated total membrane current -I_ion.  The plain fhn_reaction /
// ms_reaction / hh_current helpers below expose the raw textbook
// expressions; model parameters that can carry jump discontinuities are
// stored as ParameterFields.

#include <array>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "hwrd/field.hpp"

namespace hwrd {

// -- raw model expressions --------------------------------------------------

inline double fhn_reaction(double v, double w, double k) {
    return k * v * (v - 0.1) * (1.0 - v) - k * w;
}

inline double fhn_gating(double v, double w) { return v - 2.0 * w; }

inline double ms_reaction(double v, double w, double tau_in, double tau_out) {
    return -(w / tau_in) * v * v * (v - 1.0) - v / tau_out;
}

inline double ms_gating(double v, double w, double tau_open, double tau_close,
                        double u_gate) {
    return (v <= u_gate) ? (1.0 - w) / tau_open : -w / tau_close;
}

// Total membrane current of the Hodgkin-Huxley model (outward positive).
inline double hh_current(double v, double m, double h, double n, double g_na,
                         double g_k, double g_l, double e_na, double e_k,
                         double e_l) {
    return g_na * m * m * m * h * (v - e_na) + g_k * n * n * n * n * (v - e_k) +
           g_l * (v - e_l);
}

// x / (exp(x) - 1) with the removable singularity at x = 0 filled in.
inline double expm1_ratio(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    return x / std::expm1(x);
}

inline double hh_alpha_m(double v) { return expm1_ratio((25.0 - v) / 10.0); }
inline double hh_beta_m(double v) { return 4.0 * std::exp(-v / 18.0); }
inline double hh_alpha_h(double v) { return 0.07 * std::exp(-v / 20.0); }
inline double hh_beta_h(double v) { return 1.0 / (std::exp((30.0 - v) / 10.0) + 1.0); }
inline double hh_alpha_n(double v) { return 0.1 * expm1_ratio((10.0 - v) / 10.0); }
inline double hh_beta_n(double v) { return 0.125 * std::exp(-v / 80.0); }

// dw/dt = alpha_w(v) (1 - w) - beta_w(v) w  for w in {m, h, n}.
inline std::array<double, 3> hh_gating_rhs(double v, const std::array<double, 3>& g) {
    return {hh_alpha_m(v) * (1.0 - g[0]) - hh_beta_m(v) * g[0],
            hh_alpha_h(v) * (1.0 - g[1]) - hh_beta_h(v) * g[1],
            hh_alpha_n(v) * (1.0 - g[2]) - hh_beta_n(v) * g[2]};
}

inline std::array<double, 3> hh_gate_steady_state(double v) {
    const double am = hh_alpha_m(v), bm = hh_beta_m(v);
    const double ah = hh_alpha_h(v), bh = hh_beta_h(v);
    const double an = hh_alpha_n(v), bn = hh_beta_n(v);
    return {am / (am + bm), ah / (ah + bh), an / (an + bn)};
}

// -- model value objects ------------------------------------------------------

struct FhnModel {
    ParameterField k;  // excitability; may carry jump regions

    static constexpr int n_gates = 1;

    double reaction(double v, const double* w, const Point& p) const {
        return fhn_reaction(v, w[0], k.eval(p));
    }
    void gating(double v, const double* w, const Point&, double* out) const {
        out[0] = fhn_gating(v, w[0]);
    }
    double default_v0() const { return 0.2; }
    void default_w0(double /*v0*/, double* out) const { out[0] = 0.2; }
};

struct MsModel {
    ParameterField tau_in, tau_out, tau_open, tau_close;
    double u_gate = 0.13;

    static constexpr int n_gates = 1;

    static MsModel with_defaults(int dim) {
        MsModel m;
        m.tau_in = ParameterField::constant(dim, 0.3);
        m.tau_out = ParameterField::constant(dim, 6.0);
        m.tau_open = ParameterField::constant(dim, 120.0);
        m.tau_close = ParameterField::constant(dim, 150.0);
        return m;
    }

    double reaction(double v, const double* w, const Point& p) const {
        return ms_reaction(v, w[0], tau_in.eval(p), tau_out.eval(p));
    }
    void gating(double v, const double* w, const Point& p, double* out) const {
        out[0] = ms_gating(v, w[0], tau_open.eval(p), tau_close.eval(p), u_gate);
    }
    double default_v0() const { return 0.0; }
    void default_w0(double /*v0*/, double* out) const { out[0] = 1.0; }
};

struct HhModel {
    ParameterField g_na, g_k, g_l;
    double e_na = 115.0, e_k = -12.0, e_l = 10.613;

    static constexpr int n_gates = 3;

    static HhModel with_defaults(int dim) {
        HhModel m;
        m.g_na = ParameterField::constant(dim, 120.0);
        m.g_k = ParameterField::constant(dim, 36.0);
        m.g_l = ParameterField::constant(dim, 0.3);
        return m;
    }

    double reaction(double v, const double* w, const Point& p) const {
        return -hh_current(v, w[0], w[1], w[2], g_na.eval(p), g_k.eval(p),
                           g_l.eval(p), e_na, e_k, e_l);
    }
    void gating(double v, const double* w, const Point&, double* out) const {
        const std::array<double, 3> rhs = hh_gating_rhs(v, {w[0], w[1], w[2]});
        out[0] = rhs[0];
        out[1] = rhs[1];
        out[2] = rhs[2];
    }
    double default_v0() const { return 0.0; }
    void default_w0(double v0, double* out) const {
        const std::array<double, 3> ss = hh_gate_steady_state(v0);
        out[0] = ss[0];
        out[1] = ss[1];
        out[2] = ss[2];
    }
};

using IonicModel = std::variant<FhnModel, MsModel, HhModel>;

inline int model_n_gates(const IonicModel& m) {
    return std::visit([](const auto& mm) { return int(mm.n_gates); }, m);
}

inline double model_reaction(const IonicModel& m, double v, const double* w,
                             const Point& p) {
    return std::visit([&](const auto& mm) { return mm.reaction(v, w, p); }, m);
}

inline void model_gating(const IonicModel& m, double v, const double* w,
                         const Point& p, double* out) {
    std::visit([&](const auto& mm) { mm.gating(v, w, p, out); }, m);
}

inline double model_default_v0(const IonicModel& m) {
    return std::visit([](const auto& mm) { return mm.default_v0(); }, m);
}

inline void model_default_w0(const IonicModel& m, double v0, double* out) {
    std::visit([&](const auto& mm) { mm.default_w0(v0, out); }, m);
}

}  // namespace hwrd
