#pragma once

// Probe time series, field snapshots, and series comparison utilities
// shared by the wavelet solver and the finite-difference reference.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwrd/field.hpp"
#include "hwrd/tensor.hpp"

namespace hwrd {

struct ProbeSeries {
    Point requested{0.0, 0.0, 0.0};  // probe location as asked for
    Point snapped{0.0, 0.0, 0.0};    // nearest grid/collocation point used
    std::vector<double> t;
    std::vector<double> v;
    std::vector<std::vector<double>> w;  // [gate][sample]
};

struct Snapshot {
    double t = 0.0;
    Tensor v;
    std::vector<Tensor> w;
    std::array<std::vector<double>, 3> coords;  // per-axis point coordinates
    int dim = 1;
};

struct RunResult {
    std::vector<ProbeSeries> probes;
    std::vector<Snapshot> snapshots;
    std::size_t steps = 0;
    double assemble_seconds = 0.0;
    double factor_seconds = 0.0;
    double step_seconds = 0.0;
    double solve_seconds = 0.0;      // accumulated linear-solve time
    double mean_iterations = 0.0;    // Krylov methods only; 0 for direct
    std::size_t max_iterations = 0;
};

// Linear interpolation of a sampled series at time tq (clamped to the ends).
inline double interp_series(const std::vector<double>& t, const std::vector<double>& y,
                            double tq) {
    if (t.empty()) throw std::invalid_argument("interp_series: empty series");
    if (tq <= t.front()) return y.front();
    if (tq >= t.back()) return y.back();
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double t0 = t[i - 1], t1 = t[i];
    const double s = (tq - t0) / (t1 - t0);
    return (1.0 - s) * y[i - 1] + s * y[i];
}

struct ProbeComparison {
    Point location{0.0, 0.0, 0.0};   // series A's snapped location
    double max_abs_diff = 0.0;
    double mean_abs_diff = 0.0;
    double t_at_max = 0.0;
};

// Compare matching probes of two runs on series A's time grid; when the two
// time grids differ, series B is linearly interpolated in t.
inline std::vector<ProbeComparison> compare(const std::vector<ProbeSeries>& a,
                                            const std::vector<ProbeSeries>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("compare: probe count mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    std::vector<ProbeComparison> out;
    out.reserve(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        ProbeComparison c;
        c.location = a[p].snapped;
        double sum = 0.0;
        for (std::size_t s = 0; s < a[p].t.size(); ++s) {
            const double d = std::abs(a[p].v[s] - interp_series(b[p].t, b[p].v, a[p].t[s]));
            sum += d;
            if (d > c.max_abs_diff) {
                c.max_abs_diff = d;
                c.t_at_max = a[p].t[s];
            }
        }
        c.mean_abs_diff = a[p].t.empty() ? 0.0 : sum / a[p].t.size();
        out.push_back(c);
    }
    return out;
}

}  // namespace hwrd
