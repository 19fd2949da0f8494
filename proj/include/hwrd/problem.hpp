#pragma once

// Problem description for the transient reaction-diffusion solve:
//   eps(x) dv/dt = div(D(x) grad v) + f(v, w) + I_app,   homogeneous Neumann
//   dw/dt = g(v, w)            (gating variables, pointwise ODEs)
// on an axis-aligned box, with piecewise-constant eps / D allowed to jump
// across axis-aligned interfaces.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hwrd/field.hpp"
#include "hwrd/haar.hpp"
#include "hwrd/ionic.hpp"
#include "hwrd/linalg.hpp"
#include "hwrd/tensor.hpp"

namespace hwrd {

// Spatially uniform stimulus applied for the first `on_steps` time steps
// (-1: never switched off).  An optional box restricts it spatially.
struct StimulusProtocol {
    double amplitude = 0.0;
    long long on_steps = -1;
    std::optional<JumpRegion> region;  // region.value unused; box only

    // Current applied during the step that advances t_s -> t_{s+1}.
    double value(std::size_t completed_steps, const Point& p, int dim) const {
        if (amplitude == 0.0) return 0.0;
        if (on_steps >= 0 && static_cast<long long>(completed_steps) >= on_steps) return 0.0;
        if (region && !region->contains(p, dim)) return 0.0;
        return amplitude;
    }
};

struct ProblemSpec {
    int dim = 1;
    std::array<HaarBasis, 3> bases;          // per-axis resolution
    ParameterField epsilon;                  // coefficient of dv/dt
    std::array<ParameterField, 3> diffusion; // diagonal D entries d11,d22,d33
    IonicModel model = FhnModel{ParameterField::constant(1, 1.0)};
    StimulusProtocol stimulus;
    double dt = 1e-3;
    double t_end = 1.0;
    SolverConfig solver{SolveMethod::direct};

    // Initial data; when empty, model defaults are used (constant in space).
    std::function<double(const Point&)> v0;
    std::vector<std::function<double(const Point&)>> w0;

    std::size_t n_points() const {
        std::size_t n = 1;
        for (int a = 0; a < dim; ++a) n *= bases[a].size();
        return n;
    }
    std::size_t n_steps() const {
        return static_cast<std::size_t>(std::llround(t_end / dt));
    }
};

struct SimulationState {
    double t = 0.0;
    std::size_t step_index = 0;
    Tensor v;                        // at collocation points
    std::vector<Tensor> w;           // one tensor per gating variable
    std::array<Tensor, 3> d2cache;   // d^2 v / d x_a^2 at collocation points
};

struct StepCoefficients {
    Tensor alpha;                // wavelet coefficients of the PDE update
    std::vector<Tensor> beta;    // gating expansion coefficients per gate
    std::size_t solver_iterations = 0;
};

}  // namespace hwrd
