#pragma once

// Flat dense tensor over 1-3 axes with x-fastest ordering:
//   flat(k1,k2,k3) = k1 + n1*(k2 + n2*k3)
// Unused trailing axes have extent 1.  mode_apply contracts one axis with a
// dense matrix, which is how all tensor-product operators (Haar synthesis,
// analysis, integration) are applied without ever forming Kronecker products.

#include <array>
#include <cstddef>
#include <stdexcept>

#include "hwrd/matrix.hpp"

namespace hwrd {

struct Tensor {
    int dim = 1;
    std::array<std::size_t, 3> n = {1, 1, 1};
    Vector v;

    Tensor() = default;
    Tensor(int dim_, std::array<std::size_t, 3> extents, double fill = 0.0)
        : dim(dim_), n(extents) {
        for (int a = dim; a < 3; ++a) n[a] = 1;
        v.assign(n[0] * n[1] * n[2], fill);
    }

    std::size_t size() const { return v.size(); }

    std::size_t flat(std::size_t k1, std::size_t k2 = 0, std::size_t k3 = 0) const {
        return k1 + n[0] * (k2 + n[1] * k3);
    }

    double& at(std::size_t k1, std::size_t k2 = 0, std::size_t k3 = 0) {
        return v[flat(k1, k2, k3)];
    }
    double at(std::size_t k1, std::size_t k2 = 0, std::size_t k3 = 0) const {
        return v[flat(k1, k2, k3)];
    }
};

// Contract `axis` of t with A: out(..., i, ...) = sum_k A(i,k) t(..., k, ...).
inline Tensor mode_apply(const Tensor& t, int axis, const Matrix& A) {
    if (axis < 0 || axis >= 3) throw std::invalid_argument("mode_apply: bad axis");
    if (A.cols() != t.n[axis]) throw std::invalid_argument("mode_apply: extent mismatch");

    Tensor out = t;
    out.n[axis] = A.rows();
    out.v.assign(out.n[0] * out.n[1] * out.n[2], 0.0);

    std::size_t inner = 1;                       // stride of `axis` in the flat layout
    for (int a = 0; a < axis; ++a) inner *= t.n[a];
    std::size_t outer = 1;                       // number of slices beyond `axis`
    for (int a = axis + 1; a < 3; ++a) outer *= t.n[a];

    const std::size_t n_in = t.n[axis];
    const std::size_t n_out = A.rows();
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t in_base = o * inner * n_in;
        const std::size_t out_base = o * inner * n_out;
        for (std::size_t i = 0; i < n_out; ++i) {
            const double* arow = A.row(i);
            for (std::size_t k = 0; k < n_in; ++k) {
                const double a = arow[k];
                if (a == 0.0) continue;
                const double* src = t.v.data() + in_base + k * inner;
                double* dst = out.v.data() + out_base + i * inner;
                for (std::size_t s = 0; s < inner; ++s) dst[s] += a * src[s];
            }
        }
    }
    return out;
}

}  // namespace hwrd
