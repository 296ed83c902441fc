#include "lagiir/kernels.hpp"

namespace lagiir::kernels {

void iir_lanes_step_scalar(std::span<const double> b, std::span<const double> a, double* state, const double* x,
                           double* y, std::size_t lanes) {
    const std::size_t order = b.size() - 1;
    for (std::size_t l = 0; l < lanes; ++l) {
        const double xv = x[l];
        const double yv = b[0] * xv + (order > 0 ? state[l] : 0.0);
        for (std::size_t i = 0; i < order; ++i) {
            const double carry = i + 1 < order ? state[(i + 1) * lanes + l] : 0.0;
            state[i * lanes + l] = b[i + 1] * xv - a[i + 1] * yv + carry;
        }
        y[l] = yv;
    }
}

void gradient_products_scalar(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx,
                              double* xy, double* xz, double* yy, double* yz) {
    for (std::size_t i = 0; i < n; ++i) {
        xx[i] = ix[i] * ix[i];
        xy[i] = ix[i] * iy[i];
        xz[i] = ix[i] * iz[i];
        yy[i] = iy[i] * iy[i];
        yz[i] = iy[i] * iz[i];
    }
}

} // namespace lagiir::kernels
