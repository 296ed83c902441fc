#include <immintrin.h>

#include "lagiir/kernels.hpp"

namespace lagiir::kernels {

void iir_lanes_step_avx2(std::span<const double> b, std::span<const double> a, double* state, const double* x,
                         double* y, std::size_t lanes) {
    const std::size_t order = b.size() - 1;
    std::size_t l = 0;
    for (; l + 4 <= lanes; l += 4) {
        const __m256d xv = _mm256_loadu_pd(x + l);
        const __m256d s0 = order > 0 ? _mm256_loadu_pd(state + l) : _mm256_setzero_pd();
        const __m256d yv = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(b[0]), xv), s0);
        for (std::size_t i = 0; i < order; ++i) {
            const __m256d carry =
                i + 1 < order ? _mm256_loadu_pd(state + (i + 1) * lanes + l) : _mm256_setzero_pd();
            __m256d t = _mm256_mul_pd(_mm256_set1_pd(b[i + 1]), xv);
            t = _mm256_sub_pd(t, _mm256_mul_pd(_mm256_set1_pd(a[i + 1]), yv));
            t = _mm256_add_pd(t, carry);
            _mm256_storeu_pd(state + i * lanes + l, t);
        }
        _mm256_storeu_pd(y + l, yv);
    }
    for (; l < lanes; ++l) {
        const double xv = x[l];
        const double yv = b[0] * xv + (order > 0 ? state[l] : 0.0);
        for (std::size_t i = 0; i < order; ++i) {
            const double carry = i + 1 < order ? state[(i + 1) * lanes + l] : 0.0;
            state[i * lanes + l] = b[i + 1] * xv - a[i + 1] * yv + carry;
        }
        y[l] = yv;
    }
}

void gradient_products_avx2(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx,
                            double* xy, double* xz, double* yy, double* yz) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gx = _mm256_loadu_pd(ix + i);
        const __m256d gy = _mm256_loadu_pd(iy + i);
        const __m256d gz = _mm256_loadu_pd(iz + i);
        _mm256_storeu_pd(xx + i, _mm256_mul_pd(gx, gx));
        _mm256_storeu_pd(xy + i, _mm256_mul_pd(gx, gy));
        _mm256_storeu_pd(xz + i, _mm256_mul_pd(gx, gz));
        _mm256_storeu_pd(yy + i, _mm256_mul_pd(gy, gy));
        _mm256_storeu_pd(yz + i, _mm256_mul_pd(gy, gz));
    }
    gradient_products_scalar(ix + i, iy + i, iz + i, n - i, xx + i, xy + i, xz + i, yy + i, yz + i);
}

} // namespace lagiir::kernels
