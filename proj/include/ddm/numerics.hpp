#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ddm/errors.hpp"

namespace ddm {

using cplx = std::complex<double>;
using TwoByTwo = Eigen::Matrix2cd;

inline constexpr double pi = 3.14159265358979323846;

// sign(0) = 0 and theta(0) = 1/2 throughout.
inline double sign(double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); }
inline double theta(double u) { return 0.5 * (sign(u) + 1.0); }

struct ComplexRect {
    double re_min, re_max, im_min, im_max;
};

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    // Gaussian damping e^{-eps k^2} applied to the integrand when > 0.
    double oscillatory_regulator = 0.0;
};

cplx erf_complex(cplx w);

using RealToComplex = std::function<cplx(double)>;
using ComplexFn = std::function<cplx(cplx)>;

// Adaptive Gauss-Kronrod on [lo, hi]; either end may be infinite.
// Breakpoints inside (lo, hi) split the range at known kinks or jumps.
cplx integrate_1d(const RealToComplex& f, double lo, double hi, const QuadratureSpec& spec = {},
                  std::vector<double> breakpoints = {});

// Same, also reporting the accumulated error bound.
cplx integrate_1d(const RealToComplex& f, double lo, double hi, const QuadratureSpec& spec,
                  std::vector<double> breakpoints, double& error_bound);

// Three-rung regulator ladder {4e, 2e, e} for oscillatory integrals over the
// real line, combined by Richardson extrapolation in e. `one_rung(e)` returns
// the regulated integral for damping rate e.
cplx richardson_regulated(const std::function<cplx(double)>& one_rung, double eps0);

// (1/2pi) * integral over the real line of g(k) e^{i k alpha}, for smooth g with
// at least 1/|k| decay. Oscillatory tails are summed period by period with the
// Wynn epsilon algorithm.
cplx fourier_integral(const RealToComplex& g, double alpha, const QuadratureSpec& spec = {});

// Principal inverse square root of a 2x2 matrix.
TwoByTwo matrix_inv_sqrt(const TwoByTwo& k);

// Winding number of f around the rectangle. `df` may be empty, in which case
// the derivative is estimated by Richardson-extrapolated central differences.
int count_zeros(const ComplexFn& f, const ComplexRect& rect, const QuadratureSpec& spec = {},
                const ComplexFn& df = {});

// (1/2 pi i) contour integral of g(k) f'(k)/f(k); used for root moments.
cplx contour_moment(const ComplexFn& f, const ComplexFn& df, const ComplexRect& rect,
                    const ComplexFn& g, const QuadratureSpec& spec = {});

cplx refine_root(const ComplexFn& f, cplx seed, const ComplexFn& df = {});

cplx numeric_derivative(const ComplexFn& f, cplx k);

} // namespace ddm
