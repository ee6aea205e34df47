#pragma once

#include <functional>

#include "ddm/kernel.hpp"
#include "ddm/model.hpp"

namespace ddm {

struct AppendixAParams {
    double r_plus = 1.0;
    double r_minus = 1.0;
    double eps_plus = 0.0;
    double eps_minus = 0.0;
    double gamma = 1.0;
    double a = 1.0;

    double rho_a() const;
    double eps1() const { return eps_plus + eps_minus; }
    double eps2() const { return eps_plus * eps_minus; }
    Couplings couplings() const;
};

// delta(x-y) + (i Im z+/2) sign(x-y) [theta(x+y+2a) - theta(x+y-2a)].
DistributionalKernel eta1_bounded(const Couplings& c);

DistributionalKernel eta1_appendixA(const AppendixAParams& p);

struct InmValue {
    cplx delta_coefficient = 0.0;
    cplx regular = 0.0;
};

// (1/2pi) int k^{2-n} e^{ik alpha} / (1+k^2)^m dk in closed form.
InmValue inm(int n, int m, double alpha);

// The same by quadrature (delta part removed for (n, m) = (0, 1)).
cplx inm_quadrature(int n, int m, double alpha);

struct URoute {
    TwoByTwo u;
    double residual = 0.0;  // || U^dag(z*) K(z) U(z) - I ||
};

URoute u_inverse_sqrt_route(const Couplings& c, double k);

enum class SpectralOrder { first, full };

// Regulated spectral integral of phi_k(x) phi_k(y)^* minus its delta part,
// for z+ = -z- = z.
cplx spectral_metric_estimate(const Couplings& c, double x, double y, const QuadratureSpec& spec = {},
                              SpectralOrder order = SpectralOrder::first);

// Direct spectral integral for the weighted-family weight kappa^2/(1+kappa^2)
// (zeroth order in eps of W), minus the delta part.
cplx appendixA_spectral_estimate(const AppendixAParams& p, double x, double y, double eps0 = 0.01);

// Weak-form residual of (-d_x^2 + d_y^2 + v*(x) - v(y)) kern with
// v = z+ delta(x-a) + z- delta(x+a).
cplx metric_de_residual(const DistributionalKernel& kern, const Couplings& c, const WaveFunction& bra,
                        const WaveFunction& ket, const QuadratureSpec& spec = {});

// ||eta H - H^dag eta||_F / ||H||_F with eta = I + sampled eta1.
double pseudo_hermiticity_residual(const Couplings& c, double half_length = 8.0, int nodes = 400,
                                   double width = 0.05,
                                   const std::function<DistributionalKernel(const Couplings&)>& metric = eta1_bounded);

// Split eta1 pieces, pointwise.
cplx eta1_plus(cplx z_plus, double a, double x, double y);           // original form
cplx eta1_plus_rewritten(cplx z_plus, double a, double x, double y);  // sign-identity form
cplx eta1_minus(cplx z_minus, double a, double x, double y);
cplx eta1_minus_rewritten(cplx z_minus, double a, double x, double y);
// eta'_+ + eta'_- + (x<->y)^*.
cplx eta1_prime(const Couplings& c, double x, double y);

// sign(u+v)[sign u + sign v] and 1 + sign u sign v.
double sign_identity_lhs(double u, double v);
double sign_identity_rhs(double u, double v);

} // namespace ddm
