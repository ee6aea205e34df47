#pragma once

#include "ddm/kernel.hpp"
#include "ddm/model.hpp"

namespace ddm {

struct GaussianPacket {
    double sigma = 1.0;
    double k0 = 0.0;
    double x0 = 0.0;
};

struct EnergyBreakdown {
    double kinetic = 0.0;
    double local_potential = 0.0;
    double nonlocal = 0.0;
    double total = 0.0;
};

// Throws unsupported_class_error unless Im z+ = -Im z-.
void require_hermitianizable(const Couplings& c);

DistributionalKernel h_kernel(const Couplings& c);

struct AppliedH {
    cplx regular = 0.0;        // -psi''(x) plus the window terms at x
    cplx delta_plus_a = 0.0;   // coefficient of delta(x - a)
    cplx delta_minus_a = 0.0;  // coefficient of delta(x + a)
};

AppliedH apply_h(const Couplings& c, const WaveFunction& psi, double x);

// <psi| h psi> assembled from apply_h by quadrature.
double expectation_via_apply_h(const Couplings& c, const WaveFunction& psi);

EnergyBreakdown energy_quadrature(const Couplings& c, const GaussianPacket& packet);

double u_fn(double a, double sigma, double k);
double v_fn(double a, double sigma, double x0);
double w_fn(double a, double sigma, double x0);

EnergyBreakdown energy_gaussian_moving(const Couplings& c, double sigma, double k);
EnergyBreakdown energy_gaussian_shifted(const Couplings& c, double sigma, double x0);

// X = x delta(x-y) + (i Im z+/4)|x-y|[theta(x+y+2a) - theta(x+y-2a)].
DistributionalKernel x_kernel(const Couplings& c);

// P = p + [p, eta1]/2 = p + (Im z+/2) sign(x-y)[delta(x+y+2a) - delta(x+y-2a)].
DistributionalKernel p_kernel(const Couplings& c);

// <f|[X,P]|g> - i <f|g>.
cplx xp_commutator_defect(const Couplings& c, const WaveFunction& f, const WaveFunction& g,
                          const QuadratureSpec& spec = {});

} // namespace ddm
