#pragma once

#include "ddm/numerics.hpp"

namespace ddm {

struct PhysicalContext {
    double mass = 0.5;
    double hbar = 1.0;
    double length_scale = 1.0;
    double alpha = 1.0;  // half-separation
    cplx zeta_plus = 0.0;
    cplx zeta_minus = 0.0;
};

struct Couplings {
    cplx z_plus = 0.0;
    cplx z_minus = 0.0;
    double a = 1.0;
};

struct ScatteringBranch {
    int branch = 1;  // 1 or 2
    double k = 1.0;
};

Couplings nondimensionalize(const PhysicalContext& ctx);

// Inverse map; mass, hbar and length scale are taken from `units`.
PhysicalContext dimensionalize(const Couplings& c, const PhysicalContext& units);

// Energy scale hbar^2 / (2 m l^2) that converts dimensionless energies.
double energy_unit(const PhysicalContext& ctx);

cplx psi_eval(const Couplings& c, const ScatteringBranch& s, double x);
cplx psi_conj_eval(const Couplings& c, const ScatteringBranch& s, double x);

// Scattering eigenfunction for a signed wave number q != 0 (branch 1 at q,
// branch 2 at -q).
cplx psi_signed(const Couplings& c, double q, double x);

// M = M_{+a}(z+) M_{-a}(z-) acting on plane-wave amplitudes (e^{ikx}, e^{-ikx}).
TwoByTwo transfer_matrix(const Couplings& c, cplx k);

// Single point interaction of strength z at x = pos.
TwoByTwo single_delta_matrix(cplx z, double pos, cplx k);

// M22 in closed form.
cplx m22(const Couplings& c, cplx k);

// k^2 M22(k): entire in k, same zeros as M22 away from k = 0.
cplx m22_scaled(const Couplings& c, cplx k);
cplx m22_scaled_derivative(const Couplings& c, cplx k);

TwoByTwo k_matrix(const Couplings& c, double k);

// Smeared overlap <psi^{z*}_{a,.}|psi^{z}_{b,.}> with normalized Gaussians of
// the given width centred at k0 and q0, divided by the coincident-centre
// normalization 1/(2 w sqrt(pi)).
TwoByTwo smeared_overlap_check(const Couplings& c, double k0, double q0, double width);

} // namespace ddm
