#include "ddm/hermitianize.hpp"

#include <cmath>

namespace ddm {

void require_hermitianizable(const Couplings& c)
{
    if (std::abs(c.z_plus.imag() + c.z_minus.imag()) > 1e-12)
        throw unsupported_class_error("equivalent Hermitian operator requires Im z+ = -Im z-");
}

DistributionalKernel h_kernel(const Couplings& c)
{
    require_hermitianizable(c);
    using namespace prim;
    const double a = c.a;
    DistributionalKernel k;
    k.laplacian_coefficient = 1.0;
    if (c.z_plus.real() != 0.0) k.terms.push_back({c.z_plus.real(), {dirac(x_minus_y()), dirac(x(-a))}});
    if (c.z_minus.real() != 0.0) k.terms.push_back({c.z_minus.real(), {dirac(x_minus_y()), dirac(x(a))}});
    const double im = c.z_plus.imag();
    if (im == 0.0) return k;
    const double w = im * im / 8.0;
    // delta(x+a)[theta(y+a) - theta(y-3a)] + delta(x-a)[theta(y+3a) - theta(y-a)] + (x<->y)
    k.terms.push_back({w, {dirac(x(a)), step(y(a))}});
    k.terms.push_back({-w, {dirac(x(a)), step(y(-3.0 * a))}});
    k.terms.push_back({w, {dirac(x(-a)), step(y(3.0 * a))}});
    k.terms.push_back({-w, {dirac(x(-a)), step(y(-a))}});
    k.terms.push_back({w, {dirac(y(a)), step(x(a))}});
    k.terms.push_back({-w, {dirac(y(a)), step(x(-3.0 * a))}});
    k.terms.push_back({w, {dirac(y(-a)), step(x(3.0 * a))}});
    k.terms.push_back({-w, {dirac(y(-a)), step(x(-a))}});
    return k;
}

namespace {

QuadratureSpec tight()
{
    QuadratureSpec s;
    s.abs_tol = 1e-13;
    s.rel_tol = 1e-12;
    s.max_subdivisions = 20000;
    return s;
}

PairOptions hints_for(double a) { return {{-3.0 * a, -a, a, 3.0 * a}}; }

} // namespace

AppliedH apply_h(const Couplings& c, const WaveFunction& psi, double x)
{
    const DistributionalKernel k = h_kernel(c);
    const QuadratureSpec spec = tight();
    const PairOptions opt = hints_for(c.a);
    AppliedH out;
    out.regular = kernel_apply_regular(k, psi, x, spec, opt);
    for (const auto& [loc, w] : kernel_apply_deltas(k, psi, spec, opt)) {
        if (std::abs(loc - c.a) < 1e-12) out.delta_plus_a += w;
        else if (std::abs(loc + c.a) < 1e-12) out.delta_minus_a += w;
        else throw domain_error("apply_h: unexpected delta location");
    }
    return out;
}

double expectation_via_apply_h(const Couplings& c, const WaveFunction& psi)
{
    const double a = c.a;
    const QuadratureSpec spec = tight();
    const AppliedH at0 = apply_h(c, psi, 0.0);
    const cplx reg = integrate_1d(
        [&](double x) { return std::conj(psi(x)) * apply_h(c, psi, x).regular; }, -INFINITY, INFINITY, spec,
        {-3.0 * a, -a, a, 3.0 * a});
    const cplx total = reg + std::conj(psi(a)) * at0.delta_plus_a + std::conj(psi(-a)) * at0.delta_minus_a;
    return total.real();
}

EnergyBreakdown energy_quadrature(const Couplings& c, const GaussianPacket& packet)
{
    require_hermitianizable(c);
    const double a = c.a;
    const WaveFunction psi = gaussian_wave(packet.sigma, packet.k0, packet.x0);
    const QuadratureSpec spec = tight();
    const std::vector<double> bps = {-3.0 * a, -a, a, 3.0 * a, packet.x0};

    EnergyBreakdown e;
    e.kinetic = integrate_1d([&](double x) { return cplx(std::norm(psi.d1(x))); }, -INFINITY, INFINITY, spec, bps)
                    .real();
    e.local_potential = c.z_plus.real() * std::norm(psi(a)) + c.z_minus.real() * std::norm(psi(-a));
    const double im = c.z_plus.imag();
    if (im != 0.0) {
        const cplx right = integrate_1d(psi.value, -a, 3.0 * a, spec, {a});
        const cplx left = integrate_1d(psi.value, -3.0 * a, a, spec, {-a});
        e.nonlocal = im * im / 4.0 * (std::conj(psi(-a)) * right + std::conj(psi(a)) * left).real();
    }
    e.total = e.kinetic + e.local_potential + e.nonlocal;
    return e;
}

double u_fn(double a, double sigma, double k)
{
    if (!(sigma > 0.0)) throw domain_error("u_fn: sigma must be positive");
    const double s2 = sigma * sigma;
    const double pre = std::exp(-(a * a + k * k * s2 * s2) / (2.0 * s2));
    if (pre == 0.0) return 0.0;
    const double r = std::sqrt(2.0) * sigma;
    const cplx i(0.0, 1.0);
    const cplx bracket = erf_complex((i * k * s2 + 3.0 * a) / r) - erf_complex((i * k * s2 - a) / r);
    return pre * (std::exp(-i * k * a) * bracket).real();
}

double v_fn(double a, double sigma, double x0)
{
    const double s2 = sigma * sigma;
    return std::exp(-(x0 - a) * (x0 - a) / s2) - std::exp(-(x0 + a) * (x0 + a) / s2);
}

double w_fn(double a, double sigma, double x0)
{
    if (!(sigma > 0.0)) throw domain_error("w_fn: sigma must be positive");
    const double s2 = sigma * sigma;
    const double r = std::sqrt(2.0) * sigma;
    const double lead = std::exp(-(a + x0) * (a + x0) / (2.0 * s2));
    // e^{2 a x0/s^2} merged into the leading Gaussian to stay finite.
    const double lead2 = std::exp(-(a - x0) * (a - x0) / (2.0 * s2));
    return lead * (std::erf((a + x0) / r) + std::erf((3.0 * a - x0) / r)) +
           lead2 * (std::erf((a - x0) / r) + std::erf((3.0 * a + x0) / r));
}

namespace {

double local_term(const Couplings& c, double sigma, double x0)
{
    const double s2 = sigma * sigma;
    const double a = c.a;
    return (c.z_plus.real() * std::exp(-(a - x0) * (a - x0) / s2) +
            c.z_minus.real() * std::exp(-(a + x0) * (a + x0) / s2)) /
           (sigma * std::sqrt(pi));
}

} // namespace

EnergyBreakdown energy_gaussian_moving(const Couplings& c, double sigma, double k)
{
    require_hermitianizable(c);
    EnergyBreakdown e;
    e.kinetic = (2.0 * k * k + 1.0 / (sigma * sigma)) / 2.0;
    e.local_potential = local_term(c, sigma, 0.0);
    const double im = c.z_plus.imag();
    e.nonlocal = im * im / (2.0 * std::sqrt(2.0)) * u_fn(c.a, sigma, k);
    e.total = e.kinetic + e.local_potential + e.nonlocal;
    return e;
}

EnergyBreakdown energy_gaussian_shifted(const Couplings& c, double sigma, double x0)
{
    require_hermitianizable(c);
    EnergyBreakdown e;
    e.kinetic = 1.0 / (2.0 * sigma * sigma);
    e.local_potential = local_term(c, sigma, x0);
    const double im = c.z_plus.imag();
    e.nonlocal = im * im / (4.0 * std::sqrt(2.0)) * w_fn(c.a, sigma, x0);
    e.total = e.kinetic + e.local_potential + e.nonlocal;
    return e;
}

DistributionalKernel x_kernel(const Couplings& c)
{
    require_hermitianizable(c);
    using namespace prim;
    DistributionalKernel k;
    k.terms.push_back({1.0, {linear(x()), dirac(x_minus_y())}});
    const cplx coef(0.0, c.z_plus.imag() / 4.0);
    if (coef == cplx(0.0)) return k;
    k.terms.push_back({coef, {abs(x_minus_y()), step(x_plus_y(2.0 * c.a))}});
    k.terms.push_back({-coef, {abs(x_minus_y()), step(x_plus_y(-2.0 * c.a))}});
    return k;
}

DistributionalKernel p_kernel(const Couplings& c)
{
    require_hermitianizable(c);
    using namespace prim;
    DistributionalKernel k;
    k.momentum_coefficient = 1.0;
    const double coef = c.z_plus.imag() / 2.0;
    if (coef == 0.0) return k;
    k.terms.push_back({coef, {sign(x_minus_y()), dirac(x_plus_y(2.0 * c.a))}});
    k.terms.push_back({-coef, {sign(x_minus_y()), dirac(x_plus_y(-2.0 * c.a))}});
    return k;
}

cplx xp_commutator_defect(const Couplings& c, const WaveFunction& f, const WaveFunction& g,
                          const QuadratureSpec& spec)
{
    const DistributionalKernel xk = x_kernel(c);
    const DistributionalKernel pk = p_kernel(c);
    const double a = c.a;
    const PairOptions opt{{-3.0 * a, -2.0 * a, -a, 0.0, a, 2.0 * a, 3.0 * a}};
    const cplx xp = kernel_compose_pair(xk, pk, f, g, spec, opt);
    const cplx px = kernel_compose_pair(pk, xk, f, g, spec, opt);
    DistributionalKernel id;
    id.identity_coefficient = 1.0;
    return xp - px - cplx(0.0, 1.0) * kernel_pair(id, f, g, spec, opt);
}

} // namespace ddm
