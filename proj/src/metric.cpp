#include "ddm/metric.hpp"

#include <cmath>

#include "ddm/grid.hpp"

namespace ddm {

namespace {

constexpr double class_tol = 1e-12;

void require_bounded_class(const Couplings& c)
{
    if (std::abs(c.z_plus.imag() + c.z_minus.imag()) > class_tol)
        throw unsupported_class_error(
            "no first-order bounded metric is available unless Im z+ = -Im z-");
}

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

} // namespace

double AppendixAParams::rho_a() const { return gamma / std::sqrt(r_plus * r_minus); }

Couplings AppendixAParams::couplings() const
{
    return {cplx(r_plus, r_plus * eps_plus), cplx(r_minus, r_minus * eps_minus), a};
}

DistributionalKernel eta1_bounded(const Couplings& c)
{
    require_bounded_class(c);
    using namespace prim;
    DistributionalKernel k;
    k.identity_coefficient = 1.0;
    const cplx coef(0.0, c.z_plus.imag() / 2.0);
    if (coef == cplx(0.0)) return k;
    k.terms.push_back({coef, {sign(x_minus_y()), step(x_plus_y(2.0 * c.a))}});
    k.terms.push_back({-coef, {sign(x_minus_y()), step(x_plus_y(-2.0 * c.a))}});
    return k;
}

DistributionalKernel eta1_appendixA(const AppendixAParams& p)
{
    if (!(p.r_plus > 0.0) || !(p.r_minus > 0.0) || !(p.gamma > 0.0) || !(p.a > 0.0))
        throw domain_error("eta1_appendixA: r+, r-, gamma and a must be positive");
    using namespace prim;
    const double a = p.a;
    const double rho = p.rho_a();
    const double rate = 1.0 / rho;
    const double rp = p.r_plus;
    const double rm = p.r_minus;
    const double g2 = p.gamma * p.gamma;
    const cplx i(0.0, 1.0);
    const cplx c = 1.0 + i * p.eps_plus - i * p.eps_minus;
    const cplx ep = 1.0 + i * p.eps_plus;
    const cplx em = 1.0 + i * p.eps_minus;

    const KernelPrimitive e0 = exp_abs(x_minus_y(), rate);
    const KernelPrimitive e1 = exp_abs(x_plus_y(-2.0 * a), rate);
    const KernelPrimitive e2 = exp_abs(x_plus_y(2.0 * a), rate);
    const KernelPrimitive e3 = exp_abs(x_minus_y(4.0 * a), rate);
    const KernelPrimitive xm = step(x(-a));        // theta(x-)
    const KernelPrimitive ym = step(y(-a));        // theta(y-)
    const KernelPrimitive nxp = step(neg(x(a)));   // theta(-x+)
    const KernelPrimitive nyp = step(neg(y(a)));   // theta(-y+)

    std::vector<KernelTerm> half = {
        {-1.0 / (4.0 * rho), {e0}},
        {rho / 8.0 * rp * rp, {e0, xm, ym}},
        {rho / 8.0 * rm * rm, {e0, nxp, nyp}},
        {-g2 / (8.0 * rho) * c, {e0, nxp, ym}},
        {-rp / 4.0 * ep, {e0, ym, sign(x_minus_y())}},
        {rm / 4.0 * em, {e0, nyp, sign(x_minus_y())}},
        {-rho / 8.0 * rp * rp, {e1, xm, ym}},
        {g2 / (8.0 * rho) * c, {e1, nxp, ym}},
        {rp / 4.0 * ep, {e1, ym, sign(x_plus_y(-2.0 * a))}},
        {-rho / 8.0 * rm * rm, {e2, nxp, nyp}},
        {g2 / (8.0 * rho) * c, {e2, nxp, ym}},
        {-rm / 4.0 * em, {e2, nyp, sign(x_plus_y(2.0 * a))}},
        {-g2 / (8.0 * rho) * c, {e3, nxp, ym}},
    };

    DistributionalKernel k;
    k.identity_coefficient = 0.5;
    k.terms = half;
    DistributionalKernel mirror = adjoint(k);
    return k + mirror;
}

InmValue inm(int n, int m, double alpha)
{
    if (n < 0 || n > 2 || m < 1 || m > 3) throw domain_error("inm: need n in 0..2 and m in 1..3");
    const double e = std::exp(-std::abs(alpha));
    const double aa = std::abs(alpha);
    const cplx i(0.0, 1.0);
    InmValue v;
    switch (m) {
    case 1:
        if (n == 0) {
            v.delta_coefficient = 1.0;
            v.regular = -e / 2.0;
        } else if (n == 1) {
            v.regular = i * e / 2.0 * sign(alpha);
        } else {
            v.regular = e / 2.0;
        }
        break;
    case 2: {
        const cplx vals[] = {1.0 - aa, i * alpha, 1.0 + aa};
        v.regular = e / 4.0 * vals[n];
        break;
    }
    default: {
        const cplx vals[] = {1.0 + aa - alpha * alpha, i * alpha * (1.0 + aa), 3.0 * (1.0 + aa) + alpha * alpha};
        v.regular = e / 16.0 * vals[n];
        break;
    }
    }
    return v;
}

cplx inm_quadrature(int n, int m, double alpha)
{
    if (n < 0 || n > 2 || m < 1 || m > 3) throw domain_error("inm: need n in 0..2 and m in 1..3");
    const auto g = [n, m](double k) -> cplx {
        const double d = std::pow(1.0 + k * k, m);
        if (n == 0 && m == 1) return -1.0 / (1.0 + k * k);  // k^2/(1+k^2) - 1
        return std::pow(k, 2 - n) / d;
    };
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-12;
    return fourier_integral(g, alpha, spec);
}

URoute u_inverse_sqrt_route(const Couplings& c, double k)
{
    const TwoByTwo kz = k_matrix(c, k);
    const Couplings cc{std::conj(c.z_plus), std::conj(c.z_minus), c.a};
    URoute out;
    out.u = matrix_inv_sqrt(kz);
    const TwoByTwo u_conj = matrix_inv_sqrt(k_matrix(cc, k));
    out.residual = (u_conj.adjoint() * kz * out.u - TwoByTwo::Identity()).norm();
    if (!(out.residual <= 1e-10))
        throw no_convergence_error("u_inverse_sqrt_route: U^dag K U differs from the identity");
    return out;
}

namespace {

// First-order (linear in z) part of phi_{1,k}(x) for z+ = -z- = z.
cplx phi_linear(cplx z, double a, double k, double x)
{
    const cplx i(0.0, 1.0);
    const cplx zc = std::conj(z);
    const cplx u = zc / (2.0 * i * k);
    const cplx p1 = std::exp(i * k * x);
    const cplx p2 = std::exp(-i * k * x);
    cplx psi1 = 0.0;
    if (x <= -a) psi1 -= i * (-zc) / (2.0 * k) * (std::exp(-i * k * (x + 2.0 * a)) - p1) * theta(-x - a);
    if (x >= a) psi1 -= i * zc / (2.0 * k) * (p1 - std::exp(-i * k * (x - 2.0 * a))) * theta(x - a);
    return (-u * p1 + u * std::cos(2.0 * a * k) * p2 + psi1) * inv_sqrt_2pi;
}

cplx phi_full(cplx z, double a, double k, double x)
{
    const cplx i(0.0, 1.0);
    const cplx zc = std::conj(z);
    const Couplings cc{zc, -zc, a};
    const cplx u = zc / (2.0 * i * k);
    return (1.0 - u) * psi_signed(cc, k, x) + u * std::cos(2.0 * a * k) * psi_signed(cc, -k, x);
}

} // namespace

cplx spectral_metric_estimate(const Couplings& c, double x, double y, const QuadratureSpec& spec,
                              SpectralOrder order)
{
    if (std::abs(c.z_plus + c.z_minus) > class_tol)
        throw unsupported_class_error("spectral_metric_estimate: requires z+ = -z-");
    const cplx z = c.z_plus;
    const double a = c.a;
    const double eps0 = spec.oscillatory_regulator > 0.0 ? spec.oscillatory_regulator : 0.01;
    if (z == cplx(0.0)) return 0.0;

    const auto integrand = [&](double k) -> cplx {
        if (k == 0.0) return 0.0;
        const cplx f0x = std::exp(cplx(0.0, k * x)) * inv_sqrt_2pi;
        const cplx f0y = std::exp(cplx(0.0, k * y)) * inv_sqrt_2pi;
        if (order == SpectralOrder::first)
            return phi_linear(z, a, k, x) * std::conj(f0y) + f0x * std::conj(phi_linear(z, a, k, y));
        return phi_full(z, a, k, x) * std::conj(phi_full(z, a, k, y)) - f0x * std::conj(f0y);
    };
    QuadratureSpec q = spec;
    q.abs_tol = std::min(spec.abs_tol, 1e-9);
    q.rel_tol = std::min(spec.rel_tol, 1e-9);
    q.max_subdivisions = std::max(spec.max_subdivisions, 20000);
    return richardson_regulated(
        [&](double eps) {
            QuadratureSpec r = q;
            r.oscillatory_regulator = eps;
            const double L = std::sqrt(40.0 / eps);
            return integrate_1d(integrand, -L, L, r, {0.0});
        },
        eps0);
}

cplx appendixA_spectral_estimate(const AppendixAParams& p, double x, double y, double eps0)
{
    const Couplings c = p.couplings();
    const Couplings cc{std::conj(c.z_plus), std::conj(c.z_minus), c.a};
    const double rho = p.rho_a();
    const auto integrand = [&](double k) -> cplx {
        if (k == 0.0) return 0.0;
        const double kap = rho * k;
        const double w = kap * kap / (1.0 + kap * kap);
        return psi_signed(cc, k, x) * std::conj(psi_signed(cc, k, y)) * w -
               std::exp(cplx(0.0, k * (x - y))) / (2.0 * pi);
    };
    QuadratureSpec q;
    q.abs_tol = 1e-9;
    q.rel_tol = 1e-9;
    q.max_subdivisions = 20000;
    return richardson_regulated(
        [&](double eps) {
            QuadratureSpec r = q;
            r.oscillatory_regulator = eps;
            const double L = std::sqrt(40.0 / eps);
            return integrate_1d(integrand, -L, L, r, {0.0});
        },
        eps0);
}

cplx metric_de_residual(const DistributionalKernel& kern, const Couplings& c, const WaveFunction& bra,
                        const WaveFunction& ket, const QuadratureSpec& spec)
{
    if (kern.laplacian_coefficient != cplx(0.0) || kern.momentum_coefficient != cplx(0.0))
        throw domain_error("metric_de_residual: kernel must not carry derivative parts");
    if (!bra.d2 || !ket.d2) throw domain_error("metric_de_residual: test functions need second derivatives");
    const double a = c.a;
    const PairOptions opt{{-3.0 * a, -a, a, 3.0 * a}};
    const WaveFunction bra2(bra.d2);
    const WaveFunction ket2(ket.d2);
    cplx r = -kernel_pair(kern, bra2, ket, spec, opt) + kernel_pair(kern, bra, ket2, spec, opt);

    const DistributionalKernel kad = adjoint(kern);
    if (!kernel_apply_deltas(kern, ket, spec, opt).empty() || !kernel_apply_deltas(kad, bra, spec, opt).empty())
        throw domain_error("metric_de_residual: kernel with Dirac factors in one variable");
    const auto kg = [&](double x) { return kernel_apply_regular(kern, ket, x, spec, opt); };
    const auto kf = [&](double x) { return kernel_apply_regular(kad, bra, x, spec, opt); };
    r += std::conj(c.z_plus) * std::conj(bra(a)) * kg(a);
    r += std::conj(c.z_minus) * std::conj(bra(-a)) * kg(-a);
    r -= c.z_plus * ket(a) * std::conj(kf(a));
    r -= c.z_minus * ket(-a) * std::conj(kf(-a));
    return r;
}

double pseudo_hermiticity_residual(const Couplings& c, double half_length, int nodes, double width,
                                   const std::function<DistributionalKernel(const Couplings&)>& metric)
{
    const GridModel g = grid_model(c.a, half_length, nodes, width);
    const Eigen::MatrixXcd h = grid_hamiltonian(g, c);
    const Eigen::MatrixXcd eta = sample_kernel(metric(c), g);
    return (eta * h - h.adjoint() * eta).norm() / h.norm();
}

cplx eta1_plus(cplx z_plus, double a, double x, double y)
{
    return z_plus / 4.0 * (sign(x + y - 2.0 * a) - sign(x - y)) * theta(y - a);
}

cplx eta1_plus_rewritten(cplx z_plus, double a, double x, double y)
{
    const double u = x + y - 2.0 * a;
    return z_plus / 8.0 * (sign(u) + 1.0) - z_plus / 4.0 * sign(x - y) * theta(u);
}

cplx eta1_minus(cplx z_minus, double a, double x, double y)
{
    return -z_minus / 4.0 * (sign(x + y + 2.0 * a) - sign(x - y)) * theta(-y - a);
}

cplx eta1_minus_rewritten(cplx z_minus, double a, double x, double y)
{
    const double u = x + y + 2.0 * a;
    return z_minus / 8.0 * (2.0 * sign(x - y) - sign(u) + 1.0) - z_minus / 4.0 * sign(x - y) * theta(u);
}

cplx eta1_prime(const Couplings& c, double x, double y)
{
    const double a = c.a;
    const auto piece = [a](cplx z, double s, double u, double v) {
        // s = +1 uses x- + y-, s = -1 uses x+ + y+.
        return z / 8.0 * (1.0 - 2.0 * sign(u - v) * theta(u + v - s * 2.0 * a));
    };
    const cplx direct = piece(c.z_plus, 1.0, x, y) + piece(c.z_minus, -1.0, x, y);
    const cplx swapped = piece(c.z_plus, 1.0, y, x) + piece(c.z_minus, -1.0, y, x);
    return direct + std::conj(swapped);
}

double sign_identity_lhs(double u, double v) { return sign(u + v) * (sign(u) + sign(v)); }
double sign_identity_rhs(double u, double v) { return 1.0 + sign(u) * sign(v); }

} // namespace ddm
