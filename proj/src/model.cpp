#include "ddm/model.hpp"

#include <cmath>

namespace ddm {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * pi);

void check_positive_k(double k)
{
    if (!(k > 0.0)) throw domain_error("wave number must be positive");
}

} // namespace

Couplings nondimensionalize(const PhysicalContext& ctx)
{
    if (!(ctx.mass > 0.0) || !(ctx.length_scale > 0.0) || !(ctx.alpha > 0.0) || !(ctx.hbar > 0.0))
        throw domain_error("nondimensionalize: m, hbar, l and alpha must be positive");
    const double f = 2.0 * ctx.mass * ctx.length_scale / (ctx.hbar * ctx.hbar);
    return {f * ctx.zeta_plus, f * ctx.zeta_minus, ctx.alpha / ctx.length_scale};
}

PhysicalContext dimensionalize(const Couplings& c, const PhysicalContext& units)
{
    PhysicalContext out = units;
    const double f = units.hbar * units.hbar / (2.0 * units.mass * units.length_scale);
    out.zeta_plus = f * c.z_plus;
    out.zeta_minus = f * c.z_minus;
    out.alpha = c.a * units.length_scale;
    return out;
}

double energy_unit(const PhysicalContext& ctx)
{
    return ctx.hbar * ctx.hbar / (2.0 * ctx.mass * ctx.length_scale * ctx.length_scale);
}

cplx psi_signed(const Couplings& c, double q, double x)
{
    if (q == 0.0) throw singularity_error("psi: k = 0");
    const double a = c.a;
    const cplx i(0.0, 1.0);
    cplx v = std::exp(i * q * x);
    if (x < -a || x == -a) {
        const cplx br = std::exp(-i * q * (x + 2.0 * a)) - std::exp(i * q * x);
        v -= i * c.z_minus / (2.0 * q) * br * theta(-x - a);
    }
    if (x > a || x == a) {
        const cplx br = std::exp(i * q * x) - std::exp(-i * q * (x - 2.0 * a));
        v -= i * c.z_plus / (2.0 * q) * br * theta(x - a);
    }
    return v * inv_sqrt_2pi;
}

cplx psi_eval(const Couplings& c, const ScatteringBranch& s, double x)
{
    check_positive_k(s.k);
    if (s.branch != 1 && s.branch != 2) throw domain_error("psi_eval: branch must be 1 or 2");
    return psi_signed(c, s.branch == 1 ? s.k : -s.k, x);
}

cplx psi_conj_eval(const Couplings& c, const ScatteringBranch& s, double x)
{
    const Couplings cc{std::conj(c.z_plus), std::conj(c.z_minus), c.a};
    return psi_eval(cc, s, x);
}

TwoByTwo single_delta_matrix(cplx z, double pos, cplx k)
{
    if (k == cplx(0.0)) throw singularity_error("transfer_matrix: k = 0");
    const cplx i(0.0, 1.0);
    const cplx u = z / (2.0 * i * k);
    TwoByTwo m;
    m << 1.0 + u, u * std::exp(-2.0 * i * k * pos), -u * std::exp(2.0 * i * k * pos), 1.0 - u;
    return m;
}

TwoByTwo transfer_matrix(const Couplings& c, cplx k)
{
    return single_delta_matrix(c.z_plus, c.a, k) * single_delta_matrix(c.z_minus, -c.a, k);
}

cplx m22(const Couplings& c, cplx k)
{
    if (k == cplx(0.0)) throw singularity_error("m22: k = 0");
    const cplx i(0.0, 1.0);
    const cplx up = c.z_plus / (2.0 * i * k);
    const cplx um = c.z_minus / (2.0 * i * k);
    return 1.0 - up - um + up * um * (1.0 - std::exp(4.0 * i * k * c.a));
}

cplx m22_scaled(const Couplings& c, cplx k)
{
    const cplx i(0.0, 1.0);
    const cplx zp = c.z_plus;
    const cplx zm = c.z_minus;
    return k * k + i * (zp + zm) * k / 2.0 - zp * zm / 4.0 * (1.0 - std::exp(4.0 * i * k * c.a));
}

cplx m22_scaled_derivative(const Couplings& c, cplx k)
{
    const cplx i(0.0, 1.0);
    const cplx zp = c.z_plus;
    const cplx zm = c.z_minus;
    return 2.0 * k + i * (zp + zm) / 2.0 + i * zp * zm * c.a * std::exp(4.0 * i * k * c.a);
}

namespace {

cplx k12(const Couplings& c, double k)
{
    const cplx i(0.0, 1.0);
    const cplx zp = c.z_plus;
    const cplx zm = c.z_minus;
    const double a = c.a;
    return (i * zm * (2.0 * k - i * zm) * std::exp(2.0 * i * a * k) -
            i * zp * (2.0 * k + i * zp) * std::exp(-2.0 * i * a * k)) /
           (4.0 * k * k);
}

} // namespace

TwoByTwo k_matrix(const Couplings& c, double k)
{
    check_positive_k(k);
    const cplx d = 1.0 + (c.z_minus * c.z_minus + c.z_plus * c.z_plus) / (4.0 * k * k);
    TwoByTwo m;
    m << d, k12(c, k), k12(c, -k), d;
    return m;
}

TwoByTwo smeared_overlap_check(const Couplings& c, double k0, double q0, double width)
{
    if (!(width > 0.0) || !(k0 > 3.0 * width) || !(q0 > 3.0 * width))
        throw domain_error("smeared_overlap_check: need k0, q0 > 3 width > 0");

    const Couplings cc{std::conj(c.z_plus), std::conj(c.z_minus), c.a};
    const double w = width;
    const auto gauss = [w](double t) { return std::exp(-t * t / (2.0 * w * w)) / (w * std::sqrt(2.0 * pi)); };

    QuadratureSpec inner;
    inner.abs_tol = 1e-11;
    inner.rel_tol = 1e-10;

    // Smeared eigenfunction: integral over k of g(k - centre) psi_{branch,k}(x).
    const auto packet = [&](const Couplings& cp, int branch, double centre, double x) {
        const double lo = std::max(centre - 8.0 * w, 1e-9);
        const double hi = centre + 8.0 * w;
        return integrate_1d(
            [&](double k) { return gauss(k - centre) * psi_eval(cp, {branch, k}, x); }, lo, hi, inner);
    };

    QuadratureSpec outer;
    outer.abs_tol = 1e-8;
    outer.rel_tol = 1e-8;
    outer.max_subdivisions = 20000;

    const double reach = 9.0 / w + 3.0 * c.a;
    const std::vector<double> bps = {-3.0 * c.a, -c.a, 0.0, c.a, 3.0 * c.a};
    const double norm = 1.0 / (2.0 * w * std::sqrt(pi));

    TwoByTwo out;
    for (int br_a = 1; br_a <= 2; ++br_a) {
        for (int br_b = 1; br_b <= 2; ++br_b) {
            const cplx v = integrate_1d(
                [&](double x) {
                    return std::conj(packet(cc, br_a, k0, x)) * packet(c, br_b, q0, x);
                },
                -reach, reach, outer, bps);
            out(br_a - 1, br_b - 1) = v / norm;
        }
    }
    return out;
}

} // namespace ddm
