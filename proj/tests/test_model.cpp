#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddm/model.hpp"

using namespace ddm;

namespace {

Couplings conj_of(const Couplings& c) { return {std::conj(c.z_plus), std::conj(c.z_minus), c.a}; }

// Plane-wave amplitudes (A, B) of sqrt(2 pi) f = A e^{ikx} + B e^{-ikx} near x1.
Eigen::Vector2cd amplitudes(const std::function<cplx(double)>& f, double k, double x1)
{
    const double x2 = x1 + pi / (2.0 * k);
    const cplx i(0.0, 1.0);
    Eigen::Matrix2cd m;
    m << std::exp(i * k * x1), std::exp(-i * k * x1), std::exp(i * k * x2), std::exp(-i * k * x2);
    return m.partialPivLu().solve(Eigen::Vector2cd(f(x1), f(x2)) * std::sqrt(2.0 * pi));
}

// -psi'' + V psi = k^2 psi with Gaussian point interactions of width w, RK4.
cplx integrate_schroedinger(const Couplings& c, double k, double w, double x_start, cplx psi0, cplx dpsi0,
                            double x_end, double step)
{
    const auto g = [w](double u) { return std::exp(-u * u / (2.0 * w * w)) / (w * std::sqrt(2.0 * pi)); };
    const auto v = [&](double x) { return c.z_plus * g(x - c.a) + c.z_minus * g(x + c.a); };
    const auto rhs = [&](double x, const Eigen::Vector2cd& y) {
        return Eigen::Vector2cd(y(1), (v(x) - k * k) * y(0));
    };
    Eigen::Vector2cd y(psi0, dpsi0);
    const int n = static_cast<int>(std::ceil((x_end - x_start) / step));
    const double h = (x_end - x_start) / n;
    double x = x_start;
    for (int j = 0; j < n; ++j) {
        const Eigen::Vector2cd k1 = rhs(x, y);
        const Eigen::Vector2cd k2 = rhs(x + h / 2, y + h / 2 * k1);
        const Eigen::Vector2cd k3 = rhs(x + h / 2, y + h / 2 * k2);
        const Eigen::Vector2cd k4 = rhs(x + h, y + h * k3);
        y += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        x += h;
    }
    return y(0);
}

} // namespace

TEST_CASE("nondimensionalize")
{
    PhysicalContext ctx;
    CHECK(nondimensionalize(ctx).z_plus == cplx(0.0));
    ctx.length_scale = 2.5;
    ctx.alpha = 2.5;
    CHECK(nondimensionalize(ctx).a == doctest::Approx(1.0));
    PhysicalContext p;
    p.hbar = 1.0;
    p.mass = 0.5;
    p.length_scale = 1.0;
    p.zeta_plus = cplx(0.0, 0.3);
    CHECK(std::abs(nondimensionalize(p).z_plus - cplx(0.0, 0.3)) < 1e-15);

    PhysicalContext q;
    q.mass = 1.7;
    q.hbar = 0.6;
    q.length_scale = 0.8;
    q.alpha = 1.9;
    q.zeta_plus = cplx(0.2, -0.4);
    q.zeta_minus = cplx(-1.1, 0.3);
    const PhysicalContext back = dimensionalize(nondimensionalize(q), q);
    CHECK(std::abs(back.zeta_plus - q.zeta_plus) < 1e-15);
    CHECK(std::abs(back.zeta_minus - q.zeta_minus) < 1e-15);
    CHECK(back.alpha == doctest::Approx(q.alpha).epsilon(1e-15));
    CHECK(energy_unit(q) == doctest::Approx(0.36 / (2 * 1.7 * 0.64)));
    q.mass = -1.0;
    CHECK_THROWS_AS(nondimensionalize(q), domain_error);
}

TEST_CASE("psi_eval simple regions")
{
    const Couplings c{{0.4, -0.2}, {-0.7, 0.5}, 1.0};
    for (double x : {-0.9, 0.0, 0.35, 0.99}) {
        const cplx free = std::exp(cplx(0.0, 1.3 * x)) / std::sqrt(2.0 * pi);
        CHECK(std::abs(psi_eval(c, {1, 1.3}, x) - free) < 1e-15);
        CHECK(std::abs(psi_conj_eval(c, {1, 1.3}, x) - free) < 1e-15);
    }
    const Couplings zero{0.0, 0.0, 1.0};
    for (double x : {-4.0, -1.0, 2.0, 7.3}) {
        CHECK(std::abs(psi_eval(zero, {1, 0.8}, x) - std::exp(cplx(0.0, 0.8 * x)) / std::sqrt(2.0 * pi)) < 1e-15);
        CHECK(std::abs(psi_eval(zero, {2, 0.8}, x) - std::exp(cplx(0.0, -0.8 * x)) / std::sqrt(2.0 * pi)) < 1e-15);
    }
    CHECK_THROWS_AS(psi_eval(c, {1, 0.0}, 0.0), domain_error);
    CHECK_THROWS_AS(psi_eval(c, {1, -1.0}, 0.0), domain_error);
}

TEST_CASE("psi_eval against direct integration of the Schroedinger equation")
{
    const Couplings c{0.3, -0.3, 1.0};
    const double k = 1.0;
    for (int branch : {1, 2}) {
        const ScatteringBranch b{branch, k};
        const double x0 = -3.0, d = 1e-5;
        const cplx p0 = psi_eval(c, b, x0);
        const cplx dp0 = (psi_eval(c, b, x0 + d) - psi_eval(c, b, x0 - d)) / (2.0 * d);
        const cplx ode = integrate_schroedinger(c, k, 1e-3, x0, p0, dp0, 2.0, 2e-5);
        CAPTURE(branch);
        CHECK(std::abs(ode - psi_eval(c, b, 2.0)) < 1e-4);
    }
    // A complex pair as well.
    const Couplings cz{{0.2, 0.3}, {-0.1, -0.3}, 1.0};
    const ScatteringBranch b{1, 0.7};
    const cplx p0 = psi_eval(cz, b, -3.0);
    const cplx dp0 = (psi_eval(cz, b, -3.0 + 1e-5) - psi_eval(cz, b, -3.0 - 1e-5)) / 2e-5;
    CHECK(std::abs(integrate_schroedinger(cz, 0.7, 1e-3, -3.0, p0, dp0, 2.0, 2e-5) - psi_eval(cz, b, 2.0)) < 1e-4);
}

TEST_CASE("psi_conj_eval is psi_eval with conjugated couplings")
{
    const Couplings c{{0.0, 0.1}, {0.0, 0.1}, 1.0};
    for (int br : {1, 2})
        for (double x : {-2.0, 2.0, 3.7}) {
            CHECK(std::abs(psi_conj_eval(c, {br, 1.0}, x) - psi_eval(conj_of(c), {br, 1.0}, x)) < 1e-15);
            // Purely imaginary couplings: the conjugated family is not the complex conjugate.
            if (x == 2.0) CHECK(std::abs(psi_conj_eval(c, {br, 1.0}, x) - psi_eval(c, {br, 1.0}, x)) > 1e-3);
        }
    const Couplings real{0.4, -0.9, 1.3};
    for (double x : {-3.0, -1.3, 0.2, 1.3, 5.0})
        CHECK(psi_conj_eval(real, {1, 0.9}, x) == psi_eval(real, {1, 0.9}, x));
}

TEST_CASE("psi continuity at the point interactions")
{
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Couplings c{{u(gen), u(gen)}, {u(gen), u(gen)}, 0.5 + std::abs(u(gen))};
        const ScatteringBranch b{1 + i % 2, 0.1 + 3 * std::abs(u(gen))};
        for (double x : {c.a, -c.a}) {
            const double e = 1e-12;
            CHECK(std::abs(psi_eval(c, b, x + e) - psi_eval(c, b, x - e)) < 1e-10);
        }
    }
}

TEST_CASE("transfer matrix")
{
    CHECK((transfer_matrix(Couplings{0.0, 0.0, 1.0}, 1.3) - TwoByTwo::Identity()).norm() < 1e-15);
    CHECK_THROWS_AS(transfer_matrix(Couplings{0.1, 0.2, 1.0}, 0.0), singularity_error);

    std::mt19937 gen(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Couplings c{{u(gen), u(gen)}, {u(gen), u(gen)}, 0.5 + std::abs(u(gen))};
        const cplx k(0.1 + 2 * std::abs(u(gen)), u(gen));
        CHECK(std::abs(transfer_matrix(c, k).determinant() - 1.0) < 1e-12);
        const Couplings single{c.z_plus, 0.0, c.a};
        CHECK((transfer_matrix(single, k) - single_delta_matrix(c.z_plus, c.a, k)).norm() < 1e-14);
        CHECK(std::abs(m22(c, k) - transfer_matrix(c, k)(1, 1)) < 1e-12 * std::max(1.0, std::abs(m22(c, k))));
        CHECK(std::abs(m22_scaled(c, k) - k * k * m22(c, k)) < 1e-12 * std::max(1.0, std::abs(m22_scaled(c, k))));
        const double h = 1e-5;
        const cplx fd = (m22_scaled(c, k + h) - m22_scaled(c, k - h)) / (2 * h);
        CHECK(std::abs(fd - m22_scaled_derivative(c, k)) < 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST_CASE("transfer matrix carries the left amplitudes of psi to the right")
{
    const Couplings c{0.3, -0.3, 1.0};
    for (int br : {1, 2}) {
        const ScatteringBranch b{br, 1.0};
        const auto f = [&](double x) { return psi_eval(c, b, x); };
        const Eigen::Vector2cd left = amplitudes(f, 1.0, -3.5);
        const Eigen::Vector2cd right = amplitudes(f, 1.0, 2.0);
        CHECK((transfer_matrix(c, 1.0) * left - right).norm() < 1e-10);
    }
}

TEST_CASE("K matrix")
{
    CHECK((k_matrix(Couplings{0.0, 0.0, 1.0}, 1.0) - TwoByTwo::Identity()).norm() < 1e-15);
    const TwoByTwo k = k_matrix(Couplings{{0.0, 0.1}, {0.0, 0.1}, 1.0}, 1.0);
    CHECK(std::abs(k(0, 0) - 0.995) < 1e-15);
    CHECK(std::abs(k(1, 1) - 0.995) < 1e-15);

    // Independent oracle: delta(k - q) coefficient from the asymptotic amplitudes,
    // half the summed products on both sides.
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Couplings c{{u(gen), u(gen)}, {u(gen), u(gen)}, 0.5 + std::abs(u(gen))};
        const double kk = 0.3 + 2 * std::abs(u(gen));
        const TwoByTwo km = k_matrix(c, kk);
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) {
                cplx sum = 0.0;
                for (double x1 : {c.a + 0.5, -c.a - 0.5 - pi / (2 * kk)}) {
                    const auto pa = amplitudes([&](double x) { return psi_conj_eval(c, {a, kk}, x); }, kk, x1);
                    const auto pb = amplitudes([&](double x) { return psi_eval(c, {b, kk}, x); }, kk, x1);
                    sum += std::conj(pa(0)) * pb(0) + std::conj(pa(1)) * pb(1);
                }
                CHECK(std::abs(0.5 * sum - km(a - 1, b - 1)) < 1e-10);
            }
        // K^dagger(z*) = K(z).
        CHECK((k_matrix(conj_of(c), kk).adjoint() - km).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("smeared overlap approaches K")
{
    SUBCASE("free case is the identity to O(width)")
    {
        const TwoByTwo r = smeared_overlap_check(Couplings{0.0, 0.0, 1.0}, 1.0, 1.0, 0.05);
        CHECK((r - TwoByTwo::Identity()).cwiseAbs().maxCoeff() < 0.05);
    }
    SUBCASE("separated centres decouple")
    {
        const TwoByTwo r = smeared_overlap_check(Couplings{{0.0, 0.1}, {0.0, 0.1}, 1.0}, 1.0, 1.5, 0.05);
        CHECK(r.cwiseAbs().maxCoeff() <= 1e-3);
    }
    SUBCASE("Richardson over the width ladder")
    {
        const Couplings c{{0.0, 0.1}, {0.0, 0.1}, 1.0};
        const TwoByTwo r1 = smeared_overlap_check(c, 1.0, 1.0, 0.1);
        const TwoByTwo r2 = smeared_overlap_check(c, 1.0, 1.0, 0.05);
        const TwoByTwo r4 = smeared_overlap_check(c, 1.0, 1.0, 0.025);
        // Quadratic-in-width Richardson on the three rungs.
        const TwoByTwo ex = (64.0 * r4 - 20.0 * r2 + r1) / 45.0;
        CHECK((ex - k_matrix(c, 1.0)).cwiseAbs().maxCoeff() < 1e-3);
    }
    CHECK_THROWS_AS(smeared_overlap_check(Couplings{}, 0.1, 1.0, 0.05), domain_error);
}
