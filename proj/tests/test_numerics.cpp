#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddm/model.hpp"
#include "ddm/numerics.hpp"

using namespace ddm;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// erf(w) = (2/sqrt(pi)) w int_0^1 exp(-w^2 t^2) dt, straight segment from 0 to w.
cplx erf_by_quadrature(cplx w)
{
    return integrate_1d([w](double t) { return 2.0 / std::sqrt(pi) * w * std::exp(-w * w * t * t); }, 0.0, 1.0,
                        {1e-15, 1e-15, 4000, 0.0});
}

} // namespace

TEST_CASE("erf reference values")
{
    CHECK(erf_complex(0.0) == cplx(0.0));
    CHECK(rel(erf_complex(1.0), erf_by_quadrature(1.0)) < 1e-13);
    CHECK(std::abs(erf_complex(1.0) - 0.8427007929497149) < 1e-15);
    const cplx ei = erf_complex(cplx(0.0, 1.0));
    CHECK(std::abs(ei.real()) < 1e-300);
    CHECK(std::abs(ei.imag() - 1.650425758797543) < 1e-14);
    CHECK(rel(ei, erf_by_quadrature(cplx(0.0, 1.0))) < 1e-13);

    // Frozen 30-digit values.
    struct Ref {
        cplx w, v;
    };
    const Ref refs[] = {
        {{0.5, 0.5}, {0.64261291485482053, 0.45788139443519222}},
        {{2.0, 1.0}, {1.0036063427256518, -0.011259006028815025}},
        {{-1.5, 3.0}, {-118.8559040465755, -88.120890671506464}},
        {{4.0, -2.0}, {1.0000005652170028, 5.1310052960818763e-7}},
        {{0.0, 0.1}, {0.0, 0.1132151741695998}},
        {{3.0, 5.0}, {-797502.30794284015, -336207.68544287617}},
        {{0.001, 2.0}, {0.061607230237346114, 18.564679199971328}},
        {{9.0, 0.0}, {1.0, 0.0}},
    };
    for (const auto& r : refs) {
        CAPTURE(r.w);
        CHECK(rel(erf_complex(r.w), r.v) < 1e-12);
    }
}

TEST_CASE("erf matches its defining integral on a grid up to |w| = 10")
{
    double worst = 0.0;
    for (double re = -3.0; re <= 3.0; re += 0.75)
        for (double im = -3.0; im <= 3.0; im += 0.75) {
            const cplx w(re, im);
            if (std::abs(w) < 1e-12) continue;
            worst = std::max(worst, rel(erf_complex(w), erf_by_quadrature(w)));
        }
    CHECK(worst < 1e-12);
    // Along the real axis, out to 10, against the real library erf.
    for (double x : {0.1, 1.7, 5.0, 7.5, 10.0}) CHECK(std::abs(erf_complex(x) - std::erf(x)) < 1e-15);
}

TEST_CASE("erf symmetries and overflow guard")
{
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    int used = 0;
    while (used < 1000) {
        const cplx w(u(gen), u(gen));
        if (std::abs(w) > 5.0) continue;
        ++used;
        const cplx e = erf_complex(w);
        const double scale = std::max(1.0, std::abs(e));
        worst = std::max(worst, std::abs(erf_complex(-w) + e) / scale);
        worst = std::max(worst, std::abs(erf_complex(std::conj(w)) - std::conj(e)) / scale);
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(erf_complex(cplx(2e6, 0.0)), domain_error);
}

TEST_CASE("integrate_1d basics")
{
    CHECK(std::abs(integrate_1d([](double) { return cplx(1.0); }, 0.0, 1.0) - 1.0) < 1e-14);
    CHECK(std::abs(integrate_1d([](double t) { return cplx(std::exp(-t * t)); }, 0.0, INFINITY) -
                   std::sqrt(pi) / 2.0) < 1e-10);
    const cplx i22 = integrate_1d([](double k) {
        return std::exp(cplx(0.0, k)) / ((1.0 + k * k) * (1.0 + k * k)) / (2.0 * pi);
    }, -INFINITY, INFINITY);
    CHECK(std::abs(i22 - std::exp(-1.0) / 2.0) < 1e-9);
    // Declared kink.
    const cplx kink = integrate_1d([](double t) { return cplx(std::abs(t - 0.3)); }, -1.0, 1.0, {}, {0.3});
    CHECK(std::abs(kink - (1.3 * 1.3 + 0.7 * 0.7) / 2.0) < 1e-13);
}

TEST_CASE("integrate_1d I22 closed form")
{
    for (double al : {0.0, 0.5, 1.0, 3.0}) {
        const cplx q = integrate_1d([al](double k) {
            return std::exp(cplx(0.0, k * al)) / ((1.0 + k * k) * (1.0 + k * k)) / (2.0 * pi);
        }, -INFINITY, INFINITY);
        CHECK(std::abs(q - std::exp(-al) * (1.0 + al) / 4.0) < 1e-8);
    }
}

TEST_CASE("integrate_1d reports non-convergence with estimate and bound")
{
    QuadratureSpec tight{1e-15, 1e-15, 8, 0.0};
    try {
        integrate_1d([](double t) { return cplx(std::sin(1.0 / t)); }, 1e-4, 1.0, tight);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(std::isfinite(e.estimate().real()));
        CHECK(e.error_bound() > 0.0);
    }
}

TEST_CASE("regulated oscillatory integral")
{
    // (1/2pi) int e^{-eps k^2} e^{ik} / (1 + k^2) dk -> e^{-1}/2 as eps -> 0.
    const auto rung = [](double eps) {
        return integrate_1d([eps](double k) {
            return std::exp(-eps * k * k) * std::exp(cplx(0.0, k)) / (1.0 + k * k) / (2.0 * pi);
        }, -INFINITY, INFINITY, {1e-12, 1e-12, 4000, 0.0});
    };
    CHECK(std::abs(richardson_regulated(rung, 0.01) - std::exp(-1.0) / 2.0) < 1e-4);
    // Slow 1/k decay handled by period summation.
    const cplx f = fourier_integral([](double k) { return cplx(k * k / (1.0 + k * k)) - 1.0; }, 1.0);
    CHECK(std::abs(f + std::exp(-1.0) / 2.0) < 1e-8);
}

TEST_CASE("matrix_inv_sqrt")
{
    CHECK((matrix_inv_sqrt(TwoByTwo::Identity()) - TwoByTwo::Identity()).norm() < 1e-15);
    TwoByTwo d = TwoByTwo::Zero();
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    TwoByTwo expect = TwoByTwo::Zero();
    expect(0, 0) = 0.5;
    expect(1, 1) = 1.0 / 3.0;
    CHECK((matrix_inv_sqrt(d) - expect).norm() < 1e-15);

    const TwoByTwo k = k_matrix(Couplings{{0.0, 0.1}, {0.0, 0.1}, 1.0}, 1.0);
    const TwoByTwo m = matrix_inv_sqrt(k);
    CHECK((m * m * k - TwoByTwo::Identity()).norm() < 1e-12);

    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        TwoByTwo r;
        r << cplx(2.0 + u(gen), u(gen)), cplx(u(gen), u(gen)) * 0.5, cplx(u(gen), u(gen)) * 0.5,
            cplx(2.0 + u(gen), u(gen));
        const TwoByTwo s = matrix_inv_sqrt(r);
        worst = std::max(worst, (s * s * r - TwoByTwo::Identity()).norm());
    }
    CHECK(worst < 1e-12);

    TwoByTwo neg = TwoByTwo::Identity();
    neg(1, 1) = -2.0;
    CHECK_THROWS_AS(matrix_inv_sqrt(neg), branch_error);
    TwoByTwo jordan;
    jordan << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(matrix_inv_sqrt(jordan), branch_error);
}

TEST_CASE("count_zeros")
{
    CHECK(count_zeros([](cplx k) { return k - cplx(1.0, 1.0); }, {0.0, 2.0, 0.0, 2.0}) == 1);
    CHECK(count_zeros([](cplx k) { return k * k + 1.0; }, {-2.0, 2.0, 0.5, 2.0}) == 1);
    CHECK(count_zeros([](cplx k) { return (k * k + 1.0) * (k - 2.5); }, {-3.0, 3.0, -2.0, 2.0}) == 3);

    const Couplings c{0.3, -0.3, 1.0};
    const ComplexFn g = [c](cplx k) { return m22_scaled(c, k); };
    CHECK(count_zeros(g, {-1.0, 1.0, 0.01, 2.0}) == 1);

    // Oracle: Newton from a grid of starts finds exactly one root inside.
    std::vector<cplx> roots;
    for (double re = -0.9; re <= 0.9; re += 0.3)
        for (double im = 0.1; im <= 1.9; im += 0.3) {
            try {
                const cplx r = refine_root(g, cplx(re, im));
                if (std::abs(r.real()) < 1.0 && r.imag() > 0.01 && r.imag() < 2.0 &&
                    std::none_of(roots.begin(), roots.end(), [&](cplx q) { return std::abs(q - r) < 1e-8; }))
                    roots.push_back(r);
            } catch (const no_convergence_error&) {
            }
        }
    REQUIRE(roots.size() == 1);
    // Odd-parity bound state of the antisymmetric pair: kappa solves a closed form.
    CHECK(std::abs(roots[0].real()) < 1e-10);

    CHECK_THROWS_AS(count_zeros([](cplx k) { return k - cplx(1.0, 0.0); }, {0.0, 2.0, 0.0, 2.0}),
                    contour_too_close_error);
}

TEST_CASE("count_zeros additive under splitting")
{
    const Couplings c{{0.8, 0.4}, {-0.5, 0.9}, 1.0};
    const ComplexFn g = [c](cplx k) { return m22_scaled(c, k); };
    const ComplexFn dg = [c](cplx k) { return m22_scaled_derivative(c, k); };
    for (double cut : {-0.77, 0.1234, 0.61}) {
        const int whole = count_zeros(g, {-2.0, 2.0, 0.01, 2.0}, {}, dg);
        const int left = count_zeros(g, {-2.0, cut, 0.01, 2.0}, {}, dg);
        const int right = count_zeros(g, {cut, 2.0, 0.01, 2.0}, {}, dg);
        CHECK(whole == left + right);
    }
}

TEST_CASE("refine_root")
{
    const cplx r1 = refine_root([](cplx k) { return k * k + 1.0; }, cplx(0.3, 0.8));
    CHECK(std::abs(r1 - cplx(0.0, 1.0)) < 1e-12);
    const cplx r2 = refine_root([](cplx k) { return std::exp(k) + 1.0; }, cplx(0.0, 3.0));
    CHECK(std::abs(r2 - cplx(0.0, pi)) < 1e-12);
    // Real seed for k^2 + 1: Newton iterates stay on the real axis.
    CHECK_THROWS_AS(refine_root([](cplx k) { return k * k + 1.0; }, cplx(0.5, 0.0)), no_convergence_error);
}

TEST_CASE("conventions")
{
    CHECK(sign(0.0) == 0.0);
    CHECK(theta(0.0) == 0.5);
    CHECK(theta(-1.0) == 0.0);
    CHECK(theta(2.0) == 1.0);
}
