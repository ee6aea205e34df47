#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddm/spectrum.hpp"

using namespace ddm;

TEST_CASE("no spectral singularities for real or small imaginary couplings")
{
    CHECK(find_spectral_singularities(Couplings{0.7, -0.4, 1.0}, 20.0).empty());
    CHECK(find_spectral_singularities(Couplings{{0.0, 0.1}, {0.0, -0.1}, 1.0}, 20.0).empty());
    CHECK_THROWS_AS(find_spectral_singularities(Couplings{}, 0.0), domain_error);
}

TEST_CASE("first antisymmetric singularity on the imaginary axis")
{
    // z+ = is, z- = -is, a = 1: k^2 M22 = k^2 - (s^2/4)(1 - e^{4ik}). A real zero
    // needs e^{4ik} = -1 and k = s/sqrt(2), so k = (2n+1) pi/4 and s = sqrt(2) k.
    // The first s in [4, 6] is sqrt(2) * 5 pi/4.
    const double k_star = 5.0 * pi / 4.0;
    const double s_star = std::sqrt(2.0) * k_star;
    REQUIRE(s_star > 4.0);
    REQUIRE(s_star < 6.0);

    const Couplings at = couplings_for(ScanMode::antisymmetric, 0.0, s_star, 1.0);
    const auto ks = find_spectral_singularities(at, 20.0);
    REQUIRE(ks.size() == 1);
    CHECK(std::abs(ks[0] - k_star) < 1e-8);

    // Away from s_star the zero leaves the real axis.
    CHECK(find_spectral_singularities(couplings_for(ScanMode::antisymmetric, 0.0, s_star - 0.05, 1.0), 20.0).empty());
    CHECK(find_spectral_singularities(couplings_for(ScanMode::antisymmetric, 0.0, s_star + 0.05, 1.0), 20.0).empty());

    // Second method: the zero near k_star crosses from the lower into the upper
    // half plane as s grows through s_star.
    const auto upper = [&](double s) {
        const Couplings c = couplings_for(ScanMode::antisymmetric, 0.0, s, 1.0);
        return count_zeros([c](cplx k) { return m22_scaled(c, k); }, {k_star - 0.3, k_star + 0.3, 1e-6, 0.3}, {},
                           [c](cplx k) { return m22_scaled_derivative(c, k); });
    };
    const auto straddle = [&](double s) {
        const Couplings c = couplings_for(ScanMode::antisymmetric, 0.0, s, 1.0);
        return count_zeros([c](cplx k) { return m22_scaled(c, k); }, {k_star - 0.3, k_star + 0.3, -0.3, 0.3}, {},
                           [c](cplx k) { return m22_scaled_derivative(c, k); });
    };
    CHECK(straddle(s_star) == 1);
    CHECK(upper(s_star - 0.05) + upper(s_star + 0.05) == 1);
    CHECK(upper(s_star - 0.05) != upper(s_star + 0.05));
}

TEST_CASE("bound states")
{
    const BoundStates free = count_bound_states(Couplings{});
    CHECK(free.total == 0);
    CHECK(free.real_energy == 0);

    const Couplings real = couplings_for(ScanMode::antisymmetric, 0.3, 0.0, 1.0);
    const BoundStates b = count_bound_states(real, {-1.0, 1.0, 1e-3, 3.0});
    CHECK(b.total == 1);
    CHECK(b.real_energy == 1);
    REQUIRE(b.roots.size() == 1);
    // k = i kappa with 4 kappa^2 / z^2 = 1 - e^{-4 kappa} for the antisymmetric real pair.
    const double kappa = b.roots[0].imag();
    CHECK(std::abs(b.roots[0].real()) < 1e-10);
    CHECK(std::abs(4.0 * kappa * kappa / (0.3 * 0.3) - (1.0 - std::exp(-4.0 * kappa))) < 1e-10);

    const Couplings pt = couplings_for(ScanMode::pt_symmetric, -0.5, 0.1, 1.0);
    CHECK(count_bound_states(pt).total >= 1);

    const Couplings imag = couplings_for(ScanMode::antisymmetric, 0.0, 0.3, 1.0);
    CHECK(count_bound_states(imag).total == 0);
    CHECK_THROWS_AS(count_bound_states(real, {-1.0, 1.0, 0.0, 2.0}), domain_error);
}

TEST_CASE("zero count agrees with independent root search")
{
    std::mt19937 gen(21);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    const ComplexRect rect{-3.0, 3.0, 0.05, 3.0};
    for (int i = 0; i < 20; ++i) {
        const Couplings c{{u(gen), u(gen)}, {u(gen), u(gen)}, 1.0};
        const BoundStates b = count_bound_states(c, rect);
        std::vector<cplx> roots;
        const ComplexFn f = [c](cplx k) { return m22_scaled(c, k); };
        for (double re = -2.9; re < 3.0; re += 0.2)
            for (double im = 0.1; im < 3.0; im += 0.2) {
                try {
                    const cplx r = refine_root(f, cplx(re, im));
                    if (r.real() > rect.re_min && r.real() < rect.re_max && r.imag() > rect.im_min &&
                        r.imag() < rect.im_max &&
                        std::none_of(roots.begin(), roots.end(), [&](cplx q) { return std::abs(q - r) < 1e-7; }))
                        roots.push_back(r);
                } catch (const no_convergence_error&) {
                }
            }
        CAPTURE(c.z_plus);
        CAPTURE(c.z_minus);
        CHECK(b.total == static_cast<int>(roots.size()));
        for (cplx r : b.roots)
            CHECK(std::any_of(roots.begin(), roots.end(), [&](cplx q) { return std::abs(q - r) < 1e-6; }));
    }
}

TEST_CASE("Hermitian row and conjugation symmetry")
{
    for (double r = -2.0; r <= 2.0; r += 0.25) {
        const ScanCell cell = scan_cell(ScanMode::antisymmetric, r, 0.0, 1.0);
        CHECK(cell.status == "ok");
        CHECK(cell.spectral_singularities.empty());
        CHECK(cell.n_bound == cell.n_bound_real_energy);
        CHECK(cell.quasi_hermitian);
    }
    for (auto [r, s] : {std::pair{0.3, 0.2}, {-0.8, 1.2}, {0.1, 4.5}, {-2.0, 0.5}, {1.5, 3.0}}) {
        const ScanCell a = scan_cell(ScanMode::antisymmetric, r, s, 1.0);
        const ScanCell b = scan_cell(ScanMode::antisymmetric, r, -s, 1.0);
        CHECK(a.n_bound == b.n_bound);
        REQUIRE(a.spectral_singularities.size() == b.spectral_singularities.size());
        for (std::size_t i = 0; i < a.spectral_singularities.size(); ++i)
            CHECK(std::abs(a.spectral_singularities[i] - b.spectral_singularities[i]) < 1e-7);
    }
}

TEST_CASE("scan invariants and ordering")
{
    SpectrumOptions opt;
    opt.threads = 3;
    const auto cells = scan_region(ScanMode::antisymmetric, {-0.3, 0.3}, {-0.3, 0.3}, 5, 1.0, opt);
    REQUIRE(cells.size() == 25);
    for (int is = 0; is < 5; ++is)
        for (int ir = 0; ir < 5; ++ir) {
            const ScanCell& c = cells[is * 5 + ir];
            CHECK(c.r == doctest::Approx(-0.3 + 0.15 * ir));
            CHECK(c.s == doctest::Approx(-0.3 + 0.15 * is));
            CHECK(c.n_bound_real_energy <= c.n_bound);
            if (c.quasi_hermitian) {
                CHECK(c.spectral_singularities.empty());
                CHECK(c.n_bound == c.n_bound_real_energy);
            }
            // Small couplings with |s| > |r| sit in the region free of bound states.
            if (std::abs(c.s) > std::abs(c.r) + 1e-12) CHECK(c.n_bound == 0);
            if (c.s == 0.0) CHECK(c.spectral_singularities.empty());
        }
    // Deterministic regardless of thread count.
    opt.threads = 1;
    const auto again = scan_region(ScanMode::antisymmetric, {-0.3, 0.3}, {-0.3, 0.3}, 5, 1.0, opt);
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].n_bound == again[i].n_bound);
    CHECK_THROWS_AS(scan_region(ScanMode::antisymmetric, {0, 1}, {0, 1}, 1, 1.0), domain_error);
}

TEST_CASE("PT map: threshold circle")
{
    // z+ = (r + is)/a, z- = conj(z+). Near k = 0,
    // k^2 M22 = (1 - 2|w|^2) k^2 + i (r + |w|^2) k + O(k^3), |w|^2 = r^2 + s^2,
    // so a zero passes through threshold exactly on (r + 1/2)^2 + s^2 = 1/4.
    const auto pt = [](double r, double s) { return count_bound_states(couplings_for(ScanMode::pt_symmetric, r, s, 1.0)); };
    for (auto [r, s] : {std::pair{-0.02, 0.05}, {-0.98, 0.05}, {-0.5, 0.49}, {-0.5, 0.0}, {-0.3, 0.2}, {-0.7, -0.3}}) {
        const BoundStates b = pt(r, s);
        CHECK(b.total >= 1);
        CHECK(b.real_energy >= 1);
    }
    // Small |w|: the threshold zero is at k ~ -i(r + |w|^2), in the upper half
    // plane only inside the circle.
    const BoundStates in = pt(-0.02, 0.05);
    REQUIRE(in.roots.size() == 1);
    const double w2 = 0.02 * 0.02 + 0.05 * 0.05;
    CHECK(std::abs(in.roots[0].imag() - (0.02 - w2) / (1.0 - 2.0 * w2)) < 5e-4);
    CHECK(pt(-0.02, 0.16).total == 0);
    // Repulsive pair: nothing.
    CHECK(pt(0.2, 0.1).total == 0);
}

TEST_CASE("general mode uses the supplied partner")
{
    const Couplings c = couplings_for(ScanMode::general, 0.4, -0.2, 2.0, cplx(0.1, 0.3));
    CHECK(c.z_plus == cplx(0.2, -0.1));
    CHECK(c.z_minus == cplx(0.1, 0.3));
    CHECK(c.a == 2.0);
}
