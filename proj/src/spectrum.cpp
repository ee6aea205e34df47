#include "ddm/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace ddm {

namespace {

ComplexFn g_of(const Couplings& c)
{
    return [c](cplx k) { return m22_scaled(c, k); };
}

ComplexFn dg_of(const Couplings& c)
{
    return [c](cplx k) { return m22_scaled_derivative(c, k); };
}

QuadratureSpec contour_spec()
{
    QuadratureSpec s;
    s.abs_tol = 1e-9;
    s.rel_tol = 1e-9;
    s.max_subdivisions = 3000;
    return s;
}

// count_zeros with small shifts of the rectangle when an edge grazes a zero.
int robust_count(const ComplexFn& f, const ComplexFn& df, ComplexRect& r)
{
    const double w = r.re_max - r.re_min;
    const double h = r.im_max - r.im_min;
    const double shifts[] = {0.0, 1.3e-4, -2.1e-4, 3.7e-4, -5.3e-4};
    for (double sh : shifts) {
        ComplexRect t = r;
        t.re_min -= sh * w;
        t.re_max += sh * w;
        t.im_max += sh * h;
        try {
            const int n = count_zeros(f, t, contour_spec(), df);
            r = t;
            return n;
        } catch (const contour_too_close_error&) {
        }
    }
    return count_zeros(f, r, contour_spec(), df);
}

void locate(const ComplexFn& f, const ComplexFn& df, ComplexRect r, int count, int depth,
            std::vector<cplx>& roots)
{
    if (count <= 0) return;
    if (count == 1 || depth > 40) {
        cplx seed = contour_moment(f, df, r, [](cplx k) { return k; }, contour_spec());
        if (count > 1) seed /= double(count);
        roots.push_back(refine_root(f, seed, df));
        for (int extra = 1; extra < count; ++extra) roots.push_back(roots.back());
        return;
    }
    const bool split_re = (r.re_max - r.re_min) >= (r.im_max - r.im_min);
    const double fractions[] = {0.5, 0.4713, 0.5291, 0.4371, 0.5617};
    for (double fr : fractions) {
        ComplexRect a = r, b = r;
        if (split_re) {
            const double m = r.re_min + fr * (r.re_max - r.re_min);
            a.re_max = m;
            b.re_min = m;
        } else {
            const double m = r.im_min + fr * (r.im_max - r.im_min);
            a.im_max = m;
            b.im_min = m;
        }
        try {
            const int na = count_zeros(f, a, contour_spec(), df);
            const int nb = count - na;
            locate(f, df, a, na, depth + 1, roots);
            locate(f, df, b, nb, depth + 1, roots);
            return;
        } catch (const contour_too_close_error&) {
        }
    }
    throw contour_too_close_error("bound-state subdivision: every split line grazes a zero", 0.5);
}

} // namespace

std::vector<double> find_spectral_singularities(const Couplings& c, double k_max, double k_min_cut)
{
    if (!(k_max > 0.0)) throw domain_error("find_spectral_singularities: k_max must be positive");
    std::vector<double> found;
    if (c.z_plus.imag() == 0.0 && c.z_minus.imag() == 0.0) return found;

    const auto f = [&](cplx k) { return m22(c, k); };
    const auto df = [&](cplx k) {
        return (m22_scaled_derivative(c, k) - 2.0 * k * m22(c, k)) / (k * k);
    };
    const auto mod = [&](double k) { return std::abs(m22(c, cplx(k, 0.0))); };

    const double lo = k_min_cut;
    const double step = std::min(0.002, 0.5 / (4.0 * c.a));
    const int n = static_cast<int>(std::ceil((k_max - lo) / step));
    std::vector<double> ks(n + 1), vs(n + 1);
    for (int j = 0; j <= n; ++j) {
        ks[j] = lo + (k_max - lo) * j / n;
        vs[j] = mod(ks[j]);
    }
    for (int j = 1; j < n; ++j) {
        if (!(vs[j] <= vs[j - 1] && vs[j] <= vs[j + 1])) continue;
        try {
            const cplx root = refine_root(f, cplx(ks[j], 0.0), df);
            if (std::abs(root.imag()) > 1e-8) continue;
            const double k = root.real();
            if (!(k > k_min_cut && k <= k_max)) continue;
            if (std::abs(m22(c, cplx(k, 0.0))) > 1e-10) continue;
            const bool dup = std::any_of(found.begin(), found.end(),
                                         [&](double q) { return std::abs(q - k) < 1e-7; });
            if (!dup) found.push_back(k);
        } catch (const no_convergence_error&) {
            // Candidate rejected; keep scanning.
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

ComplexRect default_bound_rect(const Couplings& c)
{
    const double zmax = std::max(std::abs(c.z_plus), std::abs(c.z_minus));
    const double half = std::max(3.0, 3.0 * zmax / c.a);
    return {-half, half, 1e-3, std::max(5.0, 1.5 * zmax)};
}

BoundStates count_bound_states(const Couplings& c, const ComplexRect& rect, double real_energy_tol)
{
    if (!(rect.im_min > 0.0)) throw domain_error("count_bound_states: rectangle must lie in Im k > 0");
    BoundStates out;
    const ComplexFn f = g_of(c);
    const ComplexFn df = dg_of(c);
    ComplexRect r = rect;
    out.total = robust_count(f, df, r);
    if (out.total == 0) return out;
    locate(f, df, r, out.total, 0, out.roots);
    for (cplx k : out.roots)
        if (std::abs((k * k).imag()) <= real_energy_tol) ++out.real_energy;
    return out;
}

BoundStates count_bound_states(const Couplings& c)
{
    return count_bound_states(c, default_bound_rect(c));
}

Couplings couplings_for(ScanMode mode, double r, double s, double a, cplx general_partner)
{
    const cplx z(r / a, s / a);
    switch (mode) {
    case ScanMode::antisymmetric:
        return {z, -z, a};
    case ScanMode::pt_symmetric:
        return {z, std::conj(z), a};
    case ScanMode::general:
        return {z, general_partner, a};
    }
    return {z, -z, a};
}

ScanCell scan_cell(ScanMode mode, double r, double s, double a, const SpectrumOptions& opt)
{
    ScanCell cell;
    cell.r = r;
    cell.s = s;
    try {
        const Couplings c = couplings_for(mode, r, s, a, opt.general_partner);
        const BoundStates b = count_bound_states(c, default_bound_rect(c), opt.real_energy_tol);
        cell.n_bound = b.total;
        cell.n_bound_real_energy = b.real_energy;
        cell.spectral_singularities = find_spectral_singularities(c, opt.k_max, opt.k_min_cut);
        cell.quasi_hermitian =
            cell.spectral_singularities.empty() && cell.n_bound == cell.n_bound_real_energy;
    } catch (const std::exception& e) {
        cell.status = e.what();
        cell.quasi_hermitian = false;
    }
    return cell;
}

std::vector<ScanCell> scan_region(ScanMode mode, Range r_range, Range s_range, int n, double a,
                                  const SpectrumOptions& opt)
{
    if (n < 2) throw domain_error("scan_region: n must be >= 2");
    std::vector<ScanCell> cells(static_cast<std::size_t>(n) * n);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t idx = next++; idx < cells.size(); idx = next++) {
            const int is = static_cast<int>(idx) / n;
            const int ir = static_cast<int>(idx) % n;
            const double r = r_range.min + (r_range.max - r_range.min) * ir / (n - 1);
            const double s = s_range.min + (s_range.max - s_range.min) * is / (n - 1);
            cells[idx] = scan_cell(mode, r, s, a, opt);
        }
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, cells.size());
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return cells;
}

} // namespace ddm
