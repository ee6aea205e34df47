#include "ddm/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace ddm {

namespace {

cplx erf_series(cplx w)
{
    // 2/sqrt(pi) sum (-1)^n w^{2n+1} / (n! (2n+1))
    const cplx w2 = w * w;
    cplx term = w;
    cplx sum = w;
    for (int n = 1; n < 200; ++n) {
        term *= -w2 / double(n);
        const cplx add = term / double(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum * (2.0 / std::sqrt(pi));
}

// Abramowitz & Stegun 7.1.29, valid for x >= 0.
cplx erf_as(double x, double y)
{
    const double xy = x * y;
    const double ex2 = std::exp(-x * x);
    double re = std::erf(x);
    double im = 0.0;

    // e^{-x^2}/(2 pi x) [(1 - cos 2xy) + i sin 2xy], written without the 1/x cancellation.
    if (x != 0.0) {
        const double s = std::sin(xy);
        re += ex2 * s * s / (pi * x);
    }
    {
        const double t = 2.0 * xy;
        const double sinc = (t == 0.0) ? 1.0 : std::sin(t) / t;
        im += ex2 * y * sinc / pi;
    }

    const int n_max = static_cast<int>(std::ceil(2.0 * std::abs(y) + 14.0));
    const double c2 = std::cos(2.0 * xy);
    const double s2 = std::sin(2.0 * xy);
    double sre = 0.0;
    double sim = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double nn = double(n);
        const double base = -nn * nn / 4.0 - x * x;
        const double ep = std::exp(nn * y + base);
        const double em = std::exp(-nn * y + base);
        const double ch = 0.5 * (ep + em);
        const double sh = 0.5 * (ep - em);
        const double e0 = std::exp(base);
        const double denom = nn * nn + 4.0 * x * x;
        const double fn = 2.0 * x * e0 - 2.0 * x * ch * c2 + nn * sh * s2;
        const double gn = 2.0 * x * ch * s2 + nn * sh * c2;
        sre += fn / denom;
        sim += gn / denom;
    }
    re += 2.0 / pi * sre;
    im += 2.0 / pi * sim;
    return {re, im};
}

// Gauss-Kronrod 7/15 abscissae and weights.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class Map { identity, right_tail, left_tail };

struct Panel {
    double a, b;
    Map map;
    double origin;
    cplx value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

struct MappedIntegrand {
    const RealToComplex& f;
    double reg;

    cplx operator()(double u, Map map, double origin) const
    {
        double x = u;
        double jac = 1.0;
        if (map != Map::identity) {
            const double t = std::tan(u);
            const double c = std::cos(u);
            jac = 1.0 / (c * c);
            x = (map == Map::right_tail) ? origin + t : origin - t;
            if (!std::isfinite(x) || !std::isfinite(jac)) return 0.0;
        }
        cplx v = f(x);
        if (reg > 0.0) v *= std::exp(-reg * x * x);
        const cplx out = v * jac;
        if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) {
            // Far-tail overflow in the jacobian against an integrand that has
            // already decayed to zero.
            if (v == cplx(0.0)) return 0.0;
            return out;
        }
        return out;
    }
};

void gk15(const MappedIntegrand& g, Panel& p)
{
    const double c = 0.5 * (p.a + p.b);
    const double h = 0.5 * (p.b - p.a);
    const cplx fc = g(c, p.map, p.origin);
    cplx k = fc * wgk[7];
    cplx gs = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const cplx f1 = g(c - dx, p.map, p.origin);
        const cplx f2 = g(c + dx, p.map, p.origin);
        k += (f1 + f2) * wgk[j];
        if (j % 2 == 1) gs += (f1 + f2) * wg[j / 2];
    }
    p.value = k * h;
    p.err = std::abs((k - gs) * h);
}

} // namespace

cplx erf_complex(cplx w)
{
    if (!(std::abs(w) < 1e6)) throw domain_error("erf_complex: |w| >= 1e6");
    double x = w.real();
    double y = w.imag();
    if (y * y - x * x > 700.0) throw domain_error("erf_complex: result overflows");
    if (std::abs(w) <= 1.5) return erf_series(w);
    // erf(-w) = -erf(w), erf(conj w) = conj erf(w): reduce to x >= 0.
    const bool flip = x < 0.0;
    if (flip) {
        x = -x;
        y = -y;
    }
    const cplx v = erf_as(x, y);
    return flip ? -v : v;
}

cplx integrate_1d(const RealToComplex& f, double lo, double hi, const QuadratureSpec& spec,
                  std::vector<double> breakpoints, double& error_bound)
{
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
        throw domain_error("integrate_1d: tolerances must be positive");
    if (lo == hi) {
        error_bound = 0.0;
        return 0.0;
    }
    double sgn = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sgn = -1.0;
    }

    std::vector<double> pts;
    for (double b : breakpoints)
        if (std::isfinite(b) && b > lo && b < hi) pts.push_back(b);
    if (std::isinf(lo) && std::isinf(hi) && pts.empty()) pts.push_back(0.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<double> edges;
    edges.push_back(lo);
    edges.insert(edges.end(), pts.begin(), pts.end());
    edges.push_back(hi);

    const MappedIntegrand g{f, spec.oscillatory_regulator};
    std::priority_queue<Panel> queue;
    cplx total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        Panel p{};
        if (std::isinf(a)) {
            p = {0.0, pi / 2, Map::left_tail, b, 0.0, 0.0};
        } else if (std::isinf(b)) {
            p = {0.0, pi / 2, Map::right_tail, a, 0.0, 0.0};
        } else {
            p = {a, b, Map::identity, 0.0, 0.0, 0.0};
        }
        gk15(g, p);
        total += p.value;
        err += p.err;
        queue.push(p);
    }

    int subdivisions = 0;
    while (err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "integrate_1d: no convergence after " << spec.max_subdivisions
                << " subdivisions (estimate " << total << ", error bound " << err << ")";
            throw quadrature_error(msg.str(), sgn * total, err);
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel cannot be split further in floating point; keep its estimate.
            err -= worst.err;
            worst.err = 0.0;
            queue.push(worst);
            continue;
        }
        Panel left = worst;
        Panel right = worst;
        left.b = mid;
        right.a = mid;
        gk15(g, left);
        gk15(g, right);
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
        ++subdivisions;
        if (subdivisions % 64 == 0) {
            // Re-sum to avoid drift from incremental updates.
            auto copy = queue;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().err;
                copy.pop();
            }
        }
    }
    error_bound = err;
    return sgn * total;
}

cplx integrate_1d(const RealToComplex& f, double lo, double hi, const QuadratureSpec& spec,
                  std::vector<double> breakpoints)
{
    double err = 0.0;
    return integrate_1d(f, lo, hi, spec, std::move(breakpoints), err);
}

cplx richardson_regulated(const std::function<cplx(double)>& one_rung, double eps0)
{
    const cplx f1 = one_rung(eps0);
    const cplx f2 = one_rung(2.0 * eps0);
    const cplx f4 = one_rung(4.0 * eps0);
    // Cancels the O(e) and O(e^2) terms of f(e) = f0 + c1 e + c2 e^2.
    return (8.0 * f1 - 6.0 * f2 + f4) / 3.0;
}

namespace {

cplx wynn_epsilon(const std::vector<cplx>& s)
{
    std::vector<cplx> prev(s.size(), 0.0);
    std::vector<cplx> cur = s;
    cplx best = s.back();
    int column = 0;
    while (cur.size() > 1) {
        std::vector<cplx> next(cur.size() - 1);
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            const cplx d = cur[j + 1] - cur[j];
            if (d == cplx(0.0)) return (column % 2 == 0) ? cur[j + 1] : best;
            next[j] = prev[j + 1] + 1.0 / d;
        }
        prev = cur;
        cur = next;
        ++column;
        if (column % 2 == 0) best = cur.back();
    }
    return best;
}

} // namespace

cplx fourier_integral(const RealToComplex& g, double alpha, const QuadratureSpec& spec)
{
    const auto folded = [&](double k) {
        return g(k) * std::exp(cplx(0.0, k * alpha)) + g(-k) * std::exp(cplx(0.0, -k * alpha));
    };
    if (alpha == 0.0) return integrate_1d(folded, 0.0, INFINITY, spec) / (2.0 * pi);

    const double period = pi / std::abs(alpha);
    const int chunks = 60;
    std::vector<cplx> partial;
    cplx sum = 0.0;
    for (int j = 0; j < chunks; ++j) {
        sum += integrate_1d(folded, j * period, (j + 1) * period, spec);
        partial.push_back(sum);
    }
    return wynn_epsilon(partial) / (2.0 * pi);
}

TwoByTwo matrix_inv_sqrt(const TwoByTwo& k)
{
    const cplx tr = k.trace();
    const cplx det = k.determinant();
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc);
    const cplx l2 = 0.5 * (tr - disc);
    const double scale = std::max({std::abs(l1), std::abs(l2), 1e-300});
    for (cplx l : {l1, l2}) {
        if (std::abs(l) <= 1e-14 * scale || (std::abs(l.imag()) <= 1e-14 * scale && l.real() <= 0.0))
            throw branch_error("matrix_inv_sqrt: eigenvalue on the closed negative real axis");
    }
    if (std::abs(l1 - l2) <= 1e-10 * scale) {
        const TwoByTwo off = k - 0.5 * tr * TwoByTwo::Identity();
        if (off.norm() > 1e-10 * scale) throw branch_error("matrix_inv_sqrt: defective matrix");
    }
    // sqrt(K) = (K + s I)/t with s = sqrt(l1) sqrt(l2), t = sqrt(l1) + sqrt(l2).
    const cplx r1 = std::sqrt(l1);
    const cplx r2 = std::sqrt(l2);
    const cplx s = r1 * r2;
    const cplx t = r1 + r2;
    const TwoByTwo root = (k + s * TwoByTwo::Identity()) / t;
    return root.inverse();
}

cplx numeric_derivative(const ComplexFn& f, cplx k)
{
    const double h = 1e-3 * std::max(1.0, std::abs(k));
    const auto central = [&](double step) { return (f(k + step) - f(k - step)) / (2.0 * step); };
    return (4.0 * central(h / 2) - central(h)) / 3.0;
}

namespace {

template <class Weight>
cplx contour_integral(const ComplexFn& f, const ComplexFn& df, const ComplexRect& r, Weight weight,
                      const QuadratureSpec& spec)
{
    if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max))
        throw domain_error("contour: degenerate rectangle");
    const std::array<cplx, 4> corners = {cplx(r.re_min, r.im_min), cplx(r.re_max, r.im_min),
                                         cplx(r.re_max, r.im_max), cplx(r.re_min, r.im_max)};
    cplx total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const cplx from = corners[e];
        const cplx step = corners[(e + 1) % 4] - from;
        const auto integrand = [&](double t) {
            const cplx k = from + t * step;
            const cplx fk = f(k);
            const cplx dk = df ? df(k) : numeric_derivative(f, k);
            return weight(k) * dk / fk * step;
        };
        try {
            total += integrate_1d(integrand, 0.0, 1.0, spec);
        } catch (const quadrature_error&) {
            throw contour_too_close_error("contour: integrand unresolved on an edge; zero too close", 0.5);
        }
    }
    return total / cplx(0.0, 2.0 * pi);
}

} // namespace

int count_zeros(const ComplexFn& f, const ComplexRect& rect, const QuadratureSpec& spec,
                const ComplexFn& df)
{
    QuadratureSpec s = spec;
    s.oscillatory_regulator = 0.0;
    const cplx w = contour_integral(f, df, rect, [](cplx) { return cplx(1.0); }, s);
    const double n = std::round(w.real());
    const double residual = std::abs(w - n);
    if (!std::isfinite(residual) || residual >= 0.25) {
        std::ostringstream msg;
        msg << "count_zeros: winding residual " << residual << " >= 0.25; shrink or shift the rectangle";
        throw contour_too_close_error(msg.str(), residual);
    }
    return static_cast<int>(n);
}

cplx contour_moment(const ComplexFn& f, const ComplexFn& df, const ComplexRect& rect,
                    const ComplexFn& g, const QuadratureSpec& spec)
{
    QuadratureSpec s = spec;
    s.oscillatory_regulator = 0.0;
    return contour_integral(f, df, rect, g, s);
}

cplx refine_root(const ComplexFn& f, cplx seed, const ComplexFn& df)
{
    cplx k = seed;
    cplx fk = f(k);
    for (int it = 0; it < 100; ++it) {
        const cplx d = df ? df(k) : numeric_derivative(f, k);
        if (std::abs(fk) <= 1e-10 * std::max(1.0, std::abs(d) * std::abs(k))) {
            // A couple of polishing steps, kept only while they help.
            for (int p = 0; p < 3 && d != cplx(0.0); ++p) {
                const cplx dd = df ? df(k) : numeric_derivative(f, k);
                if (dd == cplx(0.0)) break;
                const cplx kn = k - fk / dd;
                const cplx fn = f(kn);
                if (!(std::abs(fn) < std::abs(fk))) break;
                k = kn;
                fk = fn;
            }
            return k;
        }
        if (d == cplx(0.0) || !std::isfinite(std::abs(d))) break;
        cplx step = fk / d;
        cplx kn = k - step;
        cplx fn = f(kn);
        int halvings = 0;
        while (!(std::abs(fn) < std::abs(fk)) && halvings < 30) {
            step *= 0.5;
            kn = k - step;
            fn = f(kn);
            ++halvings;
        }
        k = kn;
        fk = fn;
        if (!std::isfinite(std::abs(k))) break;
    }
    throw no_convergence_error("refine_root: no convergence within 100 iterations");
}

} // namespace ddm
