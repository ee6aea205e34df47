#include "ddm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ddm {

double KernelPrimitive::value(double x, double y) const
{
    const double u = arg(x, y);
    switch (kind) {
    case PrimKind::Const:
        return 1.0;
    case PrimKind::Sign:
        return sign(u);
    case PrimKind::Heaviside:
        return theta(u);
    case PrimKind::ExpAbs:
        return std::exp(-rate * std::abs(u));
    case PrimKind::Abs:
        return std::abs(u);
    case PrimKind::Linear:
        return u;
    case PrimKind::Dirac:
        break;
    }
    throw singular_point_error("Dirac factor has no pointwise value");
}

WaveFunction gaussian_wave(double sigma, double k0, double x0)
{
    if (!(sigma > 0.0)) throw domain_error("gaussian_wave: sigma must be positive");
    const double norm = std::pow(pi * sigma * sigma, -0.25);
    const double s2 = sigma * sigma;
    const auto v = [=](double x) {
        const double d = x - x0;
        return norm * std::exp(cplx(-d * d / (2.0 * s2), k0 * x));
    };
    const auto d1 = [=](double x) { return cplx(-(x - x0) / s2, k0) * v(x); };
    const auto d2 = [=](double x) {
        const cplx q(-(x - x0) / s2, k0);
        return (q * q - 1.0 / s2) * v(x);
    };
    return {v, d1, d2};
}

namespace {

bool is_dirac(const KernelPrimitive& p) { return p.kind == PrimKind::Dirac; }

double arg_scale(double x, double y) { return 1e-13 * (1.0 + std::abs(x) + std::abs(y)); }

// Product of all non-Dirac factors.
double rest_value(const KernelTerm& t, double x, double y)
{
    double v = 1.0;
    for (const auto& f : t.factors)
        if (!is_dirac(f)) v *= f.value(x, y);
    return v;
}

// True when some step factor vanishes at (x, y): the piece containing the
// point contributes nothing.
bool step_closed(const KernelTerm& t, double x, double y)
{
    for (const auto& f : t.factors)
        if (f.kind == PrimKind::Heaviside && f.arg(x, y) < 0.0) return true;
    return false;
}

std::vector<double> sorted_unique(std::vector<double> v)
{
    v.erase(std::remove_if(v.begin(), v.end(), [](double b) { return !std::isfinite(b); }), v.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

double representative(double lo, double hi)
{
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi - 1.0;
    if (std::isinf(hi)) return lo + 1.0;
    return 0.5 * (lo + hi);
}

// Integrate h over the real line split at `cuts`; pieces for which `closed`
// holds at their representative point are skipped.
template <class H, class Closed>
cplx piecewise_line(const H& h, std::vector<double> cuts, const Closed& closed, const QuadratureSpec& spec)
{
    cuts = sorted_unique(std::move(cuts));
    std::vector<double> edges;
    edges.push_back(-INFINITY);
    edges.insert(edges.end(), cuts.begin(), cuts.end());
    edges.push_back(INFINITY);
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i];
        const double hi = edges[i + 1];
        if (closed(representative(lo, hi))) continue;
        total += integrate_1d(h, lo, hi, spec);
    }
    return total;
}

QuadratureSpec inner_spec(const QuadratureSpec& s)
{
    QuadratureSpec q = s;
    q.abs_tol = s.abs_tol * 0.01;
    q.oscillatory_regulator = 0.0;
    return q;
}

// Integral over y of rest(x, y) g(y) for a Dirac-free term at fixed x.
cplx integrate_over_y(const KernelTerm& t, double x, const WaveFunction& g, const QuadratureSpec& spec,
                      const std::vector<double>& hints)
{
    std::vector<double> cuts = hints;
    for (const auto& f : t.factors)
        if (f.arg.cy != 0.0 && f.kind != PrimKind::Const) cuts.push_back(-(f.arg.cx * x + f.arg.shift) / f.arg.cy);
    return piecewise_line([&](double y) { return rest_value(t, x, y) * g(y); }, cuts,
                          [&](double y) { return step_closed(t, x, y); }, spec);
}

std::vector<const KernelPrimitive*> diracs_of(const KernelTerm& t)
{
    std::vector<const KernelPrimitive*> d;
    for (const auto& f : t.factors)
        if (is_dirac(f)) d.push_back(&f);
    return d;
}

cplx pair_term(const KernelTerm& t, const WaveFunction& bra, const WaveFunction& ket,
               const QuadratureSpec& spec, const std::vector<double>& hints)
{
    const auto d = diracs_of(t);
    if (d.size() > 2) throw domain_error("kernel term with more than two Dirac factors");

    if (d.empty()) {
        std::vector<double> cuts = hints;
        std::vector<const KernelPrimitive*> lines;
        for (const auto& f : t.factors) {
            if (f.kind == PrimKind::Const) continue;
            if (f.arg.cy == 0.0) {
                if (f.arg.cx != 0.0) cuts.push_back(-f.arg.shift / f.arg.cx);
            } else {
                lines.push_back(&f);
            }
        }
        for (std::size_t i = 0; i < lines.size(); ++i) {
            for (std::size_t j = i + 1; j < lines.size(); ++j) {
                const LinearArg& p = lines[i]->arg;
                const LinearArg& q = lines[j]->arg;
                const double det = p.cx * q.cy - p.cy * q.cx;
                if (det != 0.0) cuts.push_back((-p.shift * q.cy + q.shift * p.cy) / det);
            }
            for (double h : hints) cuts.push_back(-(lines[i]->arg.cy * h + lines[i]->arg.shift) / lines[i]->arg.cx);
        }
        const QuadratureSpec in = inner_spec(spec);
        return piecewise_line(
            [&](double x) { return std::conj(bra(x)) * integrate_over_y(t, x, ket, in, hints); }, cuts,
            [](double) { return false; }, spec);
    }

    if (d.size() == 1) {
        const LinearArg& u = d[0]->arg;
        if (u.cy != 0.0) {
            const double al = -u.cx / u.cy;
            const double be = -u.shift / u.cy;
            const double w = 1.0 / std::abs(u.cy);
            std::vector<double> cuts = hints;
            for (double h : hints)
                if (al != 0.0) cuts.push_back((h - be) / al);
            for (const auto& f : t.factors) {
                if (is_dirac(f) || f.kind == PrimKind::Const) continue;
                const double c1 = f.arg.cx + f.arg.cy * al;
                const double s1 = f.arg.shift + f.arg.cy * be;
                if (c1 != 0.0) cuts.push_back(-s1 / c1);
            }
            return w * piecewise_line(
                           [&](double x) {
                               const double y = al * x + be;
                               return std::conj(bra(x)) * rest_value(t, x, y) * ket(y);
                           },
                           cuts, [&](double x) { return step_closed(t, x, al * x + be); }, spec);
        }
        if (u.cx == 0.0) throw domain_error("Dirac factor with constant argument");
        const double xs = -u.shift / u.cx;
        return std::conj(bra(xs)) * integrate_over_y(t, xs, ket, spec, hints) / std::abs(u.cx);
    }

    const LinearArg& p = d[0]->arg;
    const LinearArg& q = d[1]->arg;
    const double det = p.cx * q.cy - p.cy * q.cx;
    if (det == 0.0) throw domain_error("parallel Dirac factors");
    const double x = (-p.shift * q.cy + q.shift * p.cy) / det;
    const double y = (-p.cx * q.shift + q.cx * p.shift) / det;
    return std::conj(bra(x)) * rest_value(t, x, y) * ket(y) / std::abs(det);
}

} // namespace

cplx kernel_regular_part(const DistributionalKernel& k, double x, double y)
{
    cplx v = 0.0;
    for (const auto& t : k.terms) {
        if (!diracs_of(t).empty()) continue;
        v += t.coefficient * rest_value(t, x, y);
    }
    return v;
}

cplx kernel_eval(const DistributionalKernel& k, double x, double y)
{
    const bool local = k.identity_coefficient != cplx(0.0) || k.laplacian_coefficient != cplx(0.0) ||
                       k.momentum_coefficient != cplx(0.0);
    if (local && std::abs(x - y) <= arg_scale(x, y))
        throw singular_point_error("kernel_eval: point on the diagonal of a local part");
    for (const auto& t : k.terms)
        for (const auto* d : diracs_of(t))
            if (std::abs(d->arg(x, y)) <= arg_scale(x, y))
                throw singular_point_error("kernel_eval: point on a Dirac support");
    return kernel_regular_part(k, x, y);
}

DistributionalKernel adjoint(const DistributionalKernel& k)
{
    DistributionalKernel out;
    out.identity_coefficient = std::conj(k.identity_coefficient);
    out.laplacian_coefficient = std::conj(k.laplacian_coefficient);
    out.momentum_coefficient = std::conj(k.momentum_coefficient);
    for (const auto& t : k.terms) {
        KernelTerm m;
        m.coefficient = std::conj(t.coefficient);
        for (auto f : t.factors) {
            std::swap(f.arg.cx, f.arg.cy);
            m.factors.push_back(f);
        }
        out.terms.push_back(m);
    }
    return out;
}

DistributionalKernel operator+(const DistributionalKernel& a, const DistributionalKernel& b)
{
    DistributionalKernel out = a;
    out.identity_coefficient += b.identity_coefficient;
    out.laplacian_coefficient += b.laplacian_coefficient;
    out.momentum_coefficient += b.momentum_coefficient;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    return out;
}

DistributionalKernel scaled(const DistributionalKernel& k, cplx factor)
{
    DistributionalKernel out = k;
    out.identity_coefficient *= factor;
    out.laplacian_coefficient *= factor;
    out.momentum_coefficient *= factor;
    for (auto& t : out.terms) t.coefficient *= factor;
    return out;
}

cplx kernel_pair(const DistributionalKernel& k, const WaveFunction& bra, const WaveFunction& ket,
                 const QuadratureSpec& spec, const PairOptions& opt)
{
    cplx total = 0.0;
    const auto& hints = opt.hints;
    const auto never = [](double) { return false; };
    if (k.identity_coefficient != cplx(0.0)) {
        total += k.identity_coefficient *
                 piecewise_line([&](double x) { return std::conj(bra(x)) * ket(x); }, hints, never, spec);
    }
    if (k.laplacian_coefficient != cplx(0.0)) {
        if (!bra.d1 || !ket.d1) throw domain_error("kernel_pair: derivative part needs first derivatives");
        total += k.laplacian_coefficient *
                 piecewise_line([&](double x) { return std::conj(bra.d1(x)) * ket.d1(x); }, hints, never, spec);
    }
    if (k.momentum_coefficient != cplx(0.0)) {
        if (!ket.d1) throw domain_error("kernel_pair: momentum part needs the ket derivative");
        total += k.momentum_coefficient *
                 piecewise_line([&](double x) { return std::conj(bra(x)) * cplx(0.0, -1.0) * ket.d1(x); }, hints,
                                never, spec);
    }
    for (const auto& t : k.terms) {
        if (t.coefficient == cplx(0.0)) continue;
        total += t.coefficient * pair_term(t, bra, ket, spec, hints);
    }
    return total;
}

cplx kernel_apply_regular(const DistributionalKernel& k, const WaveFunction& g, double x,
                          const QuadratureSpec& spec, const PairOptions& opt)
{
    cplx v = k.identity_coefficient * g(x);
    if (k.laplacian_coefficient != cplx(0.0)) {
        if (!g.d2) throw domain_error("kernel_apply: laplacian part needs the second derivative");
        v -= k.laplacian_coefficient * g.d2(x);
    }
    if (k.momentum_coefficient != cplx(0.0)) {
        if (!g.d1) throw domain_error("kernel_apply: momentum part needs the first derivative");
        v += k.momentum_coefficient * cplx(0.0, -1.0) * g.d1(x);
    }
    for (const auto& t : k.terms) {
        if (t.coefficient == cplx(0.0)) continue;
        const auto d = diracs_of(t);
        if (d.empty()) {
            v += t.coefficient * integrate_over_y(t, x, g, spec, opt.hints);
        } else if (d.size() == 1 && d[0]->arg.cy != 0.0) {
            const LinearArg& u = d[0]->arg;
            const double y = -(u.cx * x + u.shift) / u.cy;
            v += t.coefficient * rest_value(t, x, y) * g(y) / std::abs(u.cy);
        }
        // Remaining Dirac structures are delta functions in x.
    }
    return v;
}

std::vector<std::pair<double, cplx>> kernel_apply_deltas(const DistributionalKernel& k,
                                                         const WaveFunction& g, const QuadratureSpec& spec,
                                                         const PairOptions& opt)
{
    std::vector<std::pair<double, cplx>> out;
    const auto add = [&](double loc, cplx w) {
        for (auto& e : out) {
            if (std::abs(e.first - loc) <= 1e-12 * (1.0 + std::abs(loc))) {
                e.second += w;
                return;
            }
        }
        out.emplace_back(loc, w);
    };
    for (const auto& t : k.terms) {
        if (t.coefficient == cplx(0.0)) continue;
        const auto d = diracs_of(t);
        if (d.size() == 1 && d[0]->arg.cy == 0.0) {
            const LinearArg& u = d[0]->arg;
            const double xs = -u.shift / u.cx;
            add(xs, t.coefficient * integrate_over_y(t, xs, g, spec, opt.hints) / std::abs(u.cx));
        } else if (d.size() == 2) {
            const KernelPrimitive* first = d[0]->arg.cy != 0.0 ? d[0] : d[1];
            const KernelPrimitive* second = (first == d[0]) ? d[1] : d[0];
            if (first->arg.cy == 0.0) throw domain_error("kernel_apply: two Dirac factors in x alone");
            const double al = -first->arg.cx / first->arg.cy;
            const double be = -first->arg.shift / first->arg.cy;
            const double c1 = second->arg.cx + second->arg.cy * al;
            const double s1 = second->arg.shift + second->arg.cy * be;
            if (c1 == 0.0) throw domain_error("kernel_apply: parallel Dirac factors");
            const double xs = -s1 / c1;
            const double ys = al * xs + be;
            add(xs, t.coefficient * rest_value(t, xs, ys) * g(ys) / (std::abs(first->arg.cy) * std::abs(c1)));
        } else if (d.size() > 2) {
            throw domain_error("kernel term with more than two Dirac factors");
        }
    }
    return out;
}

cplx kernel_compose_pair(const DistributionalKernel& k1, const DistributionalKernel& k2,
                         const WaveFunction& f, const WaveFunction& g, const QuadratureSpec& spec,
                         const PairOptions& opt)
{
    const DistributionalKernel k1a = adjoint(k1);
    const QuadratureSpec in = inner_spec(spec);
    if (!kernel_apply_deltas(k1a, f, in, opt).empty() || !kernel_apply_deltas(k2, g, in, opt).empty())
        throw domain_error("kernel_compose_pair: intermediate function carries delta functions");
    std::vector<double> cuts = opt.hints;
    for (const auto* k : {&k1a, &k2})
        for (const auto& t : k->terms)
            for (const auto& p : t.factors)
                if (p.arg.cx != 0.0 && p.kind != PrimKind::Const) cuts.push_back(-p.arg.shift / p.arg.cx);
    return piecewise_line(
        [&](double x) {
            return std::conj(kernel_apply_regular(k1a, f, x, in, opt)) * kernel_apply_regular(k2, g, x, in, opt);
        },
        cuts, [](double) { return false; }, spec);
}

std::string kind_name(PrimKind k)
{
    switch (k) {
    case PrimKind::Const:
        return "Const";
    case PrimKind::Sign:
        return "Sign";
    case PrimKind::Heaviside:
        return "Heaviside";
    case PrimKind::Dirac:
        return "Dirac";
    case PrimKind::ExpAbs:
        return "ExpAbs";
    case PrimKind::Abs:
        return "Abs";
    case PrimKind::Linear:
        return "Linear";
    }
    return "?";
}

std::string argument_label(const LinearArg& u)
{
    const auto part = [](double c, const char* name, bool first) {
        std::ostringstream s;
        if (c == 0.0) return std::string();
        if (c == 1.0) s << (first ? "" : "+") << name;
        else if (c == -1.0) s << "-" << name;
        else s << (c > 0 && !first ? "+" : "") << c << "*" << name;
        return s.str();
    };
    std::string out = part(u.cx, "x", true);
    out += part(u.cy, "y", out.empty());
    if (out.empty()) out = "1";
    return out;
}

std::string kernel_to_json(const DistributionalKernel& k, int indent)
{
    using nlohmann::json;
    const auto c2j = [](cplx c) { return json::array({c.real(), c.imag()}); };
    json j;
    j["identity_coefficient"] = c2j(k.identity_coefficient);
    j["laplacian_coefficient"] = c2j(k.laplacian_coefficient);
    j["momentum_coefficient"] = c2j(k.momentum_coefficient);
    j["terms"] = json::array();
    for (const auto& t : k.terms) {
        json jt;
        jt["coefficient"] = c2j(t.coefficient);
        jt["factors"] = json::array();
        for (const auto& f : t.factors) {
            json jf;
            jf["kind"] = kind_name(f.kind);
            jf["argument"] = argument_label(f.arg);
            jf["cx"] = f.arg.cx;
            jf["cy"] = f.arg.cy;
            jf["shift"] = f.arg.shift;
            jf["rate"] = f.rate;
            jt["factors"].push_back(jf);
        }
        j["terms"].push_back(jt);
    }
    return j.dump(indent);
}

} // namespace ddm
