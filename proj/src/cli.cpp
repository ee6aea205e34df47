#include "ddm/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddm/hermitianize.hpp"
#include "ddm/metric.hpp"
#include "ddm/spectrum.hpp"
#include "ddm/verify.hpp"

namespace ddm::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& text, char sep)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw UsageError("not a number: '" + part + "' in '" + text + "'");
        }
        if (used != part.size()) throw UsageError("not a number: '" + part + "' in '" + text + "'");
        out.push_back(v);
    }
    return out;
}

Range parse_range(const std::string& text)
{
    const auto v = split_numbers(text, ':');
    if (v.size() != 2 || !(v[0] <= v[1])) throw UsageError("expected MIN:MAX with MIN <= MAX, got '" + text + "'");
    return {v[0], v[1]};
}

struct Sampling {
    double min, max;
    int n;
    double at(int i) const { return n == 1 ? min : min + (max - min) * i / (n - 1); }
};

Sampling parse_sampling(const std::string& text)
{
    const auto v = split_numbers(text, ':');
    if (v.size() != 3 || !(v[0] <= v[1]) || v[2] < 1 || v[2] != std::floor(v[2]))
        throw UsageError("expected MIN:MAX:N with MIN <= MAX and N >= 1, got '" + text + "'");
    return {v[0], v[1], static_cast<int>(v[2])};
}

std::string num(double v)
{
    if (std::isnan(v)) return "";
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    return f;
}

void write_sidecar(const std::string& path, const nlohmann::json& meta)
{
    auto f = open_out(path + ".meta.json");
    f << meta.dump(2) << "\n";
    if (!f) throw std::ios_base::failure("write failed: " + path + ".meta.json");
}

// Dimensionful mode needs all three of mass, hbar and length.
struct Units {
    std::optional<double> mass, hbar, length;

    bool active() const { return mass || hbar || length; }
    PhysicalContext context() const
    {
        if (!(mass && hbar && length)) throw UsageError("dimensionful mode needs --mass, --hbar and --length together");
        if (!(*mass > 0.0 && *hbar > 0.0 && *length > 0.0)) throw UsageError("--mass, --hbar and --length must be positive");
        PhysicalContext ctx;
        ctx.mass = *mass;
        ctx.hbar = *hbar;
        ctx.length_scale = *length;
        return ctx;
    }
};

ScanMode parse_mode(const std::string& m)
{
    if (m == "antisym") return ScanMode::antisymmetric;
    if (m == "pt") return ScanMode::pt_symmetric;
    if (m == "general") return ScanMode::general;
    throw UsageError("unknown mode '" + m + "'");
}

struct ScanArgs {
    std::string mode = "antisym";
    std::string r = "-1:1";
    std::string s = "-1:1";
    int n = 21;
    double a = 1.0;
    double partner_re = 0.0;
    double partner_im = 0.0;
    double k_max = 20.0;
    unsigned threads = 0;
    std::string out;
};

int run_scan(const ScanArgs& args, std::ostream& out)
{
    const ScanMode mode = parse_mode(args.mode);
    const Range r = parse_range(args.r);
    const Range s = parse_range(args.s);
    if (args.n < 2) throw UsageError("--n must be >= 2");
    if (!(args.a > 0.0)) throw UsageError("--a must be positive");
    SpectrumOptions opt;
    opt.k_max = args.k_max;
    opt.threads = args.threads;
    opt.general_partner = cplx(args.partner_re, args.partner_im);

    const auto cells = scan_region(mode, r, s, args.n, args.a, opt);

    auto f = open_out(args.out);
    f << "r,s,n_bound,n_bound_real,n_spectral_singularities,quasi_hermitian,spectral_singularities,status\n";
    int failed = 0;
    for (const auto& c : cells) {
        std::string ks;
        for (std::size_t i = 0; i < c.spectral_singularities.size(); ++i)
            ks += (i ? ";" : "") + num(c.spectral_singularities[i]);
        std::string status = c.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n') ch = ' ';
        if (c.status != "ok") ++failed;
        f << num(c.r) << "," << num(c.s) << "," << c.n_bound << "," << c.n_bound_real_energy << ","
          << c.spectral_singularities.size() << "," << (c.quasi_hermitian ? "true" : "false") << "," << ks << ","
          << status << "\n";
    }
    if (!f) throw std::ios_base::failure("write failed: " + args.out);

    write_sidecar(args.out, {{"command", "scan"},
                             {"mode", args.mode},
                             {"r", {r.min, r.max}},
                             {"s", {s.min, s.max}},
                             {"n", args.n},
                             {"a", args.a},
                             {"partner", {args.partner_re, args.partner_im}},
                             {"k_max", args.k_max},
                             {"order", "row-major in (s, r): row = i_s * n + i_r"},
                             {"failed_cells", failed}});
    out << "scan: " << cells.size() << " cells written to " << args.out;
    if (failed) out << " (" << failed << " cells with errors, see status column)";
    out << "\n";
    return ExitCode::ok;
}

struct EnergyArgs {
    double sigma = 1.5;
    double k = 0.0;
    double x0 = 0.0;
    double re_z = 0.0;
    double im_z = 0.0;
    std::optional<double> re_z_minus;
    std::optional<double> im_z_minus;
    double a = 1.0;
    std::string sweep;
    std::string out;
    Units units;
};

int run_energy(const EnergyArgs& args, std::ostream& out)
{
    // In dimensionful mode the coupling flags are zeta+- and lengths are in the
    // units of --length; everything is converted before computing.
    double scale_len = 1.0, scale_e = 1.0;
    cplx zp(args.re_z, args.im_z);
    cplx zm(args.re_z_minus.value_or(-args.re_z), args.im_z_minus.value_or(-args.im_z));
    double a = args.a;
    if (args.units.active()) {
        PhysicalContext ctx = args.units.context();
        ctx.alpha = args.a;
        ctx.zeta_plus = zp;
        ctx.zeta_minus = zm;
        const Couplings c = nondimensionalize(ctx);
        zp = c.z_plus;
        zm = c.z_minus;
        a = c.a;
        scale_len = ctx.length_scale;
        scale_e = energy_unit(ctx);
    }
    if (!(a > 0.0)) throw UsageError("--a must be positive");
    const Couplings c{zp, zm, a};
    require_hermitianizable(c);

    GaussianPacket base{args.sigma / scale_len, args.k * scale_len, args.x0 / scale_len};
    std::string var = "none";
    Sampling sw{0.0, 0.0, 1};
    if (!args.sweep.empty()) {
        const auto eq = args.sweep.find('=');
        if (eq == std::string::npos) throw UsageError("--sweep expects VAR=MIN:MAX:STEPS");
        var = args.sweep.substr(0, eq);
        if (var != "sigma" && var != "k" && var != "x0") throw UsageError("--sweep variable must be sigma, k or x0");
        sw = parse_sampling(args.sweep.substr(eq + 1));
    }
    if (!(base.sigma > 0.0) && var != "sigma") throw UsageError("--sigma must be positive");

    auto f = open_out(args.out);
    f << "sigma,k0,x0,kinetic,local,nonlocal,total,closed_form,closed_kinetic,closed_local,closed_nonlocal,"
         "closed_total,U,W,difference\n";
    for (int i = 0; i < sw.n; ++i) {
        GaussianPacket p = base;
        if (var == "sigma") p.sigma = sw.at(i) / scale_len;
        if (var == "k") p.k0 = sw.at(i) * scale_len;
        if (var == "x0") p.x0 = sw.at(i) / scale_len;
        if (!(p.sigma > 0.0)) throw UsageError("sigma must be positive throughout the sweep");

        const EnergyBreakdown q = energy_quadrature(c, p);
        std::optional<EnergyBreakdown> cf;
        std::string kind = "none";
        double uu = NAN, ww = NAN;
        if (p.x0 == 0.0) {
            cf = energy_gaussian_moving(c, p.sigma, p.k0);
            kind = "moving";
            uu = u_fn(a, p.sigma, p.k0);
        } else if (p.k0 == 0.0) {
            cf = energy_gaussian_shifted(c, p.sigma, p.x0);
            kind = "shifted";
        }
        if (p.k0 == 0.0) ww = w_fn(a, p.sigma, p.x0);
        const auto e = [&](double v) { return num(v * scale_e); };
        f << num(p.sigma * scale_len) << "," << num(p.k0 / scale_len) << "," << num(p.x0 * scale_len) << ","
          << e(q.kinetic) << "," << e(q.local_potential) << "," << e(q.nonlocal) << "," << e(q.total) << ","
          << kind << ",";
        if (cf)
            f << e(cf->kinetic) << "," << e(cf->local_potential) << "," << e(cf->nonlocal) << "," << e(cf->total);
        else
            f << ",,,";
        f << "," << num(uu) << "," << num(ww) << "," << (cf ? e(cf->total - q.total) : std::string()) << "\n";
    }
    if (!f) throw std::ios_base::failure("write failed: " + args.out);

    write_sidecar(args.out, {{"command", "energy"},
                             {"z_plus", {zp.real(), zp.imag()}},
                             {"z_minus", {zm.real(), zm.imag()}},
                             {"a", a},
                             {"sweep", args.sweep},
                             {"dimensionful", args.units.active()},
                             {"energy_unit", scale_e},
                             {"rows", sw.n}});
    out << "energy: " << sw.n << " rows written to " << args.out << "\n";
    return ExitCode::ok;
}

struct KernelArgs {
    std::string which = "eta1";
    double a = 1.0;
    double re_z = 0.0;
    double im_z = 0.0;
    std::optional<double> re_z_minus;
    std::optional<double> im_z_minus;
    std::string grid = "-4:4:81";
    double r_plus = 1.0, r_minus = 1.0, eps_plus = 0.0, eps_minus = 0.0, gamma = 1.0;
    std::string out;
};

int run_kernel(const KernelArgs& args, std::ostream& out)
{
    if (!(args.a > 0.0)) throw UsageError("--a must be positive");
    const Couplings c{cplx(args.re_z, args.im_z),
                      cplx(args.re_z_minus.value_or(-args.re_z), args.im_z_minus.value_or(-args.im_z)), args.a};
    const Sampling g = parse_sampling(args.grid);
    DistributionalKernel k;
    if (args.which == "eta1")
        k = eta1_bounded(c);
    else if (args.which == "h")
        k = h_kernel(c);
    else if (args.which == "X")
        k = x_kernel(c);
    else if (args.which == "P")
        k = p_kernel(c);
    else if (args.which == "appendixA") {
        AppendixAParams p;
        p.r_plus = args.r_plus;
        p.r_minus = args.r_minus;
        p.eps_plus = args.eps_plus;
        p.eps_minus = args.eps_minus;
        p.gamma = args.gamma;
        p.a = args.a;
        if (!(p.r_plus > 0.0 && p.r_minus > 0.0 && p.gamma > 0.0))
            throw UsageError("--r-plus, --r-minus and --gamma must be positive");
        k = eta1_appendixA(p);
    } else
        throw UsageError("unknown kernel '" + args.which + "'");

    auto f = open_out(args.out);
    f << "x,y,re,im\n";
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double x = g.at(i), y = g.at(j);
            const cplx v = kernel_regular_part(k, x, y);
            f << num(x) << "," << num(y) << "," << num(v.real()) << "," << num(v.imag()) << "\n";
        }
    if (!f) throw std::ios_base::failure("write failed: " + args.out);
    {
        auto t = open_out(args.out + ".terms.json");
        t << kernel_to_json(k, 2) << "\n";
        if (!t) throw std::ios_base::failure("write failed: " + args.out + ".terms.json");
    }
    write_sidecar(args.out, {{"command", "kernel"},
                             {"which", args.which},
                             {"z_plus", {c.z_plus.real(), c.z_plus.imag()}},
                             {"z_minus", {c.z_minus.real(), c.z_minus.imag()}},
                             {"a", args.a},
                             {"grid", args.grid},
                             {"terms", k.terms.size()},
                             {"sampled", "regular (Dirac-free) part"}});
    out << "kernel: " << args.which << ", " << k.terms.size() << " terms; samples in " << args.out << ", terms in "
        << args.out << ".terms.json\n";
    return ExitCode::ok;
}

int run_inm(int n, int m, double alpha, std::ostream& out)
{
    if (n < 0 || n > 2 || m < 1 || m > 3) throw UsageError("need 0 <= n <= 2 and 1 <= m <= 3");
    const InmValue v = inm(n, m, alpha);
    const cplx q = inm_quadrature(n, m, alpha);
    out << std::setprecision(15);
    out << "I_{" << n << "," << m << "}(" << alpha << ")\n";
    out << "  delta coefficient: " << v.delta_coefficient.real() << " + " << v.delta_coefficient.imag() << "i\n";
    out << "  closed form:       " << v.regular.real() << " + " << v.regular.imag() << "i\n";
    out << "  quadrature:        " << q.real() << " + " << q.imag() << "i\n";
    out << "  difference:        " << std::abs(v.regular - q) << "\n";
    return ExitCode::ok;
}

int run_verify_cmd(const std::string& level, const std::string& json_path, bool mutate, std::ostream& out)
{
    VerifyLevel lv;
    if (level == "fast")
        lv = VerifyLevel::fast;
    else if (level == "full")
        lv = VerifyLevel::full;
    else
        throw UsageError("--level must be fast or full");
    VerifyHooks hooks;
    if (mutate) {
        hooks.eta1 = [](const Couplings& c) {
            DistributionalKernel k = eta1_bounded(c);
            for (auto& t : k.terms) t.coefficient = -t.coefficient;
            return k;
        };
    }
    const VerifyReport r = run_verification(lv, hooks);
    out << r.summary();
    if (!json_path.empty()) {
        auto f = open_out(json_path);
        f << r.to_json(2) << "\n";
        if (!f) throw std::ios_base::failure("write failed: " + json_path);
    }
    return r.passed() ? ExitCode::ok : ExitCode::verification_failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Complex double-delta potential: spectra, metric kernels and energies"};
    app.require_subcommand(1);

    ScanArgs scan;
    auto* sc = app.add_subcommand("scan", "bound states and spectral singularities over a coupling grid");
    sc->add_option("--mode", scan.mode, "antisym | pt | general")->check(CLI::IsMember({"antisym", "pt", "general"}));
    sc->add_option("--r", scan.r, "MIN:MAX");
    sc->add_option("--s", scan.s, "MIN:MAX");
    sc->add_option("--n", scan.n, "grid size per axis");
    sc->add_option("--a", scan.a, "half-separation");
    sc->add_option("--partner-re", scan.partner_re, "Re z- in general mode");
    sc->add_option("--partner-im", scan.partner_im, "Im z- in general mode");
    sc->add_option("--k-max", scan.k_max, "upper end of the spectral-singularity search");
    sc->add_option("--threads", scan.threads, "worker threads (0: all cores)");
    sc->add_option("--out", scan.out, "CSV file")->required();

    EnergyArgs en;
    auto* ec = app.add_subcommand("energy", "Gaussian-packet energy expectation values");
    ec->add_option("--sigma", en.sigma);
    ec->add_option("--k", en.k);
    ec->add_option("--x0", en.x0);
    ec->add_option("--re-z", en.re_z, "Re z+");
    ec->add_option("--im-z", en.im_z, "Im z+");
    ec->add_option("--re-z-minus", en.re_z_minus, "Re z- (default -Re z+)");
    ec->add_option("--im-z-minus", en.im_z_minus, "Im z- (default -Im z+)");
    ec->add_option("--a", en.a);
    ec->add_option("--sweep", en.sweep, "VAR=MIN:MAX:STEPS with VAR in sigma, k, x0");
    ec->add_option("--mass", en.units.mass);
    ec->add_option("--hbar", en.units.hbar);
    ec->add_option("--length", en.units.length);
    ec->add_option("--out", en.out, "CSV file")->required();

    KernelArgs kn;
    auto* kc = app.add_subcommand("kernel", "dump a kernel: term list JSON and sampled regular part");
    kc->add_option("--which", kn.which)->check(CLI::IsMember({"eta1", "h", "X", "P", "appendixA"}));
    kc->add_option("--a", kn.a);
    kc->add_option("--re-z", kn.re_z);
    kc->add_option("--im-z", kn.im_z);
    kc->add_option("--re-z-minus", kn.re_z_minus);
    kc->add_option("--im-z-minus", kn.im_z_minus);
    kc->add_option("--grid", kn.grid, "MIN:MAX:N");
    kc->add_option("--r-plus", kn.r_plus);
    kc->add_option("--r-minus", kn.r_minus);
    kc->add_option("--eps-plus", kn.eps_plus);
    kc->add_option("--eps-minus", kn.eps_minus);
    kc->add_option("--gamma", kn.gamma);
    kc->add_option("--out", kn.out, "CSV file")->required();

    int in_n = 0, in_m = 1;
    double in_alpha = 0.0;
    auto* ic = app.add_subcommand("inm", "closed form and quadrature of I_{n,m}(alpha)");
    ic->add_option("--n", in_n)->required();
    ic->add_option("--m", in_m)->required();
    ic->add_option("--alpha", in_alpha)->required();

    std::string level = "fast", json_path;
    bool mutate = false;
    auto* vc = app.add_subcommand("verify", "run the invariant suites");
    vc->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));
    vc->add_option("--json", json_path);
    vc->add_flag("--inject-eta1-sign-error", mutate, "test fixture: flip the sign of the eta1 correction");

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ExitCode::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ExitCode::ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return ExitCode::usage;
    }

    try {
        if (*sc) return run_scan(scan, out);
        if (*ec) return run_energy(en, out);
        if (*kc) return run_kernel(kn, out);
        if (*ic) return run_inm(in_n, in_m, in_alpha, out);
        if (*vc) return run_verify_cmd(level, json_path, mutate, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return ExitCode::usage;
    } catch (const unsupported_class_error& e) {
        err << "unsupported coupling class: " << e.what() << "\n";
        return ExitCode::unsupported_class;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << "\n";
        return ExitCode::numerical_failure;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return ExitCode::numerical_failure;
    }
    return ExitCode::usage;
}

} // namespace ddm::cli
