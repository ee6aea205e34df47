#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ddm/numerics.hpp"

namespace ddm {

enum class PrimKind { Const, Sign, Heaviside, Dirac, ExpAbs, Abs, Linear };

// Argument u = cx*x + cy*y + shift.
struct LinearArg {
    double cx = 0.0;
    double cy = 0.0;
    double shift = 0.0;
    double operator()(double x, double y) const { return cx * x + cy * y + shift; }
};

struct KernelPrimitive {
    PrimKind kind = PrimKind::Const;
    LinearArg arg;
    double rate = 0.0;  // ExpAbs only: e^{-rate |u|}

    // Regular value; Dirac factors are not evaluable pointwise.
    double value(double x, double y) const;
};

struct KernelTerm {
    cplx coefficient = 0.0;
    std::vector<KernelPrimitive> factors;
};

// identity * delta(x-y) + laplacian * (-d^2/dx^2) delta(x-y)
//   + momentum * (-i d/dx) delta(x-y) + sum of terms.
struct DistributionalKernel {
    cplx identity_coefficient = 0.0;
    cplx laplacian_coefficient = 0.0;
    cplx momentum_coefficient = 0.0;
    std::vector<KernelTerm> terms;
};

// Primitive builders.
namespace prim {
inline LinearArg x(double shift = 0.0) { return {1.0, 0.0, shift}; }
inline LinearArg y(double shift = 0.0) { return {0.0, 1.0, shift}; }
inline LinearArg x_minus_y(double shift = 0.0) { return {1.0, -1.0, shift}; }
inline LinearArg x_plus_y(double shift = 0.0) { return {1.0, 1.0, shift}; }
inline LinearArg neg(LinearArg u) { return {-u.cx, -u.cy, -u.shift}; }
inline KernelPrimitive sign(LinearArg u) { return {PrimKind::Sign, u, 0.0}; }
inline KernelPrimitive step(LinearArg u) { return {PrimKind::Heaviside, u, 0.0}; }
inline KernelPrimitive dirac(LinearArg u) { return {PrimKind::Dirac, u, 0.0}; }
inline KernelPrimitive exp_abs(LinearArg u, double rate) { return {PrimKind::ExpAbs, u, rate}; }
inline KernelPrimitive abs(LinearArg u) { return {PrimKind::Abs, u, 0.0}; }
inline KernelPrimitive linear(LinearArg u) { return {PrimKind::Linear, u, 0.0}; }
} // namespace prim

// Function on the line with optional first and second derivatives.
struct WaveFunction {
    RealToComplex value;
    RealToComplex d1;
    RealToComplex d2;

    WaveFunction() = default;
    WaveFunction(RealToComplex v, RealToComplex first = {}, RealToComplex second = {})
        : value(std::move(v)), d1(std::move(first)), d2(std::move(second)) {}
    cplx operator()(double x) const { return value(x); }
};

// Normalized Gaussian packet (pi s^2)^{-1/4} exp(-(x-x0)^2/(2 s^2) + i k0 x).
WaveFunction gaussian_wave(double sigma, double k0, double x0);

// Pointwise value; throws singular_point_error on a Dirac support or on the
// diagonal when a local (identity/derivative) part is present.
cplx kernel_eval(const DistributionalKernel& k, double x, double y);

// Value of the Dirac-free terms only; defined everywhere.
cplx kernel_regular_part(const DistributionalKernel& k, double x, double y);

DistributionalKernel adjoint(const DistributionalKernel& k);
DistributionalKernel operator+(const DistributionalKernel& a, const DistributionalKernel& b);
DistributionalKernel scaled(const DistributionalKernel& k, cplx factor);

struct PairOptions {
    // Extra breakpoints (applied along x and y) for features of bra or ket.
    std::vector<double> hints;
};

// Integral of conj(bra(x)) k(x,y) ket(y); Dirac factors are integrated out exactly.
cplx kernel_pair(const DistributionalKernel& k, const WaveFunction& bra, const WaveFunction& ket,
                 const QuadratureSpec& spec = {}, const PairOptions& opt = {});

// (K g)(x): the pointwise part at x. Terms with a Dirac factor in x alone
// produce delta functions in x; those are returned by kernel_apply_deltas.
cplx kernel_apply_regular(const DistributionalKernel& k, const WaveFunction& g, double x,
                          const QuadratureSpec& spec = {}, const PairOptions& opt = {});

// Delta contributions of K g as (location, weight) pairs, merged by location.
std::vector<std::pair<double, cplx>> kernel_apply_deltas(const DistributionalKernel& k,
                                                         const WaveFunction& g,
                                                         const QuadratureSpec& spec = {},
                                                         const PairOptions& opt = {});

// <f | K1 K2 | g> = <K1^dagger f | K2 g>; neither product may leave delta functions.
cplx kernel_compose_pair(const DistributionalKernel& k1, const DistributionalKernel& k2,
                         const WaveFunction& f, const WaveFunction& g, const QuadratureSpec& spec = {},
                         const PairOptions& opt = {});

std::string kind_name(PrimKind k);
std::string argument_label(const LinearArg& u);

// nlohmann::json text of the term list.
std::string kernel_to_json(const DistributionalKernel& k, int indent = 2);

} // namespace ddm
