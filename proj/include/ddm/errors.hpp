#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ddm {

// Base of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class domain_error : public error {
public:
    using error::error;
};

// Adaptive quadrature ran out of subdivisions.
class quadrature_error : public error {
public:
    quadrature_error(const std::string& what, std::complex<double> estimate, double error_bound)
        : error(what), estimate_(estimate), error_bound_(error_bound) {}
    std::complex<double> estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    std::complex<double> estimate_;
    double error_bound_;
};

class branch_error : public error {
public:
    using error::error;
};

class no_convergence_error : public error {
public:
    using error::error;
};

class contour_too_close_error : public error {
public:
    contour_too_close_error(const std::string& what, double residual)
        : error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// k = 0 passed to a routine with 1/k factors.
class singularity_error : public error {
public:
    using error::error;
};

// Pointwise kernel evaluation on a Dirac support.
class singular_point_error : public error {
public:
    using error::error;
};

// Couplings outside the class for which a construction exists.
class unsupported_class_error : public error {
public:
    using error::error;
};

class degeneracy_error : public error {
public:
    using error::error;
};

class non_quasi_hermitian_error : public error {
public:
    using error::error;
};

// Second-order solvability condition violated.
class inconsistency_error : public error {
public:
    using error::error;
};

} // namespace ddm
