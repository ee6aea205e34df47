#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ddm/numerics.hpp"

namespace ddm {

using Matrix = Eigen::MatrixXcd;

struct PerturbedOperator {
    Matrix h0;
    std::vector<Matrix> generators;
    std::vector<cplx> couplings;

    Matrix full() const;                // H0 + sum z_i H_i
    Matrix first_order() const;         // sum z_i H_i
    Matrix hermitian_part() const;      // sum Re(z_i) H_i
    Matrix antihermitian_part() const;  // i sum Im(z_i) H_i
};

struct SolverTolerances {
    double gap = 1e-8;
    double first_order_diagonal = 1e-10;
    double solvability = 1e-8;
};

Matrix solve_q1(const PerturbedOperator& p, const SolverTolerances& tol = {});
Matrix solve_q2(const PerturbedOperator& p, const Matrix& q1, const SolverTolerances& tol = {});

// Largest |diagonal| of R = -[H1, Q1] - [[H0, Q1], Q1]/2 in the H0 eigenbasis.
double solvability_defect(const PerturbedOperator& p, const Matrix& q1);

// h = H0 + H_h + [H_ah, Q1]/4.
Matrix equivalent_h(const PerturbedOperator& p, const Matrix& q1);

// O = o - ([o,Q1] + [o,Q2] - [[o,Q1],Q1]/4)/2.
Matrix map_observable(const Matrix& o, const Matrix& q1, const Matrix& q2);

// exp(-Q1 - Q2).
Matrix eta_from_q(const Matrix& q1, const Matrix& q2);

// exp(s Q) for Hermitian Q.
Matrix hermitian_exp(const Matrix& q, double s);

// rho H rho^{-1} with rho = exp(-(Q1+Q2)/2).
Matrix similarity_h(const PerturbedOperator& p, const Matrix& q1, const Matrix& q2);

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

} // namespace ddm
