#include "ddm/perturbation.hpp"

#include <cmath>

namespace ddm {

namespace {

void check_shapes(const PerturbedOperator& p)
{
    const auto n = p.h0.rows();
    if (p.h0.cols() != n) throw domain_error("perturbation: H0 must be square");
    if (p.generators.size() != p.couplings.size())
        throw domain_error("perturbation: one coupling per generator");
    for (const auto& g : p.generators)
        if (g.rows() != n || g.cols() != n) throw domain_error("perturbation: generator size mismatch");
    const double scale = std::max(1.0, p.h0.norm());
    if ((p.h0 - p.h0.adjoint()).norm() > 1e-12 * scale) throw domain_error("perturbation: H0 not Hermitian");
    for (const auto& g : p.generators)
        if ((g - g.adjoint()).norm() > 1e-12 * std::max(1.0, g.norm()))
            throw domain_error("perturbation: generator not Hermitian");
}

struct Eigenbasis {
    Eigen::VectorXd e;
    Matrix u;
};

Eigenbasis eigenbasis(const Matrix& h0)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(h0);
    if (es.info() != Eigen::Success) throw no_convergence_error("perturbation: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

} // namespace

Matrix PerturbedOperator::first_order() const
{
    Matrix m = Matrix::Zero(h0.rows(), h0.cols());
    for (std::size_t i = 0; i < generators.size(); ++i) m += couplings[i] * generators[i];
    return m;
}

Matrix PerturbedOperator::full() const { return h0 + first_order(); }

Matrix PerturbedOperator::hermitian_part() const
{
    Matrix m = Matrix::Zero(h0.rows(), h0.cols());
    for (std::size_t i = 0; i < generators.size(); ++i) m += couplings[i].real() * generators[i];
    return m;
}

Matrix PerturbedOperator::antihermitian_part() const
{
    Matrix m = Matrix::Zero(h0.rows(), h0.cols());
    for (std::size_t i = 0; i < generators.size(); ++i) m += cplx(0.0, couplings[i].imag()) * generators[i];
    return m;
}

Matrix solve_q1(const PerturbedOperator& p, const SolverTolerances& tol)
{
    check_shapes(p);
    const Eigenbasis b = eigenbasis(p.h0);
    const Matrix a = b.u.adjoint() * p.antihermitian_part() * b.u;
    const auto n = a.rows();
    Matrix q = Matrix::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        if (std::abs(a(m, m)) > tol.first_order_diagonal)
            throw non_quasi_hermitian_error("solve_q1: anti-Hermitian part has a diagonal element in the H0 eigenbasis");
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == m) continue;
            const double gap = b.e[m] - b.e[k];
            if (std::abs(gap) < tol.gap) {
                if (std::abs(a(m, k)) > tol.first_order_diagonal)
                    throw degeneracy_error("solve_q1: degenerate H0 levels coupled by the anti-Hermitian part");
                continue;
            }
            q(m, k) = -2.0 * a(m, k) / gap;
        }
    }
    return b.u * q * b.u.adjoint();
}

double solvability_defect(const PerturbedOperator& p, const Matrix& q1)
{
    const Eigenbasis b = eigenbasis(p.h0);
    const Matrix r = -commutator(p.first_order(), q1) - 0.5 * commutator(commutator(p.h0, q1), q1);
    const Matrix rb = b.u.adjoint() * r * b.u;
    return rb.diagonal().cwiseAbs().maxCoeff();
}

Matrix solve_q2(const PerturbedOperator& p, const Matrix& q1, const SolverTolerances& tol)
{
    check_shapes(p);
    const Eigenbasis b = eigenbasis(p.h0);
    const Matrix r = -commutator(p.first_order(), q1) - 0.5 * commutator(commutator(p.h0, q1), q1);
    const Matrix rb = b.u.adjoint() * r * b.u;
    const auto n = rb.rows();
    Matrix q = Matrix::Zero(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        if (std::abs(rb(m, m)) > tol.solvability)
            throw inconsistency_error("solve_q2: second-order solvability condition violated");
        for (Eigen::Index k = 0; k < n; ++k) {
            if (k == m) continue;
            const double gap = b.e[m] - b.e[k];
            if (std::abs(gap) < tol.gap) {
                if (std::abs(rb(m, k)) > tol.solvability)
                    throw degeneracy_error("solve_q2: degenerate H0 levels coupled at second order");
                continue;
            }
            q(m, k) = rb(m, k) / gap;
        }
    }
    return b.u * q * b.u.adjoint();
}

Matrix equivalent_h(const PerturbedOperator& p, const Matrix& q1)
{
    return p.h0 + p.hermitian_part() + 0.25 * commutator(p.antihermitian_part(), q1);
}

Matrix map_observable(const Matrix& o, const Matrix& q1, const Matrix& q2)
{
    return o - 0.5 * (commutator(o, q1) + commutator(o, q2) - 0.25 * commutator(commutator(o, q1), q1));
}

Matrix hermitian_exp(const Matrix& q, double s)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (q + q.adjoint()));
    if (es.info() != Eigen::Success) throw no_convergence_error("hermitian_exp: eigensolver failed");
    const Eigen::VectorXd ex = (s * es.eigenvalues().array()).exp();
    return es.eigenvectors() * ex.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix eta_from_q(const Matrix& q1, const Matrix& q2) { return hermitian_exp(q1 + q2, -1.0); }

Matrix similarity_h(const PerturbedOperator& p, const Matrix& q1, const Matrix& q2)
{
    const Matrix q = q1 + q2;
    return hermitian_exp(q, -0.5) * p.full() * hermitian_exp(q, 0.5);
}

} // namespace ddm
