#pragma once

#include <Eigen/Dense>

#include "ddm/kernel.hpp"
#include "ddm/model.hpp"

namespace ddm {

// Uniform grid on [-L, L] with N nodes (Dirichlet ends); -d^2/dx^2 by the
// three-point stencil and point interactions as normalized Gaussians.
struct GridModel {
    Eigen::VectorXd x;
    double h = 0.0;
    Eigen::MatrixXcd kinetic;      // -D2
    Eigen::MatrixXcd delta_plus;   // diag of the regularized delta(x - a)
    Eigen::MatrixXcd delta_minus;  // diag of the regularized delta(x + a)
};

GridModel grid_model(double a, double half_length, int nodes, double width);

Eigen::MatrixXcd grid_hamiltonian(const GridModel& g, const Couplings& c);

// identity_coefficient * I + h * (regular part sampled at the nodes).
Eigen::MatrixXcd sample_kernel(const DistributionalKernel& k, const GridModel& g);

// Central-difference momentum -i D1.
Eigen::MatrixXcd grid_momentum(const GridModel& g);

} // namespace ddm
