#include "ddm/grid.hpp"

#include <cmath>

namespace ddm {

GridModel grid_model(double a, double half_length, int nodes, double width)
{
    if (nodes < 3 || !(half_length > 0.0) || !(width > 0.0)) throw domain_error("grid_model: bad grid");
    GridModel g;
    g.x = Eigen::VectorXd::LinSpaced(nodes, -half_length, half_length);
    g.h = g.x[1] - g.x[0];
    const double h2 = g.h * g.h;
    g.kinetic = Eigen::MatrixXcd::Zero(nodes, nodes);
    g.delta_plus = Eigen::MatrixXcd::Zero(nodes, nodes);
    g.delta_minus = Eigen::MatrixXcd::Zero(nodes, nodes);
    const double norm = 1.0 / (width * std::sqrt(2.0 * pi));
    for (int i = 0; i < nodes; ++i) {
        g.kinetic(i, i) = 2.0 / h2;
        if (i > 0) g.kinetic(i, i - 1) = -1.0 / h2;
        if (i + 1 < nodes) g.kinetic(i, i + 1) = -1.0 / h2;
        const double up = g.x[i] - a;
        const double dn = g.x[i] + a;
        g.delta_plus(i, i) = norm * std::exp(-up * up / (2.0 * width * width));
        g.delta_minus(i, i) = norm * std::exp(-dn * dn / (2.0 * width * width));
    }
    return g;
}

Eigen::MatrixXcd grid_hamiltonian(const GridModel& g, const Couplings& c)
{
    return g.kinetic + c.z_plus * g.delta_plus + c.z_minus * g.delta_minus;
}

Eigen::MatrixXcd sample_kernel(const DistributionalKernel& k, const GridModel& g)
{
    const int n = static_cast<int>(g.x.size());
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g.h * kernel_regular_part(k, g.x[i], g.x[j]);
    m += k.identity_coefficient * Eigen::MatrixXcd::Identity(n, n);
    return m;
}

Eigen::MatrixXcd grid_momentum(const GridModel& g)
{
    const int n = static_cast<int>(g.x.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    const cplx c(0.0, -1.0 / (2.0 * g.h));
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) p(i, i + 1) = c;
        if (i > 0) p(i, i - 1) = -c;
    }
    return p;
}

} // namespace ddm
