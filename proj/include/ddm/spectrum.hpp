#pragma once

#include <string>
#include <vector>

#include "ddm/model.hpp"

namespace ddm {

enum class ScanMode { antisymmetric, pt_symmetric, general };

struct ScanCell {
    double r = 0.0;
    double s = 0.0;
    int n_bound = 0;
    int n_bound_real_energy = 0;
    std::vector<double> spectral_singularities;
    bool quasi_hermitian = false;
    std::string status = "ok";  // "ok" or the error message for this cell
};

struct BoundStates {
    int total = 0;
    int real_energy = 0;
    std::vector<cplx> roots;
};

struct SpectrumOptions {
    double k_max = 20.0;
    double k_min_cut = 1e-3;
    double real_energy_tol = 1e-8;
    // Partner coupling z- in general mode.
    cplx general_partner = 0.0;
    // Worker threads for scan_region; 0 selects the hardware concurrency.
    unsigned threads = 0;
};

std::vector<double> find_spectral_singularities(const Couplings& c, double k_max,
                                                double k_min_cut = 1e-3);

ComplexRect default_bound_rect(const Couplings& c);

BoundStates count_bound_states(const Couplings& c, const ComplexRect& rect,
                               double real_energy_tol = 1e-8);
BoundStates count_bound_states(const Couplings& c);

// (r, s) -> couplings for each scan mode.
Couplings couplings_for(ScanMode mode, double r, double s, double a, cplx general_partner = 0.0);

ScanCell scan_cell(ScanMode mode, double r, double s, double a, const SpectrumOptions& opt = {});

struct Range {
    double min, max;
};

// Grid of n x n cells, row-major in (s, r): index = i_s * n + i_r.
std::vector<ScanCell> scan_region(ScanMode mode, Range r_range, Range s_range, int n, double a,
                                  const SpectrumOptions& opt = {});

} // namespace ddm
