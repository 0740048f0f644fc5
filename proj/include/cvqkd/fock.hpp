#pragma once

// Truncated-Fock-basis density operators and the trace distance between
// them, double precision. The extended-precision route used for the
// preparation-error figures lives in highprec.hpp; this path serves the
// general API and cross-checks it.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "cvqkd/constellation.hpp"

namespace cvqkd {

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncatedState {
    int dim = 0;  // n_max + 1
    Eigen::MatrixXcd matrix;
    double trace_defect = 0.0;  // |1 - trace| mass lost to truncation
};

// Rank-1 projector onto the truncated coherent state c_n = e^{-|a|^2/2} a^n/sqrt(n!).
// Throws TruncationError when the Poisson tail beyond n_max exceeds trunc_tol.
TruncatedState coherent_state(std::complex<double> alpha, int n_max,
                              double trunc_tol = 1e-9);

// Mixture sum_k P_k |alpha_k><alpha_k| with alpha_k = (scale/sqrt(2))(p_k + i q_k),
// so the ensemble mean photon number is modulation_variance()/2.
TruncatedState ensemble_density(const ConstellationSpec& spec, int n_max,
                                double trunc_tol = 1e-9);

// Geometric-law diagonal nbar^n/(nbar+1)^(n+1); not renormalized, the tail is
// reported as trace_defect.
TruncatedState thermal_state(double nbar, int n_max);

// D = 1/2 sum |eig(rho - sigma)|. Throws std::invalid_argument on dim mismatch.
double trace_distance(const TruncatedState& rho, const TruncatedState& sigma);

double mean_photon_number(const TruncatedState& state);

// Hermiticity / positivity / trace checks from the type's invariants.
bool is_valid_state(const TruncatedState& state, double herm_tol = 1e-12,
                    double eig_tol = 1e-10);

}  // namespace cvqkd
