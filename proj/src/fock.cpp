#include "cvqkd/fock.hpp"

#include <cmath>

namespace cvqkd {

namespace {

// Truncated coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!).
Eigen::VectorXcd coherent_amplitudes(std::complex<double> alpha, int n_max) {
    Eigen::VectorXcd c(n_max + 1);
    const double n2 = std::norm(alpha);
    c(0) = std::exp(-0.5 * n2);
    for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / std::sqrt(double(n));
    return c;
}

}  // namespace

TruncatedState coherent_state(std::complex<double> alpha, int n_max, double trunc_tol) {
    if (n_max < 1) throw std::invalid_argument("coherent_state: n_max must be >= 1");
    const Eigen::VectorXcd c = coherent_amplitudes(alpha, n_max);
    const double captured = c.squaredNorm();
    TruncatedState st;
    st.dim = n_max + 1;
    st.matrix = c * c.adjoint();
    st.trace_defect = std::max(0.0, 1.0 - captured);
    if (st.trace_defect > trunc_tol)
        throw TruncationError("coherent_state: Poisson tail " +
                              std::to_string(st.trace_defect) + " exceeds tolerance at |alpha|^2=" +
                              std::to_string(std::norm(alpha)));
    return st;
}

TruncatedState ensemble_density(const ConstellationSpec& spec, int n_max,
                                double trunc_tol) {
    if (n_max < 1) throw std::invalid_argument("ensemble_density: n_max must be >= 1");
    const double a = spec.scale / std::sqrt(2.0);  // n̄ = V_A/2 convention
    TruncatedState st;
    st.dim = n_max + 1;
    st.matrix = Eigen::MatrixXcd::Zero(st.dim, st.dim);
    double captured = 0.0;
    for (std::size_t k = 0; k < spec.points.size(); ++k) {
        const Eigen::VectorXcd c = coherent_amplitudes(a * spec.points[k], n_max);
        st.matrix.noalias() += spec.probs[k] * (c * c.adjoint());
        captured += spec.probs[k] * c.squaredNorm();
    }
    st.trace_defect = std::max(0.0, 1.0 - captured);
    if (st.trace_defect > trunc_tol)
        throw TruncationError("ensemble_density: truncation defect " +
                              std::to_string(st.trace_defect) + " exceeds tolerance");
    return st;
}

TruncatedState thermal_state(double nbar, int n_max) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    if (n_max < 1) throw std::invalid_argument("thermal_state: n_max must be >= 1");
    TruncatedState st;
    st.dim = n_max + 1;
    st.matrix = Eigen::MatrixXcd::Zero(st.dim, st.dim);
    if (nbar == 0.0) {
        st.matrix(0, 0) = 1.0;
        st.trace_defect = 0.0;
        return st;
    }
    const double ratio = nbar / (nbar + 1.0);
    double term = 1.0 / (nbar + 1.0);
    for (int n = 0; n <= n_max; ++n) {
        st.matrix(n, n) = term;
        term *= ratio;
    }
    // Geometric tail: (nbar/(nbar+1))^(n_max+1); exact, no summation noise.
    st.trace_defect = std::pow(ratio, n_max + 1);
    return st;
}

double trace_distance(const TruncatedState& rho, const TruncatedState& sigma) {
    if (rho.dim != sigma.dim)
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::MatrixXcd delta = rho.matrix - sigma.matrix;
    // Symmetrize away representation round-off before the eigensolve.
    delta = 0.5 * (delta + delta.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta,
                                                       Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double mean_photon_number(const TruncatedState& state) {
    double acc = 0.0;
    for (int n = 0; n < state.dim; ++n) acc += n * state.matrix(n, n).real();
    return acc;
}

bool is_valid_state(const TruncatedState& state, double herm_tol, double eig_tol) {
    if (state.matrix.rows() != state.dim || state.matrix.cols() != state.dim)
        return false;
    if ((state.matrix - state.matrix.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
        return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(state.matrix,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eig_tol;
}

}  // namespace cvqkd
