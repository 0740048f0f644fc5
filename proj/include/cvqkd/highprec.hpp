#pragma once

// Extended-precision route for the preparation error. A shaped-QAM
// coherent-state mixture and the matching thermal state are assembled in
// MPFR arithmetic (256-bit mantissa default), exploiting the constellation's
// four-fold phase symmetry: both operators are block diagonal over the
// n mod 4 Fock sectors, so each sector is diagonalized independently.
// Eigenvalues come from a cyclic Jacobi sweep on the real symmetric
// embedding [[A,-B],[B,A]] of each Hermitian block; double-precision
// eigensolvers drown preparation errors below ~1e-14, which is why this
// path exists.

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cvqkd::hp {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Cyclic threshold Jacobi, eigenvalues only. `a` is a full symmetric n x n
// matrix, row-major; destroyed in place. Converges to off-diagonal norm
// below rel_tol * frobenius.
template <typename T>
std::vector<T> jacobi_eigenvalues(std::vector<T>& a, int n, const T& rel_tol,
                                  int max_sweeps = 64) {
    auto at = [&](int i, int j) -> T& { return a[static_cast<std::size_t>(i) * n + j]; };

    T fro2 = T(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fro2 += at(i, j) * at(i, j);
    const T stop2 = rel_tol * rel_tol * fro2;

    using std::abs;
    using std::sqrt;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        T off2 = T(0);
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off2 += at(p, q) * at(p, q);
        if (2 * off2 <= stop2 || off2 == T(0)) break;

        // Skip rotations that cannot move the off-norm meaningfully.
        const T thresh2 = off2 / (n * static_cast<double>(n) * 4.0);

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const T apq = at(p, q);
                if (apq * apq <= thresh2) continue;

                const T theta = (at(q, q) - at(p, p)) / (2 * apq);
                T t;
                if (theta >= T(0))
                    t = T(1) / (theta + sqrt(theta * theta + 1));
                else
                    t = T(-1) / (-theta + sqrt(theta * theta + 1));
                const T c = T(1) / sqrt(t * t + 1);
                const T s = t * c;
                const T tau = s / (1 + c);

                at(p, p) -= t * apq;
                at(q, q) += t * apq;
                at(p, q) = T(0);
                at(q, p) = T(0);
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const T aip = at(i, p);
                    const T aiq = at(i, q);
                    const T new_ip = aip - s * (aiq + tau * aip);
                    const T new_iq = aiq + s * (aip - tau * aiq);
                    at(i, p) = new_ip;
                    at(p, i) = new_ip;
                    at(i, q) = new_iq;
                    at(q, i) = new_iq;
                }
            }
        }
    }

    std::vector<T> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    return eig;
}

struct EpsPrepOptions {
    unsigned precision_bits = 256;
    int max_n_max = 400;       // escalation cap for the certification loop
    bool certify = true;       // grow n_max until the bound sits below eps
    double bound_fraction = 0.5;  // target: bound <= bound_fraction * eps
};

struct EpsPrepResult {
    double eps = 0.0;               // computed trace distance
    double truncation_bound = 0.0;  // certified additive error of eps
    double nu = 0.0;
    double target_va = 0.0;
    int cardinality = 0;
    int n_max_used = 0;
    unsigned precision_bits = 0;
};

// Trace distance between the shaped 2^M-QAM coherent ensemble at (nu,
// target_va) and the thermal state of n̄ = target_va/2, plus its certified
// truncation bound. With opts.certify the truncation dimension escalates
// from n_max until the bound is below bound_fraction * eps (or the cap).
EpsPrepResult eps_prep(int cardinality, double nu, double target_va, int n_max,
                       const EpsPrepOptions& opts = {});

struct MinimizeResult {
    double nu_opt = 0.0;
    EpsPrepResult best;
    int evaluations = 0;
};

// Golden-section search for the eps-minimizing nu over [0, 4/target_va]
// (four times the variance-matching shaping), with a coarse-grid bracket
// pass as the unimodality guard. The search runs at the working n_max; the
// returned optimum is re-evaluated through the certification loop.
MinimizeResult minimize_eps_prep(int cardinality, double target_va, int n_max,
                                 const EpsPrepOptions& opts = {});

}  // namespace cvqkd::hp
