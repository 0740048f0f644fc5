#include "cvqkd/highprec.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace cvqkd::hp {

namespace {

struct CReal {
    Real re, im;
};

struct GridRep {
    int p, q;    // first-quadrant representative, p,q >= 1 odd
    int energy;  // p^2 + q^2
};

std::vector<GridRep> quadrant_reps(int cardinality) {
    const int side = static_cast<int>(std::lround(std::sqrt(double(cardinality))));
    if (side * side != cardinality || side < 2 || (side & (side - 1)) != 0)
        throw std::invalid_argument("eps_prep: cardinality must be square 2^M >= 4");
    std::vector<GridRep> reps;
    reps.reserve(cardinality / 4);
    for (int p = 1; p <= side - 1; p += 2)
        for (int q = 1; q <= side - 1; q += 2) reps.push_back({p, q, p * p + q * q});
    return reps;
}

// One evaluation of the truncated trace distance at fixed n_max.
// Returns (eps, d_rho, d_sigma) in the working precision.
struct EvalOut {
    Real eps, d_rho, d_sigma;
};

EvalOut evaluate(int cardinality, const Real& nu, const Real& target_va, int n_max) {
    const std::vector<GridRep> reps = quadrant_reps(cardinality);

    int e_min = reps.front().energy;
    for (const auto& r : reps) e_min = std::min(e_min, r.energy);

    // Boltzmann weights over orbit representatives. Z covers the full grid
    // (each orbit appears four times with equal weight).
    std::vector<Real> w(reps.size());
    Real z = 0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        w[k] = exp(-nu * Real(reps[k].energy - e_min));
        z += w[k];
    }
    z *= 4;

    // E[p^2] over the full grid: an orbit contributes 2(p^2+q^2) per weight.
    Real ep2 = 0;
    for (std::size_t k = 0; k < reps.size(); ++k)
        ep2 += w[k] * Real(2 * reps[k].energy);
    ep2 /= z;

    // V_A = 2 scale^2 E[p^2]; coherent amplitude alpha = (scale/sqrt2)(p+iq)
    // gives ensemble n̄ = scale^2 E[p^2] = V_A/2 exactly.
    const Real a2 = target_va / (4 * ep2);  // (scale/sqrt2)^2
    const Real a = sqrt(a2);

    const int dim = n_max + 1;
    // Fock sector sizes for residues 0..3.
    int bsize[4];
    for (int b = 0; b < 4; ++b) bsize[b] = (dim - b + 3) / 4;

    std::vector<std::vector<CReal>> blocks(4);
    for (int b = 0; b < 4; ++b)
        blocks[b].assign(static_cast<std::size_t>(bsize[b]) * bsize[b], CReal{Real(0), Real(0)});

    // Accumulate 4 P_k |alpha_k><alpha_k| restricted to each sector.
    std::vector<CReal> c(dim);
    std::vector<Real> sqrt_inv(dim);
    for (int n = 1; n < dim; ++n) sqrt_inv[n] = Real(1) / sqrt(Real(n));

    Real captured = 0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        const Real are = a * reps[k].p;
        const Real aim = a * reps[k].q;
        const Real alpha2 = a2 * reps[k].energy;

        c[0].re = exp(-alpha2 / 2);
        c[0].im = Real(0);
        for (int n = 1; n < dim; ++n) {
            // c_n = c_{n-1} * alpha / sqrt(n)
            c[n].re = (c[n - 1].re * are - c[n - 1].im * aim) * sqrt_inv[n];
            c[n].im = (c[n - 1].re * aim + c[n - 1].im * are) * sqrt_inv[n];
        }

        const Real pk4 = 4 * w[k] / z;  // orbit-summed probability
        for (int b = 0; b < 4; ++b) {
            const int m = bsize[b];
            std::vector<CReal>& blk = blocks[b];
            for (int i = 0; i < m; ++i) {
                const CReal& ci = c[b + 4 * i];
                const Real wre = pk4 * ci.re;
                const Real wim = pk4 * ci.im;
                CReal* row = blk.data() + static_cast<std::size_t>(i) * m;
                for (int j = 0; j < m; ++j) {
                    const CReal& cj = c[b + 4 * j];
                    // += pk4 * c_i * conj(c_j)
                    row[j].re += wre * cj.re + wim * cj.im;
                    row[j].im += wim * cj.re - wre * cj.im;
                }
            }
        }
        captured += pk4 * [&] {
            Real s = 0;
            for (int n = 0; n < dim; ++n) s += c[n].re * c[n].re + c[n].im * c[n].im;
            return s;
        }();
    }

    // Subtract the thermal diagonal n̄^n/(n̄+1)^(n+1), n̄ = V_A/2.
    const Real nbar = target_va / 2;
    const Real ratio = nbar / (nbar + 1);
    std::vector<Real> thermal(dim);
    thermal[0] = Real(1) / (nbar + 1);
    for (int n = 1; n < dim; ++n) thermal[n] = thermal[n - 1] * ratio;
    for (int b = 0; b < 4; ++b) {
        const int m = bsize[b];
        for (int i = 0; i < m; ++i)
            blocks[b][static_cast<std::size_t>(i) * m + i].re -= thermal[b + 4 * i];
    }

    // Per sector: real symmetric embedding [[A,-B],[B,A]] of A+iB, Jacobi,
    // and |eigenvalue| sum. The embedding doubles each eigenvalue, hence /4.
    const int work_bits = static_cast<int>(Real::default_precision() * 3321 / 1000);
    const Real conv_tol = ldexp(Real(1), -work_bits + 16);
    Real abs_sum = 0;
    for (int b = 0; b < 4; ++b) {
        const int m = bsize[b];
        const int n2 = 2 * m;
        std::vector<Real> em(static_cast<std::size_t>(n2) * n2, Real(0));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const CReal& v = blocks[b][static_cast<std::size_t>(i) * m + j];
                em[static_cast<std::size_t>(i) * n2 + j] = v.re;
                em[static_cast<std::size_t>(m + i) * n2 + (m + j)] = v.re;
                em[static_cast<std::size_t>(i) * n2 + (m + j)] = -v.im;
                em[static_cast<std::size_t>(m + i) * n2 + j] = v.im;
            }
        }
        std::vector<Real> eig = jacobi_eigenvalues(em, n2, conv_tol);
        for (const Real& l : eig) abs_sum += abs(l);
    }

    EvalOut out;
    out.eps = abs_sum / 4;
    out.d_rho = Real(1) - captured;
    if (out.d_rho < 0) out.d_rho = Real(0);
    out.d_sigma = pow(ratio, n_max + 1);
    return out;
}

Real certified_bound(const EvalOut& ev) {
    // |D_true - D_truncated| <= sqrt(d_rho) (gentle-measurement, mixture side)
    //                         + d_sigma/2   (diagonal state commutes with the
    //                                        projector: tail is exact)
    // plus d_rho as slack for the mixture's own diagonal deficit.
    return sqrt(ev.d_rho) + ev.d_rho + ev.d_sigma / 2;
}

}  // namespace

EpsPrepResult eps_prep(int cardinality, double nu, double target_va, int n_max,
                       const EpsPrepOptions& opts) {
    if (target_va <= 0) throw std::invalid_argument("eps_prep: target_VA must be > 0");
    if (nu < 0) throw std::invalid_argument("eps_prep: nu must be >= 0");
    if (n_max < 8) throw std::invalid_argument("eps_prep: n_max must be >= 8");

    Real::default_precision(
        static_cast<unsigned>(opts.precision_bits * 1000 / 3321));  // bits -> dec digits

    const Real nu_r(nu), va_r(target_va);
    int used = n_max;
    EvalOut ev = evaluate(cardinality, nu_r, va_r, used);
    if (opts.certify) {
        while (certified_bound(ev) > Real(opts.bound_fraction) * ev.eps &&
               used < opts.max_n_max) {
            used = std::min(opts.max_n_max, used + std::max(16, used / 2));
            ev = evaluate(cardinality, nu_r, va_r, used);
        }
    }

    EpsPrepResult res;
    res.eps = ev.eps.convert_to<double>();
    res.truncation_bound = certified_bound(ev).convert_to<double>();
    res.nu = nu;
    res.target_va = target_va;
    res.cardinality = cardinality;
    res.n_max_used = used;
    res.precision_bits = opts.precision_bits;
    return res;
}

MinimizeResult minimize_eps_prep(int cardinality, double target_va, int n_max,
                                 const EpsPrepOptions& opts) {
    if (target_va <= 0)
        throw std::invalid_argument("minimize_eps_prep: target_VA must be > 0");

    Real::default_precision(
        static_cast<unsigned>(opts.precision_bits * 1000 / 3321));

    const Real va_r(target_va);
    int evals = 0;
    auto objective = [&](double nu) {
        ++evals;
        return evaluate(cardinality, Real(nu), va_r, n_max).eps;
    };

    // Coarse bracket over [0, nu_hi], nu_hi = 4x the variance-matching value
    // 1/V_A. A grid pass guards against a missed bracket; golden section
    // refines inside the winning cell.
    const double nu_hi = 4.0 / target_va;
    constexpr int grid_points = 9;
    double best_nu = 0.0;
    Real best_val;
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        grid[i] = nu_hi * i / (grid_points - 1);
        const Real v = objective(grid[i]);
        if (i == 0 || v < best_val) {
            best_val = v;
            best_nu = grid[i];
        }
    }
    int best_idx = 0;
    for (int i = 0; i < grid_points; ++i)
        if (grid[i] == best_nu) best_idx = i;
    double lo = grid[std::max(0, best_idx - 1)];
    double hi = grid[std::min(grid_points - 1, best_idx + 1)];

    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    Real f1 = objective(x1);
    Real f2 = objective(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2);
        }
        // Converged when eps moves by under 1% between the probes.
        const Real fa = (f1 < f2) ? f1 : f2;
        const Real fb = (f1 < f2) ? f2 : f1;
        if (fa > 0 && (fb - fa) < fa / 100 && (hi - lo) < nu_hi * 1e-3) break;
    }
    const double nu_opt = (f1 < f2) ? x1 : x2;

    MinimizeResult res;
    res.nu_opt = nu_opt;
    res.best = eps_prep(cardinality, nu_opt, target_va, n_max, opts);
    res.evaluations = evals;
    return res;
}

}  // namespace cvqkd::hp
