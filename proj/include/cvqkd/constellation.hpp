#pragma once

// Probabilistically shaped square 2^M-QAM. Points live on the unit-spaced
// odd-integer grid {+/-1, +/-3, ...}; Boltzmann-Maxwell weights
// P(p+iq) ~ exp(-nu (p^2+q^2)). `scale` maps grid units to the SNU-normalized
// symbol stream: the transmitted complex symbol is scale*(p+iq), whose
// per-quadrature variance is scale^2 E[p^2] = V_A/2 under the convention
// V_A = 2 scale^2 E[p^2] (modulation variance per quadrature, n̄ = V_A/2).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace cvqkd {

struct ConstellationSpec {
    int cardinality = 0;  // K = 2^M, square (4, 16, ..., 4096)
    double nu = 0.0;
    std::vector<std::complex<double>> points;  // grid units
    std::vector<double> probs;
    std::vector<int> energies;  // p^2 + q^2 per point (exact integers)
    double scale = 1.0;

    // E[p^2] under probs, grid units (no scale).
    double grid_second_moment() const;
    // scale^2 * E[p^2]: per-quadrature second moment of the symbol stream.
    double per_quadrature_second_moment() const;
    // V_A in SNU: 2 * scale^2 * E[p^2].
    double modulation_variance() const;
};

struct SymbolBlock {
    std::vector<std::complex<double>> x;  // polarization X, scale applied
    std::vector<std::complex<double>> y;  // polarization Y
    std::uint64_t seed = 0;
};

// Boltzmann-Maxwell shaped constellation on the full square grid.
// Throws std::invalid_argument unless cardinality is an even power of two
// >= 4 and nu >= 0.
ConstellationSpec build_pcs_qam(int cardinality, double nu);

// Per-quadrature second moment scale^2 E[p^2] (the op's numeric contract).
double constellation_variance(const ConstellationSpec& spec);

// Returns a copy whose modulation_variance() equals target_va exactly.
ConstellationSpec scale_to_variance(ConstellationSpec spec, double target_va);

// n i.i.d. draws per polarization; identical (spec, n, seed) give identical
// blocks. Symbols carry the scale factor.
SymbolBlock sample_symbols(const ConstellationSpec& spec, std::size_t n,
                           std::uint64_t seed);

// CSV export: header `p,q,prob`, probabilities at 17 significant digits.
void export_constellation_csv(const ConstellationSpec& spec, std::ostream& os);

}  // namespace cvqkd
