#include "cvqkd/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "cvqkd/rng.hpp"

namespace cvqkd {

namespace {

bool is_square_power_of_two(int k, int& side) {
    if (k < 4) return false;
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(k))));
    if (root * root != k) return false;
    if ((root & (root - 1)) != 0) return false;  // side must be 2^(M/2)
    side = root;
    return true;
}

}  // namespace

double ConstellationSpec::grid_second_moment() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        acc += probs[i] * points[i].real() * points[i].real();
    return acc;
}

double ConstellationSpec::per_quadrature_second_moment() const {
    return scale * scale * grid_second_moment();
}

double ConstellationSpec::modulation_variance() const {
    return 2.0 * per_quadrature_second_moment();
}

ConstellationSpec build_pcs_qam(int cardinality, double nu) {
    int side = 0;
    if (!is_square_power_of_two(cardinality, side))
        throw std::invalid_argument(
            "build_pcs_qam: cardinality must be an even power of 2 (square QAM), got " +
            std::to_string(cardinality));
    if (nu < 0.0)
        throw std::invalid_argument("build_pcs_qam: nu must be >= 0");

    ConstellationSpec spec;
    spec.cardinality = cardinality;
    spec.nu = nu;
    spec.points.reserve(cardinality);
    spec.energies.reserve(cardinality);

    int e_min = 0x7fffffff;
    for (int p = -(side - 1); p <= side - 1; p += 2) {
        for (int q = -(side - 1); q <= side - 1; q += 2) {
            spec.points.emplace_back(static_cast<double>(p), static_cast<double>(q));
            const int e = p * p + q * q;
            spec.energies.push_back(e);
            e_min = std::min(e_min, e);
        }
    }

    // Weights relative to the minimum-energy shell; equal integer energies map
    // to bit-identical weights, preserving the exchange symmetry exactly.
    spec.probs.resize(spec.points.size());
    double z = 0.0;
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        spec.probs[i] = std::exp(-nu * static_cast<double>(spec.energies[i] - e_min));
        z += spec.probs[i];
    }
    for (double& w : spec.probs) w /= z;
    return spec;
}

double constellation_variance(const ConstellationSpec& spec) {
    return spec.per_quadrature_second_moment();
}

ConstellationSpec scale_to_variance(ConstellationSpec spec, double target_va) {
    if (target_va <= 0.0)
        throw std::invalid_argument("scale_to_variance: target_VA must be > 0");
    spec.scale = std::sqrt(target_va / (2.0 * spec.grid_second_moment()));
    return spec;
}

SymbolBlock sample_symbols(const ConstellationSpec& spec, std::size_t n,
                           std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_symbols: n must be >= 1");

    // Cumulative table; inverse-CDF draw keeps the output independent of the
    // platform's distribution internals.
    std::vector<double> cdf(spec.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < spec.probs.size(); ++i) {
        acc += spec.probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;

    SymbolBlock block;
    block.seed = seed;
    block.x.resize(n);
    block.y.resize(n);

    Rng rng_x = Rng::split(seed, 0);
    Rng rng_y = Rng::split(seed, 1);
    auto draw = [&](Rng& rng) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                  cdf.size() - 1);
        return spec.scale * spec.points[idx];
    };
    for (std::size_t i = 0; i < n; ++i) block.x[i] = draw(rng_x);
    for (std::size_t i = 0; i < n; ++i) block.y[i] = draw(rng_y);
    return block;
}

void export_constellation_csv(const ConstellationSpec& spec, std::ostream& os) {
    os << "p,q,prob\n";
    char line[96];
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        std::snprintf(line, sizeof(line), "%d,%d,%.17g\n",
                      static_cast<int>(spec.points[i].real()),
                      static_cast<int>(spec.points[i].imag()), spec.probs[i]);
        os << line;
    }
}

}  // namespace cvqkd
