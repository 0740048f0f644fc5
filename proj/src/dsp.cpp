#include "cvqkd/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "cvqkd/simd.hpp"

namespace cvqkd::dsp {

namespace {
constexpr double kPi = std::numbers::pi;
}

double rrc_impulse(double t, double rolloff) {
    const double g = rolloff;
    if (g < 1e-12) {
        if (std::abs(t) < 1e-12) return 1.0;
        return std::sin(kPi * t) / (kPi * t);
    }
    if (std::abs(t) < 1e-10) return 1.0 - g + 4.0 * g / kPi;
    const double sing = 1.0 / (4.0 * g);
    if (std::abs(std::abs(t) - sing) < 1e-10) {
        const double a = kPi / (4.0 * g);
        return (g / std::sqrt(2.0)) *
               ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
    }
    const double num = std::sin(kPi * t * (1.0 - g)) +
                       4.0 * g * t * std::cos(kPi * t * (1.0 + g));
    const double den = kPi * t * (1.0 - 16.0 * g * g * t * t);
    return num / den;
}

double rc_impulse(double t, double rolloff) {
    const double g = rolloff;
    const double sinc = std::abs(t) < 1e-12 ? 1.0 : std::sin(kPi * t) / (kPi * t);
    if (g < 1e-12) return sinc;
    const double d = 1.0 - 4.0 * g * g * t * t;
    if (std::abs(d) < 1e-10) {
        // t = 1/(2g): cos factor limit pi/4 * sinc(t)
        return sinc * kPi / 4.0;
    }
    return sinc * std::cos(kPi * g * t) / d;
}

std::vector<double> rrc_taps(double rolloff, int span_symbols,
                             double samples_per_symbol, double frac_offset) {
    if (rolloff < 0.0 || rolloff > 1.0)
        throw std::invalid_argument("rrc_taps: rolloff must be in [0,1]");
    if (span_symbols < 8) throw std::invalid_argument("rrc_taps: span must be >= 8");

    const int half = static_cast<int>(std::floor(span_symbols * samples_per_symbol / 2.0));
    const int n = 2 * half + 1;

    // Common normalization across fractional offsets: energy of the offset-0
    // sampling, so polyphase banks remain mutually consistent.
    double energy = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double v = rrc_impulse(k / samples_per_symbol, rolloff);
        energy += v * v;
    }
    const double norm = 1.0 / std::sqrt(energy);

    std::vector<double> taps(n);
    for (int k = -half; k <= half; ++k)
        taps[k + half] = norm * rrc_impulse((k + frac_offset) / samples_per_symbol, rolloff);
    return taps;
}

std::vector<cd> zadoff_chu(int length, int root) {
    if (length < 16) throw std::invalid_argument("zadoff_chu: length must be >= 16");
    if (std::gcd(length, root) != 1)
        throw std::invalid_argument("zadoff_chu: root " + std::to_string(root) +
                                    " not coprime with length " + std::to_string(length));
    std::vector<cd> z(length);
    const std::int64_t two_l = 2LL * length;
    for (int k = 0; k < length; ++k) {
        // Exponent kept as an exact integer mod 2L before the trig call.
        std::int64_t e;
        if (length % 2 == 1)
            e = (static_cast<std::int64_t>(root) * k % two_l) * (k + 1) % two_l;
        else
            e = (static_cast<std::int64_t>(root) * k % two_l) * k % two_l;
        const double angle = -kPi * static_cast<double>(e) / length;
        z[k] = {std::cos(angle), std::sin(angle)};
    }
    return z;
}

std::vector<cd> tone(std::size_t n, double cycles_per_sample, double phase0_cycles) {
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double c = phase0_cycles + cycles_per_sample * static_cast<double>(k);
        c -= std::floor(c);
        const double a = 2.0 * kPi * c;
        out[k] = {std::cos(a), std::sin(a)};
    }
    return out;
}

void rotate_inplace(std::vector<cd>& x, double cycles_per_sample, double phase0_cycles) {
    const std::vector<cd> ph = tone(x.size(), cycles_per_sample, phase0_cycles);
    simd::cmul(x.data(), ph.data(), x.data(), x.size());
}

namespace {

// FFTW plan cache. Plans are created once per (size, direction) under a lock
// with FFTW_ESTIMATE (deterministic plan choice) and executed via the
// new-array interface.
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    void execute(std::vector<cd>& x, int sign) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_pair(x.size(), sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cd> tmp(x.size());
                plan = fftw_plan_dft_1d(static_cast<int>(x.size()),
                                        reinterpret_cast<fftw_complex*>(tmp.data()),
                                        reinterpret_cast<fftw_complex*>(tmp.data()), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_[key] = plan;
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(x.data()),
                         reinterpret_cast<fftw_complex*>(x.data()));
    }

  private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

void fft_inplace(std::vector<cd>& x) { PlanCache::instance().execute(x, FFTW_FORWARD); }

void ifft_inplace(std::vector<cd>& x) { PlanCache::instance().execute(x, FFTW_BACKWARD); }

std::vector<cd> correlate_valid(const std::vector<cd>& x, const std::vector<cd>& ref) {
    if (ref.empty() || x.size() < ref.size())
        throw std::invalid_argument("correlate_valid: reference longer than stream");
    const std::size_t n_lags = x.size() - ref.size() + 1;
    const std::size_t n = next_pow2(x.size() + ref.size());

    std::vector<cd> fx(n, cd{0.0, 0.0});
    std::copy(x.begin(), x.end(), fx.begin());
    std::vector<cd> fr(n, cd{0.0, 0.0});
    std::copy(ref.begin(), ref.end(), fr.begin());
    fft_inplace(fx);
    fft_inplace(fr);
    simd::cmul_conj(fx.data(), fr.data(), fx.data(), n);
    ifft_inplace(fx);
    const double inv = 1.0 / static_cast<double>(n);
    fx.resize(n_lags);
    simd::scale(fx.data(), inv, fx.size());
    return fx;
}

double parabolic_refine(double ym1, double y0, double yp1) {
    const double den = ym1 - 2.0 * y0 + yp1;
    if (std::abs(den) < 1e-300) return 0.0;
    double d = 0.5 * (ym1 - yp1) / den;
    return std::clamp(d, -0.5, 0.5);
}

PeriodogramPeak periodogram_peak(const std::vector<cd>& x, std::size_t fft_size) {
    std::vector<cd> buf(fft_size, cd{0.0, 0.0});
    const std::size_t m = std::min(x.size(), fft_size);
    std::copy(x.begin(), x.begin() + m, buf.begin());
    fft_inplace(buf);

    std::vector<double> pw(fft_size);
    for (std::size_t i = 0; i < fft_size; ++i) pw[i] = std::norm(buf[i]);

    std::size_t imax = 0;
    for (std::size_t i = 1; i < fft_size; ++i)
        if (pw[i] > pw[imax]) imax = i;

    std::vector<double> sorted = pw;
    std::nth_element(sorted.begin(), sorted.begin() + fft_size / 2, sorted.end());
    const double floor_med = sorted[fft_size / 2];

    const double ym1 = pw[(imax + fft_size - 1) % fft_size];
    const double yp1 = pw[(imax + 1) % fft_size];
    const double shift = parabolic_refine(ym1, pw[imax], yp1);

    double bin = static_cast<double>(imax) + shift;
    if (bin > static_cast<double>(fft_size) / 2.0) bin -= static_cast<double>(fft_size);

    PeriodogramPeak out;
    out.freq_cycles = bin / static_cast<double>(fft_size);
    out.power = pw[imax];
    out.floor_median = floor_med;
    return out;
}

Rational rationalize(double value, std::int64_t max_den) {
    if (value <= 0.0) throw std::invalid_argument("rationalize: value must be > 0");
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = value;
    for (int it = 0; it < 64; ++it) {
        const std::int64_t a = static_cast<std::int64_t>(std::floor(x));
        std::int64_t p2 = a * p1 + p0;
        std::int64_t q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double rem = x - static_cast<double>(a);
        if (rem < 1e-12) break;
        x = 1.0 / rem;
    }
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - value) >
        1e-9 * value)
        throw std::invalid_argument(
            "rationalize: value has no small rational representation");
    return {p1, q1};
}

PolyphaseShaper::PolyphaseShaper(double rolloff, int span_symbols, std::int64_t up,
                                 std::int64_t down)
    : rolloff_(rolloff), span_(span_symbols), up_(up), down_(down) {
    if (up <= 0 || down <= 0 || up <= down)
        throw std::invalid_argument("PolyphaseShaper: need up/down > 1");
    half_width_ = span_symbols / 2;

    // Tap energy on the output-rate grid fixes the normalization shared with
    // MatchedResampler: both use rrc/sqrt(E), giving unit end-to-end symbol
    // gain and unit matched-filter noise gain.
    const double sps = static_cast<double>(up) / static_cast<double>(down);
    const int half_samp = static_cast<int>(std::floor(span_symbols * sps / 2.0));
    double energy = 0.0;
    for (int k = -half_samp; k <= half_samp; ++k) {
        const double v = rrc_impulse(k / sps, rolloff);
        energy += v * v;
    }
    const double norm = 1.0 / std::sqrt(energy);

    // Output sample n sits at symbol time n*down/up; fractional part cycles
    // with period `up`. Phase p holds symbol-spaced taps at that offset.
    phases_.resize(static_cast<std::size_t>(up));
    for (std::int64_t p = 0; p < up; ++p) {
        const double frac =
            static_cast<double>(p * down % up) / static_cast<double>(up);
        std::vector<double>& t = phases_[static_cast<std::size_t>(p)];
        t.resize(2 * half_width_ + 2);
        for (int j = -half_width_; j <= half_width_ + 1; ++j)
            t[static_cast<std::size_t>(j + half_width_)] =
                norm * rrc_impulse(frac + j, rolloff);
    }
}

std::size_t PolyphaseShaper::output_length(std::size_t n_symbols) const {
    // ceil(n_symbols * up / down) plus the filter tail.
    return (n_symbols * static_cast<std::size_t>(up_) +
            static_cast<std::size_t>(down_) - 1) /
               static_cast<std::size_t>(down_) +
           static_cast<std::size_t>(half_width_) * static_cast<std::size_t>(up_) /
               static_cast<std::size_t>(down_);
}

std::vector<cd> PolyphaseShaper::shape(const std::vector<cd>& symbols) const {
    const std::size_t n_out = output_length(symbols.size());
    std::vector<cd> out(n_out, cd{0.0, 0.0});
    const std::int64_t n_sym = static_cast<std::int64_t>(symbols.size());
    const int w = 2 * half_width_ + 2;
    for (std::size_t n = 0; n < n_out; ++n) {
        // Output n sits at symbol time n*down/up; frac part has period `up`.
        const std::int64_t k0 = static_cast<std::int64_t>(n) * down_ / up_;
        const std::vector<double>& taps =
            phases_[static_cast<std::size_t>(static_cast<std::int64_t>(n) % up_)];
        // Symbols m = k0 - j for j in [-half, half+1]; reversed window view:
        const std::int64_t m_lo = k0 - (half_width_ + 1);
        double re = 0.0, im = 0.0;
        for (int i = 0; i < w; ++i) {
            const std::int64_t m = m_lo + i;
            if (m < 0 || m >= n_sym) continue;
            const double t = taps[static_cast<std::size_t>(half_width_ + 1 -
                                                           (i - half_width_))];
            re += t * symbols[static_cast<std::size_t>(m)].real();
            im += t * symbols[static_cast<std::size_t>(m)].imag();
        }
        out[n] = {re, im};
    }
    return out;
}

MatchedResampler::MatchedResampler(double rolloff, int span_symbols, std::int64_t up,
                                   std::int64_t down, int out_per_symbol)
    : rolloff_(rolloff),
      span_(span_symbols),
      up_(up),
      down_(down),
      out_per_symbol_(out_per_symbol) {
    if (out_per_symbol != 1 && out_per_symbol != 2)
        throw std::invalid_argument("MatchedResampler: out_per_symbol must be 1 or 2");
    const double sps = static_cast<double>(up) / static_cast<double>(down);
    half_width_ = static_cast<int>(std::floor(span_symbols * sps / 2.0));
    double energy = 0.0;
    for (int k = -half_width_; k <= half_width_; ++k) {
        const double v = rrc_impulse(k / sps, rolloff);
        energy += v * v;
    }
    norm_ = 1.0 / std::sqrt(energy);
}

std::vector<cd> MatchedResampler::extract(const std::vector<cd>& stream,
                                          double first_symbol_sample,
                                          std::size_t n_symbols) const {
    const double sps = static_cast<double>(up_) / static_cast<double>(down_);
    const double step = sps / out_per_symbol_;
    const std::size_t n_out = n_symbols * static_cast<std::size_t>(out_per_symbol_);
    std::vector<cd> out(n_out, cd{0.0, 0.0});

    const std::int64_t ns = static_cast<std::int64_t>(stream.size());
    const int w = 2 * half_width_ + 1;
    std::vector<double> taps(static_cast<std::size_t>(w));
    for (std::size_t v = 0; v < n_out; ++v) {
        const double tau = first_symbol_sample + step * static_cast<double>(v);
        const std::int64_t k0 = static_cast<std::int64_t>(std::ceil(tau)) - half_width_;
        // Matched taps at the exact fractional offset; bandlimited input makes
        // this an exact resampling matched filter up to tail truncation.
        for (int i = 0; i < w; ++i) {
            const double t = (static_cast<double>(k0 + i) - tau) / sps;
            taps[static_cast<std::size_t>(i)] = norm_ * rrc_impulse(t, rolloff_);
        }
        const std::int64_t lo = std::max<std::int64_t>(k0, 0);
        const std::int64_t hi = std::min<std::int64_t>(k0 + w, ns);
        if (lo >= hi) continue;
        out[v] = simd::dot_conj(stream.data() + lo, nullptr, 0);  // placeholder
        double re = 0.0, im = 0.0;
        for (std::int64_t k = lo; k < hi; ++k) {
            const double t = taps[static_cast<std::size_t>(k - k0)];
            re += t * stream[static_cast<std::size_t>(k)].real();
            im += t * stream[static_cast<std::size_t>(k)].imag();
        }
        out[v] = {re, im};
    }
    return out;
}

}  // namespace cvqkd::dsp
