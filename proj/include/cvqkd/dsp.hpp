#pragma once

// Shared signal-processing primitives: root-raised-cosine pulses, Zadoff-Chu
// sequences, FFT helpers (FFTW backed), polyphase shaping/resampling and
// periodogram peak search. Everything is deterministic for fixed inputs;
// FFTW plans are created with FFTW_ESTIMATE only.

#include <complex>
#include <cstdint>
#include <vector>

namespace cvqkd::dsp {

using cd = std::complex<double>;

// Continuous RRC impulse response at time t (symbol units), unit symbol
// period, peak-normalized tails; removable singularities handled analytically.
double rrc_impulse(double t, double rolloff);

// Raised-cosine (RRC*RRC) impulse response; rc_impulse(0) = 1.
double rc_impulse(double t, double rolloff);

// Discrete RRC taps sampled at `samples_per_symbol` (may be fractional) with
// an additional fractional sample offset; span symbols total width; unit tap
// energy at offset 0's normalization (all offsets share one normalization so
// polyphase banks stay phase-consistent).
std::vector<double> rrc_taps(double rolloff, int span_symbols,
                             double samples_per_symbol, double frac_offset = 0.0);

// Zadoff-Chu sequence, |z_k| = 1, zero periodic autocorrelation. Throws
// std::invalid_argument if root and length are not coprime or length < 16.
std::vector<cd> zadoff_chu(int length, int root);

// y[k] = exp(i*2*pi*(phase0_cycles + cycles_per_sample*k)); the phase is
// reduced modulo one cycle before the trig call so long streams keep full
// precision.
std::vector<cd> tone(std::size_t n, double cycles_per_sample, double phase0_cycles);
void rotate_inplace(std::vector<cd>& x, double cycles_per_sample, double phase0_cycles);

// In-place FFT helpers (complex double). n need not be a power of two.
void fft_inplace(std::vector<cd>& x);
void ifft_inplace(std::vector<cd>& x);  // unscaled inverse (multiply by 1/n yourself)

// corr[lag] = sum_k x[lag+k] * conj(ref[k]) for lag in [0, x.size()-ref.size()];
// FFT-accelerated.
std::vector<cd> correlate_valid(const std::vector<cd>& x, const std::vector<cd>& ref);

// Quadratic-interpolated extremum offset from three samples around a peak;
// returns a shift in [-0.5, 0.5].
double parabolic_refine(double ym1, double y0, double yp1);

struct PeriodogramPeak {
    double freq_cycles;  // peak frequency, cycles/sample, in (-0.5, 0.5]
    double power;        // peak bin power
    double floor_median; // median bin power away from the peak
};

// Zero-padded periodogram peak of x (padded/truncated to fft_size), with
// parabolic refinement of the peak bin.
PeriodogramPeak periodogram_peak(const std::vector<cd>& x, std::size_t fft_size);

// Rational approximation p/q of value with q <= max_den (continued fractions).
struct Rational {
    std::int64_t num = 0, den = 1;
};
Rational rationalize(double value, std::int64_t max_den);

// Polyphase pulse shaper: maps a symbol sequence to a waveform at
// samples_per_symbol = up/down (rational, may be fractional like 25/2),
// using RRC taps sampled at the exact fractional offsets. The waveform's
// per-symbol gain is 1 when matched-filtered by `MatchedResampler` below.
class PolyphaseShaper {
  public:
    PolyphaseShaper(double rolloff, int span_symbols, std::int64_t up, std::int64_t down);

    std::size_t output_length(std::size_t n_symbols) const;
    std::vector<cd> shape(const std::vector<cd>& symbols) const;

    double rolloff() const { return rolloff_; }
    int span_symbols() const { return span_; }

  private:
    double rolloff_;
    int span_;
    std::int64_t up_, down_;
    int half_width_;                          // tap half-width in symbols
    std::vector<std::vector<double>> phases_; // taps per fractional phase
};

// Matched filter evaluated directly on the symbol grid: given a stream at
// samples_per_symbol = up/down and a fractional timing offset (in input
// samples), produces out_per_symbol (1 or 2) samples per symbol. Combines
// matched filtering and resampling without a separate interpolation stage.
class MatchedResampler {
  public:
    MatchedResampler(double rolloff, int span_symbols, std::int64_t up,
                     std::int64_t down, int out_per_symbol);

    // first_symbol_sample: fractional input-sample position of symbol 0.
    std::vector<cd> extract(const std::vector<cd>& stream, double first_symbol_sample,
                            std::size_t n_symbols) const;

  private:
    double rolloff_;
    int span_;
    std::int64_t up_, down_;
    int out_per_symbol_;
    int half_width_;  // tap half-width in input samples
    double norm_;     // common energy normalization
};

}  // namespace cvqkd::dsp
