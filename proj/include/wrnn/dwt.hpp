#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "wrnn/ingest.hpp"

// First-generation biorthogonal wavelet machinery: single analysis/synthesis
// steps, the decimated Mallat cascade, and the undecimated (à-trous)
// transform that produces one coefficient row per time step.

namespace wrnn::dwt {

enum class Extension { symmetric, periodic, zero };

Extension extension_from_name(const std::string& name);
const char* extension_name(Extension ext);

// Analysis/synthesis FIR filter quadruple.  All four filters must have the
// same length (shorter filters are stored zero-padded in the bank tables).
//
// Conventions, shared by every operation here:
//   analysis    approx[k] = sum_j dec_lo[j] * X(2k+1-j)   (X = extended signal)
//               detail[k] = sum_j dec_hi[j] * X(2k+1-j)
//   synthesis   upsample into odd slots, convolve with rec_lo/rec_hi, sum the
//               two channels, drop the first L-1 samples.
// Under `symmetric` (half-sample reflection) and `zero` the analysis outputs
// have length floor((n+L-1)/2); under `periodic` the signal is treated as
// circular (odd lengths repeat the last sample once) giving ceil(n/2).
struct FilterBank {
    std::vector<double> dec_lo, dec_hi, rec_lo, rec_hi;
    Extension ext = Extension::symmetric;

    std::size_t filter_length() const { return dec_lo.size(); }
    void validate() const;  // throws if filters are empty or lengths differ
};

FilterBank haar_bank(Extension ext = Extension::symmetric);
FilterBank bior37_bank(Extension ext = Extension::symmetric);
FilterBank bank_by_name(const std::string& name, Extension ext);

// N rows x (M+1) columns; row tau = [d_1(tau), ..., d_M(tau), a_M(tau)].
struct WaveletCoeffs {
    std::size_t levels = 0;         // M
    std::size_t source_length = 0;  // N
    std::vector<double> matrix;     // row-major, N * (M+1)

    std::size_t cols() const { return levels + 1; }
    double at(std::size_t row, std::size_t col) const {
        return matrix[row * cols() + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return matrix[row * cols() + col];
    }
};

// Decimated cascade output: details[i] holds level i+1, approx the final
// residual.  level_lengths[i] is the length of the signal that entered the
// level-(i+1) analysis; reconstruct uses it to crop each synthesis step.
struct DecimatedPyramid {
    std::vector<std::vector<double>> details;
    std::vector<double> approx;
    std::vector<std::size_t> level_lengths;
};

struct BiorthReport {
    double max_pr_residual = 0.0;
    double lowpass_sum_dev = 0.0;   // |sum(dec_lo) - sqrt(2)|
    double highpass_sum_dev = 0.0;  // |sum(dec_hi)|
};

// One analysis step.  Throws if the signal is shorter than the filter.
std::pair<std::vector<double>, std::vector<double>>
analysis_step(const std::vector<double>& signal, const FilterBank& bank);

// One synthesis step.  original_length = 0 keeps the natural output length
// 2*len(approx); otherwise the output is cropped to original_length, which
// must be the length of the signal the coefficients came from.
std::vector<double> synthesis_step(const std::vector<double>& approx,
                                   const std::vector<double>& detail,
                                   const FilterBank& bank,
                                   std::size_t original_length = 0);

// Stationary (à-trous) transform: at level i the filters are upsampled by
// 2^(i-1) and nothing is downsampled, so every time step keeps a full
// coefficient row.  With causal = true row tau is computed from samples
// <= tau only (one-sided filter window (tau - support, tau]); otherwise the
// window is centered.  Requires series length >= 2^M * filter length.
WaveletCoeffs decompose_undecimated(const std::vector<double>& values,
                                    std::size_t levels, const FilterBank& bank,
                                    bool causal = true);
WaveletCoeffs decompose_undecimated(const ingest::TimeSeries& series,
                                    std::size_t levels, const FilterBank& bank,
                                    bool causal = true);

// Standard Mallat cascade and its inverse.
DecimatedPyramid decompose_decimated(const std::vector<double>& values,
                                     std::size_t levels, const FilterBank& bank);
std::vector<double> reconstruct(const DecimatedPyramid& pyramid,
                                const FilterBank& bank);

// Round-trips a fixed battery of 100 random length-256 signals and reports
// the worst residual together with the filter-sum deviations.
BiorthReport verify_biorthogonality(const FilterBank& bank);

// CSV with header `d1,...,dM,aM`, one row per time step.
void save_coeffs_csv(const WaveletCoeffs& coeffs, const std::string& path);

}  // namespace wrnn::dwt
