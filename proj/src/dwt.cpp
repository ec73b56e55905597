#include "wrnn/dwt.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace wrnn::dwt {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

// Spline lowpass pair of the CDF biorthogonal 3.7 family.  The analysis
// lowpass is exactly sqrt(2)/16384 times the integer row below; the
// synthesis lowpass is the 4-tap cubic B-spline filter sqrt(2)/8*[1,3,3,1],
// stored centered in the common 16-tap support.
constexpr double kBior37DecLoNum[16] = {
    35,   -105,  -195, 865,   363,  -3489, -307, 11025,
    11025, -307, -3489, 363,  865,  -195,  -105, 35,
};
constexpr double kBior37RecLoNum[16] = {
    0, 0, 0, 0, 0, 0, 1, 3, 3, 1, 0, 0, 0, 0, 0, 0,
};

// Highpass filters follow from the lowpass pair by the alternating-sign
// relation; the signs are chosen so the Haar analysis highpass comes out as
// [1/sqrt(2), -1/sqrt(2)].
void derive_highpass(FilterBank& bank) {
    const std::size_t L = bank.dec_lo.size();
    bank.dec_hi.resize(L);
    bank.rec_hi.resize(L);
    for (std::size_t k = 0; k < L; ++k) {
        const double s = (k % 2 == 0) ? 1.0 : -1.0;
        bank.dec_hi[k] = s * bank.rec_lo[L - 1 - k];
        bank.rec_hi[k] = -s * bank.dec_lo[L - 1 - k];
    }
}

// Extended-signal sample for sym/zero policies; t may lie outside [0, n).
double sample_reflected(const std::vector<double>& x, std::ptrdiff_t t,
                        Extension ext) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
    if (t >= 0 && t < n)
        return x[static_cast<std::size_t>(t)];
    if (ext == Extension::zero)
        return 0.0;
    // Half-sample symmetric reflection: x[-1-u] = x[u], x[n+u] = x[n-1-u].
    while (t < 0 || t >= n) {
        if (t < 0)
            t = -1 - t;
        if (t >= n)
            t = 2 * n - 1 - t;
    }
    return x[static_cast<std::size_t>(t)];
}

std::size_t mod_index(std::ptrdiff_t t, std::size_t n) {
    std::ptrdiff_t m = t % static_cast<std::ptrdiff_t>(n);
    if (m < 0)
        m += static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(m);
}

}  // namespace

Extension extension_from_name(const std::string& name) {
    if (name == "symmetric")
        return Extension::symmetric;
    if (name == "periodic")
        return Extension::periodic;
    if (name == "zero")
        return Extension::zero;
    fail("unknown extension policy: " + name + " (want symmetric|periodic|zero)");
}

const char* extension_name(Extension ext) {
    switch (ext) {
        case Extension::symmetric: return "symmetric";
        case Extension::periodic: return "periodic";
        case Extension::zero: return "zero";
    }
    return "?";
}

void FilterBank::validate() const {
    if (dec_lo.empty() || dec_hi.empty() || rec_lo.empty() || rec_hi.empty())
        fail("filter bank has an empty filter");
    if (dec_hi.size() != dec_lo.size() || rec_lo.size() != dec_lo.size() ||
        rec_hi.size() != dec_lo.size())
        fail("filter bank filters must share one length");
}

FilterBank haar_bank(Extension ext) {
    const double r = std::sqrt(0.5);
    FilterBank bank;
    bank.ext = ext;
    bank.dec_lo = {r, r};
    bank.rec_lo = {r, r};
    derive_highpass(bank);
    return bank;
}

FilterBank bior37_bank(Extension ext) {
    const double s2 = std::sqrt(2.0);
    FilterBank bank;
    bank.ext = ext;
    bank.dec_lo.resize(16);
    bank.rec_lo.resize(16);
    for (std::size_t k = 0; k < 16; ++k) {
        bank.dec_lo[k] = kBior37DecLoNum[k] / 16384.0 * s2;
        bank.rec_lo[k] = kBior37RecLoNum[k] / 8.0 * s2;
    }
    derive_highpass(bank);
    return bank;
}

FilterBank bank_by_name(const std::string& name, Extension ext) {
    if (name == "haar")
        return haar_bank(ext);
    if (name == "bior3.7" || name == "bior37")
        return bior37_bank(ext);
    fail("unknown wavelet: " + name + " (want haar|bior3.7)");
}

std::pair<std::vector<double>, std::vector<double>>
analysis_step(const std::vector<double>& signal, const FilterBank& bank) {
    bank.validate();
    const std::size_t n = signal.size();
    const std::size_t L = bank.filter_length();
    if (n < L)
        fail("analysis_step: signal length " + std::to_string(n) +
             " shorter than filter length (minimum " + std::to_string(L) + ")");

    std::vector<double> approx, detail;
    if (bank.ext == Extension::periodic) {
        // Periodization: odd lengths repeat the last sample once, then the
        // signal is treated as circular; critically sampled output ceil(n/2).
        const std::size_t n2 = n + (n % 2);
        const std::size_t nc = n2 / 2;
        approx.resize(nc);
        detail.resize(nc);
        for (std::size_t k = 0; k < nc; ++k) {
            double sa = 0.0, sd = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                std::size_t idx = mod_index(static_cast<std::ptrdiff_t>(2 * k + 1) -
                                                static_cast<std::ptrdiff_t>(j),
                                            n2);
                const double v = idx < n ? signal[idx] : signal[n - 1];
                sa += bank.dec_lo[j] * v;
                sd += bank.dec_hi[j] * v;
            }
            approx[k] = sa;
            detail[k] = sd;
        }
    } else {
        const std::size_t nc = (n + L - 1) / 2;
        approx.resize(nc);
        detail.resize(nc);
        for (std::size_t k = 0; k < nc; ++k) {
            double sa = 0.0, sd = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(2 * k + 1) -
                                     static_cast<std::ptrdiff_t>(j);
                const double v = sample_reflected(signal, idx, bank.ext);
                sa += bank.dec_lo[j] * v;
                sd += bank.dec_hi[j] * v;
            }
            approx[k] = sa;
            detail[k] = sd;
        }
    }
    return {std::move(approx), std::move(detail)};
}

std::vector<double> synthesis_step(const std::vector<double>& approx,
                                   const std::vector<double>& detail,
                                   const FilterBank& bank,
                                   std::size_t original_length) {
    bank.validate();
    if (approx.size() != detail.size())
        fail("synthesis_step: approx length " + std::to_string(approx.size()) +
             " != detail length " + std::to_string(detail.size()));
    if (approx.empty())
        fail("synthesis_step: empty coefficients");
    const std::size_t L = bank.filter_length();
    const std::size_t up_len = 2 * approx.size();
    const std::size_t out_len = original_length == 0 ? up_len : original_length;
    if (out_len > up_len)
        fail("synthesis_step: original_length " + std::to_string(out_len) +
             " exceeds coefficient capacity " + std::to_string(up_len));

    // Coefficients sit in the odd slots of the upsampled channels; the
    // first L-1 samples of the full convolution are dropped.
    auto up_at = [&](const std::vector<double>& c, std::size_t idx) {
        return idx % 2 == 1 ? c[idx / 2] : 0.0;
    };
    std::vector<double> out(out_len);
    if (bank.ext == Extension::periodic) {
        for (std::size_t t = 0; t < out_len; ++t) {
            double s = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                std::size_t idx = mod_index(static_cast<std::ptrdiff_t>(t + L - 1) -
                                                static_cast<std::ptrdiff_t>(j),
                                            up_len);
                s += bank.rec_lo[j] * up_at(approx, idx) +
                     bank.rec_hi[j] * up_at(detail, idx);
            }
            out[t] = s;
        }
    } else {
        for (std::size_t t = 0; t < out_len; ++t) {
            double s = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t + L - 1) -
                                     static_cast<std::ptrdiff_t>(j);
                if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(up_len))
                    continue;
                s += bank.rec_lo[j] * up_at(approx, static_cast<std::size_t>(idx)) +
                     bank.rec_hi[j] * up_at(detail, static_cast<std::size_t>(idx));
            }
            out[t] = s;
        }
    }
    return out;
}

WaveletCoeffs decompose_undecimated(const std::vector<double>& values,
                                    std::size_t levels, const FilterBank& bank,
                                    bool causal) {
    bank.validate();
    if (levels < 1)
        fail("decompose_undecimated: levels must be >= 1");
    const std::size_t n = values.size();
    const std::size_t L = bank.filter_length();
    const std::size_t need = (static_cast<std::size_t>(1) << levels) * L;
    if (n < need)
        fail("decompose_undecimated: series length " + std::to_string(n) +
             " too short for " + std::to_string(levels) + " levels (minimum " +
             std::to_string(need) + ")");

    WaveletCoeffs coeffs;
    coeffs.levels = levels;
    coeffs.source_length = n;
    coeffs.matrix.assign(n * (levels + 1), 0.0);

    std::vector<double> a = values;
    std::vector<double> next(n);
    for (std::size_t i = 1; i <= levels; ++i) {
        const std::size_t dilation = static_cast<std::size_t>(1) << (i - 1);
        const std::size_t support = (L - 1) * dilation;  // filter reach
        const std::ptrdiff_t center =
            causal ? 0 : static_cast<std::ptrdiff_t>(support / 2);
        for (std::size_t t = 0; t < n; ++t) {
            double sa = 0.0, sd = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(t) + center -
                                           static_cast<std::ptrdiff_t>(j * dilation);
                const double v = bank.ext == Extension::periodic
                                     ? a[mod_index(idx, n)]
                                     : sample_reflected(a, idx, bank.ext);
                sa += bank.dec_lo[j] * v;
                sd += bank.dec_hi[j] * v;
            }
            coeffs.at(t, i - 1) = sd;
            next[t] = sa;
        }
        a.swap(next);
    }
    for (std::size_t t = 0; t < n; ++t)
        coeffs.at(t, levels) = a[t];
    return coeffs;
}

WaveletCoeffs decompose_undecimated(const ingest::TimeSeries& series,
                                    std::size_t levels, const FilterBank& bank,
                                    bool causal) {
    return decompose_undecimated(series.values, levels, bank, causal);
}

DecimatedPyramid decompose_decimated(const std::vector<double>& values,
                                     std::size_t levels, const FilterBank& bank) {
    bank.validate();
    if (levels < 1)
        fail("decompose_decimated: levels must be >= 1");
    DecimatedPyramid pyr;
    std::vector<double> a = values;
    for (std::size_t i = 0; i < levels; ++i) {
        if (a.size() < bank.filter_length())
            fail("decompose_decimated: level " + std::to_string(i + 1) +
                 " input length " + std::to_string(a.size()) +
                 " shorter than filter length " +
                 std::to_string(bank.filter_length()));
        pyr.level_lengths.push_back(a.size());
        auto [approx, detail] = analysis_step(a, bank);
        pyr.details.push_back(std::move(detail));
        a = std::move(approx);
    }
    pyr.approx = std::move(a);
    return pyr;
}

std::vector<double> reconstruct(const DecimatedPyramid& pyramid,
                                const FilterBank& bank) {
    if (pyramid.details.empty() ||
        pyramid.details.size() != pyramid.level_lengths.size())
        fail("reconstruct: malformed pyramid");
    std::vector<double> a = pyramid.approx;
    for (std::size_t i = pyramid.details.size(); i-- > 0;)
        a = synthesis_step(a, pyramid.details[i], bank, pyramid.level_lengths[i]);
    return a;
}

BiorthReport verify_biorthogonality(const FilterBank& bank) {
    bank.validate();
    BiorthReport report;
    double lo_sum = 0.0, hi_sum = 0.0;
    for (double v : bank.dec_lo)
        lo_sum += v;
    for (double v : bank.dec_hi)
        hi_sum += v;
    report.lowpass_sum_dev = std::abs(lo_sum - std::sqrt(2.0));
    report.highpass_sum_dev = std::abs(hi_sum);

    std::mt19937_64 rng(0x5eedba5e);
    std::vector<double> signal(256);
    for (int trial = 0; trial < 100; ++trial) {
        for (double& v : signal)
            v = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;  // [-1, 1)
        auto [approx, detail] = analysis_step(signal, bank);
        std::vector<double> rec = synthesis_step(approx, detail, bank, signal.size());
        for (std::size_t t = 0; t < signal.size(); ++t)
            report.max_pr_residual =
                std::max(report.max_pr_residual, std::abs(rec[t] - signal[t]));
    }
    return report;
}

void save_coeffs_csv(const WaveletCoeffs& coeffs, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail("cannot write coefficients CSV: " + path);
    for (std::size_t c = 0; c < coeffs.levels; ++c)
        out << 'd' << (c + 1) << ',';
    out << "a" << coeffs.levels << '\n';
    char buf[64];
    for (std::size_t t = 0; t < coeffs.source_length; ++t) {
        for (std::size_t c = 0; c < coeffs.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", coeffs.at(t, c));
            out << buf << (c + 1 < coeffs.cols() ? ',' : '\n');
        }
    }
    if (!out)
        fail("write failed: " + path);
}

}  // namespace wrnn::dwt
