#include "wrnn/lifting.hpp"

#include <stdexcept>
#include <utility>

namespace wrnn::lifting {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
}

// Whole-sample symmetric reflection into [0, n): ..., x[1], x[0], x[1], ...
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
    if (n == 1)
        return 0;
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n);
    while (i < 0 || i >= m) {
        if (i < 0)
            i = -i;
        if (i >= m)
            i = 2 * (m - 1) - i;
    }
    return static_cast<std::size_t>(i);
}

double apply_stencil(const Stencil& s, const std::vector<double>& src,
                     std::size_t k) {
    double v = 0.0;
    for (std::size_t i = 0; i < s.weights.size(); ++i)
        v += s.weights[i] *
             src[reflect(static_cast<std::ptrdiff_t>(k) + s.offsets[i], src.size())];
    return v;
}

}  // namespace

LiftingStage haar_stage() {
    LiftingStage st;
    st.name = "haar";
    st.annihilation_order = 1;
    st.predict = {{0}, {1.0}};
    st.update = {{0}, {0.5}};
    return st;
}

LiftingStage linear_stage() {
    LiftingStage st;
    st.name = "linear";
    st.annihilation_order = 2;
    st.predict = {{0, 1}, {0.5, 0.5}};
    st.update = {{-1, 0}, {0.25, 0.25}};
    return st;
}

LiftingStage stage_by_name(const std::string& name) {
    if (name == "haar")
        return haar_stage();
    if (name == "linear")
        return linear_stage();
    fail("unknown lifting stage: " + name + " (want haar|linear)");
}

std::pair<std::vector<double>, std::vector<double>>
split(const std::vector<double>& series) {
    if (series.size() < 2)
        fail("split: series length must be >= 2");
    std::vector<double> even, odd;
    even.reserve((series.size() + 1) / 2);
    odd.reserve(series.size() / 2);
    for (std::size_t i = 0; i < series.size(); ++i)
        (i % 2 == 0 ? even : odd).push_back(series[i]);
    return {std::move(even), std::move(odd)};
}

LiftingResult lift_forward(const std::vector<double>& series,
                           const LiftingStage& stage) {
    auto [even, odd] = split(series);
    LiftingResult res;
    res.original_length = series.size();
    res.d.resize(odd.size());
    for (std::size_t k = 0; k < odd.size(); ++k)
        res.d[k] = odd[k] - apply_stencil(stage.predict, even, k);
    res.a = std::move(even);
    // A trailing unpaired even sample (odd-length input) is left unchanged.
    for (std::size_t k = 0; k < res.d.size(); ++k)
        res.a[k] += apply_stencil(stage.update, res.d, k);
    return res;
}

std::vector<double> lift_inverse(const LiftingResult& result,
                                 const LiftingStage& stage) {
    const std::size_t n = result.original_length;
    if (result.a.size() + result.d.size() != n || result.a.size() != (n + 1) / 2)
        fail("lift_inverse: a/d lengths inconsistent with original_length");
    std::vector<double> even = result.a;
    for (std::size_t k = 0; k < result.d.size(); ++k)
        even[k] -= apply_stencil(stage.update, result.d, k);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < result.d.size(); ++k)
        out[2 * k + 1] = result.d[k] + apply_stencil(stage.predict, even, k);
    for (std::size_t k = 0; k < even.size(); ++k)
        out[2 * k] = even[k];
    return out;
}

LiftingPyramid lift_multilevel(const std::vector<double>& series,
                               const LiftingStage& stage, std::size_t levels) {
    if (levels < 1)
        fail("lift_multilevel: levels must be >= 1");
    if (series.size() < (static_cast<std::size_t>(1) << levels))
        fail("lift_multilevel: series length " + std::to_string(series.size()) +
             " too short for " + std::to_string(levels) + " levels (minimum " +
             std::to_string(static_cast<std::size_t>(1) << levels) + ")");
    LiftingPyramid pyr;
    std::vector<double> a = series;
    for (std::size_t i = 0; i < levels; ++i) {
        pyr.level_lengths.push_back(a.size());
        LiftingResult res = lift_forward(a, stage);
        pyr.details.push_back(std::move(res.d));
        a = std::move(res.a);
    }
    pyr.approx = std::move(a);
    return pyr;
}

std::vector<double> inverse_multilevel(const LiftingPyramid& pyramid,
                                       const LiftingStage& stage) {
    if (pyramid.details.empty() ||
        pyramid.details.size() != pyramid.level_lengths.size())
        fail("inverse_multilevel: malformed pyramid");
    std::vector<double> a = pyramid.approx;
    for (std::size_t i = pyramid.details.size(); i-- > 0;) {
        LiftingResult res;
        res.a = std::move(a);
        res.d = pyramid.details[i];
        res.original_length = pyramid.level_lengths[i];
        a = lift_inverse(res, stage);
    }
    return a;
}

}  // namespace wrnn::lifting
