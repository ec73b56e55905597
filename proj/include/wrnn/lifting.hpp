#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Second-generation wavelet transform: split / predict / update and its
// exact inverse.  Every stage is a pair of finite-support linear stencils,
// so the inverse replays the same arithmetic with the signs flipped and the
// round trip is bit-exact, not merely within tolerance.

namespace wrnn::lifting {

// Linear stencil over a subsequence: value(k) = sum_i weights[i] * src[k + offsets[i]].
// Out-of-range indices reflect symmetrically without repeating the edge
// (whole-sample reflection).
struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;
};

struct LiftingStage {
    std::string name;
    int annihilation_order = 1;  // degree k-1 polynomials give zero interior detail
    Stencil predict;             // applied to the even subsequence, indexed by odd position
    Stencil update;              // applied to the detail sequence, indexed by even position
};

// P: copy the left even neighbour; U: half the detail.
LiftingStage haar_stage();
// P: average of the two flanking evens; U: quarter of the two flanking details.
LiftingStage linear_stage();
LiftingStage stage_by_name(const std::string& name);

// Split convention: even samples (indices 0,2,4,...) first.  For odd input
// lengths the trailing unpaired even sample passes into `a` unchanged.
struct LiftingResult {
    std::vector<double> a;  // coarse
    std::vector<double> d;  // detail
    std::size_t original_length = 0;
};

struct LiftingPyramid {
    std::vector<std::vector<double>> details;  // details[i] = level i+1
    std::vector<double> approx;
    std::vector<std::size_t> level_lengths;
};

// even = indices 0,2,4,...; odd = indices 1,3,5,...  Throws on length < 2.
std::pair<std::vector<double>, std::vector<double>> split(const std::vector<double>& series);

// d[k] = odd[k] - P(even)[k];  a[k] = even[k] + U(d)[k].
LiftingResult lift_forward(const std::vector<double>& series, const LiftingStage& stage);

// Exact inverse: x_e[k] = a[k] - U(d)[k];  x_o[k] = d[k] + P(x_e)[k].
std::vector<double> lift_inverse(const LiftingResult& result, const LiftingStage& stage);

// Recursive application to successive coarse sequences; length must be >= 2^M.
LiftingPyramid lift_multilevel(const std::vector<double>& series,
                               const LiftingStage& stage, std::size_t levels);
std::vector<double> inverse_multilevel(const LiftingPyramid& pyramid,
                                       const LiftingStage& stage);

}  // namespace wrnn::lifting
