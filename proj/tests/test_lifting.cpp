#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "wrnn/lifting.hpp"

using namespace wrnn;

namespace {

// Integer-valued series keep every predict/update sum exactly representable
// (dyadic weights on integers), which the bit-exactness checks rely on.
std::vector<double> random_counts(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> x(n);
    for (double& v : x)
        v = static_cast<double>(rng() % 2000000);
    return x;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() ||
            std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("split separates parities and rejects singletons") {
    const auto [e2, o2] = lifting::split({2.0, 4.0});
    CHECK(e2 == std::vector<double>{2.0});
    CHECK(o2 == std::vector<double>{4.0});

    const auto [e5, o5] = lifting::split({0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(e5 == std::vector<double>{0.0, 2.0, 4.0});
    CHECK(o5 == std::vector<double>{1.0, 3.0});

    CHECK_THROWS_AS(lifting::split({1.0}), std::runtime_error);
    CHECK_THROWS_AS(lifting::split({}), std::runtime_error);
}

TEST_CASE("split interleaves back exactly") {
    const auto x = random_counts(101, 7);
    const auto [even, odd] = lifting::split(x);
    REQUIRE(even.size() == 51);
    REQUIRE(odd.size() == 50);
    std::vector<double> back(x.size());
    for (std::size_t k = 0; k < even.size(); ++k)
        back[2 * k] = even[k];
    for (std::size_t k = 0; k < odd.size(); ++k)
        back[2 * k + 1] = odd[k];
    CHECK(bit_equal(back, x));
}

TEST_CASE("stage_by_name resolves the shipped stages") {
    CHECK(lifting::stage_by_name("haar").name == "haar");
    CHECK(lifting::stage_by_name("linear").name == "linear");
    CHECK(lifting::stage_by_name("haar").annihilation_order == 1);
    CHECK(lifting::stage_by_name("linear").annihilation_order == 2);
    CHECK_THROWS_AS(lifting::stage_by_name("cubic"), std::runtime_error);
}

TEST_CASE("haar stage on [2,4] gives d=[2], a=[3]") {
    const auto res = lifting::lift_forward({2.0, 4.0}, lifting::haar_stage());
    CHECK(res.d == std::vector<double>{2.0});
    CHECK(res.a == std::vector<double>{3.0});
    CHECK(res.original_length == 2);

    lifting::LiftingResult inverse_input;
    inverse_input.a = {3.0};
    inverse_input.d = {2.0};
    inverse_input.original_length = 2;
    CHECK(lifting::lift_inverse(inverse_input, lifting::haar_stage()) ==
          std::vector<double>{2.0, 4.0});
}

TEST_CASE("haar stage equals the pairwise mean/difference oracle") {
    const auto x = random_counts(256, 8);
    const auto res = lifting::lift_forward(x, lifting::haar_stage());
    REQUIRE(res.a.size() == 128);
    REQUIRE(res.d.size() == 128);
    for (std::size_t k = 0; k < 128; ++k) {
        CHECK(res.d[k] == x[2 * k + 1] - x[2 * k]);
        CHECK(res.a[k] == (x[2 * k] + x[2 * k + 1]) / 2.0);
    }
}

TEST_CASE("linear stage annihilates ramps in the interior") {
    std::vector<double> ramp{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
    const auto res = lifting::lift_forward(ramp, lifting::linear_stage());
    // Odd sample k sits exactly between evens k and k+1 on a ramp.
    REQUIRE(res.d.size() == 3);
    CHECK(res.d[0] == 0.0);
    CHECK(res.d[1] == 0.0);
    // Last odd position reflects beyond the end; not an interior sample.

    std::vector<double> longer(41);
    for (std::size_t t = 0; t < longer.size(); ++t)
        longer[t] = 3.0 * static_cast<double>(t) + 2.0;
    const auto res2 = lifting::lift_forward(longer, lifting::linear_stage());
    for (std::size_t k = 0; k + 1 < res2.d.size(); ++k)
        CHECK(std::abs(res2.d[k]) < 1e-10);
}

TEST_CASE("zero coefficients invert to a zero series") {
    lifting::LiftingResult res;
    res.a.assign(5, 0.0);
    res.d.assign(4, 0.0);
    res.original_length = 9;
    const auto x = lifting::lift_inverse(res, lifting::linear_stage());
    CHECK(x == std::vector<double>(9, 0.0));
}

TEST_CASE("lift_inverse validates coefficient lengths") {
    lifting::LiftingResult res;
    res.a = {1.0, 2.0};
    res.d = {3.0};
    res.original_length = 4;  // needs len(a) == 2 and len(d) == 2
    CHECK_THROWS_AS(lifting::lift_inverse(res, lifting::haar_stage()),
                    std::runtime_error);
}

TEST_CASE("single-level round trips are bit-exact for both stages and parities") {
    for (const auto& stage : {lifting::haar_stage(), lifting::linear_stage()}) {
        for (std::uint64_t trial = 0; trial < 250; ++trial) {
            const std::size_t n = 2 + trial % 97;
            const auto x = random_counts(n, 1000 + trial);
            const auto res = lifting::lift_forward(x, stage);
            REQUIRE(res.a.size() + res.d.size() == n);
            CHECK(bit_equal(lifting::lift_inverse(res, stage), x));
        }
    }
}

TEST_CASE("odd-length trailing even sample passes through unchanged") {
    const auto x = random_counts(9, 17);
    for (const auto& stage : {lifting::haar_stage(), lifting::linear_stage()}) {
        const auto res = lifting::lift_forward(x, stage);
        REQUIRE(res.a.size() == 5);
        REQUIRE(res.d.size() == 4);
        CHECK(res.a.back() == x.back());
    }
}

TEST_CASE("multilevel constant series concentrates into the approx") {
    const std::vector<double> x(8, 42.0);
    const auto pyr = lifting::lift_multilevel(x, lifting::haar_stage(), 3);
    REQUIRE(pyr.details.size() == 3);
    for (const auto& d : pyr.details)
        for (double v : d)
            CHECK(v == 0.0);
    REQUIRE(pyr.approx.size() == 1);
    CHECK(pyr.approx[0] == 42.0);
}

TEST_CASE("multilevel round trips are bit-exact") {
    for (const auto& stage : {lifting::haar_stage(), lifting::linear_stage()}) {
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            const std::size_t n = 64 + trial;  // both parities
            const auto x = random_counts(n, 2000 + trial);
            const auto pyr = lifting::lift_multilevel(x, stage, 4);
            CHECK(bit_equal(lifting::inverse_multilevel(pyr, stage), x));
        }
    }
}

TEST_CASE("multilevel rejects over-deep decompositions") {
    const auto x = random_counts(7, 3);
    CHECK_THROWS_AS(lifting::lift_multilevel(x, lifting::haar_stage(), 3),
                    std::runtime_error);
    CHECK_THROWS_AS(lifting::lift_multilevel(x, lifting::haar_stage(), 0),
                    std::runtime_error);
}

TEST_CASE("haar lifting matches the decimated haar filter bank scaling") {
    // Filter-bank Haar: approx = (pair sum)/sqrt(2) = mean*sqrt(2);
    // detail = (odd - even)/sqrt(2) = lifting detail / sqrt(2).
    const auto x = random_counts(64, 4);
    const auto res = lifting::lift_forward(x, lifting::haar_stage());
    const double s2 = std::sqrt(2.0);
    for (std::size_t k = 0; k < res.a.size(); ++k) {
        const double fb_approx = (x[2 * k] + x[2 * k + 1]) * std::sqrt(0.5);
        const double fb_detail = (x[2 * k + 1] - x[2 * k]) * std::sqrt(0.5);
        CHECK(std::abs(res.a[k] * s2 - fb_approx) < 1e-8);
        CHECK(std::abs(res.d[k] / s2 - fb_detail) < 1e-8);
    }
}

TEST_CASE("quadratic series defeats the linear stage but not exactness") {
    std::vector<double> x(33);
    for (std::size_t t = 0; t < x.size(); ++t)
        x[t] = static_cast<double>(t * t);
    const auto stage = lifting::linear_stage();
    const auto res = lifting::lift_forward(x, stage);
    // Degree-2 input: interior details are the constant second difference.
    for (std::size_t k = 1; k + 1 < res.d.size(); ++k)
        CHECK(res.d[k] == res.d[1]);
    CHECK(res.d[1] != 0.0);
    CHECK(bit_equal(lifting::lift_inverse(res, stage), x));
}
