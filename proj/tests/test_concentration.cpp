#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ledgerflow/concentration.hpp"

using namespace ledgerflow;

namespace {

// Closed forms for the benchmark family of m full shares plus one share r:
//   H = (m + r^2) / (m + r)^2
//   M_n = (m + r) (m + r^(n-1)) / (m + r^n)
double closed_form_hh(int m, double r) {
    return (m + r * r) / ((m + r) * (m + r));
}

double closed_form_mihh(int m, double r, int n) {
    return (m + r) * (m + std::pow(r, n - 1)) / (m + std::pow(r, n));
}

ShareList equal_shares(int m) {
    return normalize(std::vector<double>(static_cast<std::size_t>(m), 1.0));
}

}  // namespace

TEST_CASE("normalize divides by the total", "[concentration]") {
    const ShareList s = normalize(std::vector<double>{2.0, 2.0});
    REQUIRE(s.values() == std::vector<double>{0.5, 0.5});

    const ShareList empty = normalize(std::vector<double>{});
    REQUIRE(empty.empty());

    const ShareList wide = normalize(std::vector<double>{1e11, 1.0, 1.0});
    REQUIRE(wide.values()[0] == Catch::Approx(1e11 / (1e11 + 2.0)));
    REQUIRE(wide.values()[1] == Catch::Approx(1.0 / (1e11 + 2.0)));
    double sum = 0.0;
    for (double v : wide.values()) sum += v;
    REQUIRE(sum == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalize rejects bad input", "[concentration]") {
    REQUIRE_THROWS_AS(normalize(std::vector<double>{1.0, -1.0}), DomainError);
    REQUIRE_THROWS_AS(normalize(std::vector<double>{0.0, 0.0}), DomainError);
}

TEST_CASE("hh_index on reference lists", "[concentration]") {
    std::vector<double> one_hot{1.0, 0.0, 0.0, 0.0};
    REQUIRE(hh_index(ShareList::from_shares(one_hot)) == 1.0);

    for (int m : {1, 2, 5, 10})
        REQUIRE(hh_index(equal_shares(m)) == Catch::Approx(1.0 / m).epsilon(1e-12));

    // Benchmark family, m=2, r=0.5: (2 + 0.25) / 2.5^2 = 0.36.
    REQUIRE(hh_index(benchmark_shares(2, 0.5)) == Catch::Approx(0.36).epsilon(1e-12));

    REQUIRE_THROWS_AS(hh_index(ShareList{}), DomainError);
}

TEST_CASE("modified_hh power sums", "[concentration]") {
    const ShareList half = ShareList::from_shares({0.5, 0.5});
    REQUIRE(modified_hh(half, 1) == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(modified_hh(half, 3) == Catch::Approx(0.25).epsilon(1e-12));
    REQUIRE(modified_hh(half, 2) == hh_index(half));

    const ShareList single = ShareList::from_shares({1.0});
    REQUIRE(modified_hh(single, 20) == 1.0);

    REQUIRE_THROWS_AS(modified_hh(half, 0), DomainError);
    REQUIRE_THROWS_AS(modified_hh(ShareList{}, 2), DomainError);
}

TEST_CASE("modified_inverse_hh basics", "[concentration]") {
    // Equal shares rescale to p = 1 exactly, so the result is exact.
    for (int m : {1, 3, 7})
        for (int n : {2, 5, 20})
            REQUIRE(modified_inverse_hh(equal_shares(m), n) == static_cast<double>(m));

    // m=2, r=0.5, n=20 against the closed form evaluated exactly in rational
    // arithmetic: 2.5 * (2 + 0.5^19) / (2 + 0.5^20) = 2.500001192092327...
    const double expected = closed_form_mihh(2, 0.5, 20);
    REQUIRE(expected == Catch::Approx(2.500001192092327).epsilon(1e-14));
    REQUIRE(modified_inverse_hh(benchmark_shares(2, 0.5), 20) ==
            Catch::Approx(expected).epsilon(1e-12));

    REQUIRE(modified_inverse_hh(ShareList{}, 20) == 0.0);
    REQUIRE_THROWS_AS(modified_inverse_hh(equal_shares(2), 1), DomainError);
}

TEST_CASE("closed-form agreement over the benchmark grid", "[concentration]") {
    for (int m = 1; m <= 10; ++m) {
        for (int ri = 0; ri <= 100; ++ri) {
            const double r = ri / 100.0;
            const ShareList shares = benchmark_shares(m, r);
            const double inv_hh = 1.0 / hh_index(shares);
            REQUIRE(inv_hh == Catch::Approx(1.0 / closed_form_hh(m, r)).epsilon(1e-9));
            for (int n : {2, 3, 10, 20}) {
                const double got = modified_inverse_hh(shares, n);
                const double want = closed_form_mihh(m, r, n);
                REQUIRE(std::abs(got - want) / want <= 1e-9);
            }
        }
    }
}

TEST_CASE("higher order approaches the effective count monotonically", "[concentration]") {
    for (int m = 1; m <= 10; ++m) {
        for (int ri = 1; ri < 100; ++ri) {
            const double r = ri / 100.0;
            const ShareList shares = benchmark_shares(m, r);
            double prev_gap = std::abs(modified_inverse_hh(shares, 2) - (m + r));
            for (int n = 3; n <= 20; ++n) {
                const double gap = std::abs(modified_inverse_hh(shares, n) - (m + r));
                REQUIRE(gap <= prev_gap + 1e-12);
                prev_gap = gap;
            }
        }
    }
}

TEST_CASE("order 20 tracks the effective count within 1.5 percent", "[concentration]") {
    double worst = 0.0;
    for (int m = 1; m <= 10; ++m) {
        for (int ri = 0; ri <= 100; ++ri) {
            const double r = ri / 100.0;
            const double ratio = modified_inverse_hh(benchmark_shares(m, r), 20) / (m + r);
            worst = std::max(worst, std::abs(ratio - 1.0));
        }
    }
    REQUIRE(worst <= 0.015);
    // The deviation peaks near m=1, r=0.95.
    REQUIRE(worst > 0.012);
}

TEST_CASE("indices are scale invariant on raw input", "[concentration]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(1 + trial % 9);
        for (double& v : raw) v = unif(rng) + 1e-3;
        const ShareList base = normalize(raw);

        // Power-of-two scaling is exact in binary floating point.
        std::vector<double> doubled = raw;
        for (double& v : doubled) v *= 4096.0;
        REQUIRE(normalize(doubled).values() == base.values());

        std::vector<double> scaled = raw;
        for (double& v : scaled) v *= 3.7;
        const ShareList other = normalize(scaled);
        for (std::size_t i = 0; i < raw.size(); ++i)
            REQUIRE(other.values()[i] == Catch::Approx(base.values()[i]).epsilon(1e-12));
    }
}

TEST_CASE("order 2 inverts the concentration index", "[concentration]") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw(1 + trial % 12);
        for (double& v : raw) v = unif(rng) + 1e-4;
        const ShareList s = normalize(raw);
        REQUIRE(modified_inverse_hh(s, 2) ==
                Catch::Approx(1.0 / hh_index(s)).epsilon(1e-12));
    }
}

TEST_CASE("permutation invariance", "[concentration]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> raw(2 + trial % 8);
        for (double& v : raw) v = unif(rng) + 1e-6;
        const ShareList s = normalize(raw);
        const double h = hh_index(s);
        const double h3 = modified_hh(s, 3);
        const double m20 = modified_inverse_hh(s, 20);

        std::vector<double> shuffled = raw;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const ShareList p = normalize(shuffled);
        REQUIRE(hh_index(p) == Catch::Approx(h).epsilon(1e-12));
        REQUIRE(modified_hh(p, 3) == Catch::Approx(h3).epsilon(1e-12));
        REQUIRE(modified_inverse_hh(p, 20) == Catch::Approx(m20).epsilon(1e-12));
    }
}

TEST_CASE("extreme share ratios stay finite", "[concentration]") {
    const ShareList s = normalize(std::vector<double>{1e11, 1.0});
    const double m20 = modified_inverse_hh(s, 20);
    REQUIRE(std::isfinite(m20));
    REQUIRE(m20 > 1.0);
    REQUIRE(m20 < 2.0);

    // Seventeen tiny shares against one that is 17 orders larger.
    std::vector<double> raw(18, 1.0);
    raw[0] = 1e17;
    const double wide = modified_inverse_hh(normalize(raw), 20);
    REQUIRE(std::isfinite(wide));
    REQUIRE(wide >= 1.0);
    REQUIRE(wide < 1.001);
}
