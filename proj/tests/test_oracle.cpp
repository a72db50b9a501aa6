#include <doctest.h>

#include "sicta/errors.hpp"
#include "sicta/oracle.hpp"

using namespace sicta;

TEST_CASE("oracle expectations at the fair binary split")
{
    const auto table = exact_expectations(fair(2), 6);
    CHECK(table.L[0] == 1);
    CHECK(table.L[1] == 1);
    CHECK(table.C[1] == 0);
    CHECK(table.S[1] == 1);
    CHECK(table.I[1] == 0);
    CHECK(table.I[0] == 1);
    CHECK(table.L[2] == 3);
    CHECK(table.C[2] == Rational(3, 2));
    CHECK(table.S[2] == 1);
    CHECK(table.I[2] == Rational(1, 2));
    CHECK(table.L[3] == Rational(13, 3));
}

TEST_CASE("oracle conservation and success bound")
{
    for (const auto& dist : {fair(2), fair(3), pbi(3), pbi(4), parse_distribution("1/3,1/2,1/6")}) {
        const auto table = exact_expectations(dist, 10);
        for (int n = 0; n <= 10; ++n) {
            const auto k = static_cast<std::size_t>(n);
            CHECK(table.L[k] == table.C[k] + table.S[k] + table.I[k]);
            CHECK(table.S[k] <= n);
        }
    }
}

TEST_CASE("counted-slot expectations do not depend on d at pbi")
{
    const auto base = exact_expectations(pbi(2), 12);
    for (int d = 3; d <= 5; ++d) {
        const auto other = exact_expectations(pbi(d), 12);
        CHECK(other.L == base.L);
        CHECK(other.C == base.C);
        CHECK(other.S == base.S);
        CHECK(other.I == base.I);
    }
}

TEST_CASE("exact law of the CRI length")
{
    const auto l2 = exact_cri_distribution(fair(2), 2, 12);
    CHECK(l2.probs[2] == Rational(1, 2));
    CHECK(l2.probs[0] == 0);
    CHECK(l2.probs[1] == 0);

    for (const auto& dist : {fair(2), pbi(3), fair(3)}) {
        CHECK(exact_cri_distribution(dist, 1, 5).probs[1] == 1);
        CHECK(exact_cri_distribution(dist, 3, 10).probs[2] == 0);
    }

    CHECK_THROWS_AS(exact_cri_distribution(fair(2), 4, 6, Rational(1, 1000000)), TruncationTooTight);
}

TEST_CASE("CRI length law reproduces the mean")
{
    const auto dist = pbi(3);
    const auto table = exact_expectations(dist, 5);
    const int j_max = 160;
    const auto laws = exact_cri_distributions(dist, 5, j_max);
    for (int n = 2; n <= 5; ++n) {
        const auto& law = laws[static_cast<std::size_t>(n)];
        CHECK(to_double(law.residual) < 1e-12);
        Rational mean = 0;
        for (int j = 0; j <= j_max; ++j) {
            mean += law.probs[static_cast<std::size_t>(j)] * j;
        }
        const double gap = to_double(table.L[static_cast<std::size_t>(n)] - mean);
        CHECK(gap >= 0.0);
        CHECK(gap < 1e-9);
    }
}

TEST_CASE("tagged resolution delays")
{
    const auto tau = exact_resolution_delays(fair(2), 4);
    CHECK(tau[0] == 1);
    CHECK(tau[1] == 3);
    const auto t = poisson_series_coefficients(tau);
    CHECK(t[0] == 1);
    CHECK(t[1] == 2);
}
