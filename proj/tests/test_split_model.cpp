#include <doctest.h>

#include <random>

#include "sicta/detail/compositions.hpp"
#include "sicta/errors.hpp"
#include "sicta/split_model.hpp"

using namespace sicta;

TEST_CASE("split distribution validation and tails")
{
    auto two = make_split_distribution({Rational(1, 2), Rational(1, 2)});
    CHECK(two.tail_exact(0) == 1);
    CHECK(two.tail_exact(1) == Rational(1, 2));

    auto three = make_split_distribution({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(three.tail_exact(0) == 1);
    CHECK(three.tail_exact(1) == Rational(1, 2));
    CHECK(three.tail_exact(2) == Rational(1, 4));
    CHECK(three.tail_exact(3) == 0);

    CHECK_THROWS_AS(make_split_distribution({Rational(1), Rational(0)}), RejectedDistribution);
    CHECK_THROWS_AS(make_split_distribution({Rational(3, 4), Rational(1, 2)}), RejectedDistribution);
    CHECK_THROWS_AS(make_split_distribution({Rational(-1, 4), Rational(5, 4)}), RejectedDistribution);
    CHECK_THROWS_AS(make_split_distribution({Rational(1)}), RejectedDistribution);

    // zero entries are allowed
    auto with_zero = make_split_distribution({Rational(1, 2), Rational(0), Rational(1, 2)});
    CHECK(with_zero.d() == 3);
}

TEST_CASE("floating input is renormalized exactly")
{
    const std::vector<double> p{0.3, 0.7};
    auto dist = make_split_distribution(std::span<const double>(p));
    CHECK(dist.exact()[0] + dist.exact()[1] == 1);
    CHECK(dist.p(1) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK_FALSE(dist.rational_input());

    const std::vector<double> off{0.3, 0.6};
    CHECK_THROWS_AS(make_split_distribution(std::span<const double>(off)), RejectedDistribution);
}

TEST_CASE("pbi and fair shorthands")
{
    CHECK(pbi(2) == make_split_distribution({Rational(1, 2), Rational(1, 2)}));
    CHECK(pbi(3) == make_split_distribution({Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
    CHECK(pbi(4) ==
          make_split_distribution({Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8)}));
    for (int d = 2; d <= 16; ++d) {
        CHECK_NOTHROW(pbi(d));
        CHECK(pbi(d).tail_exact(d - 1) == pbi(d).p_exact(d));
    }
    CHECK_THROWS_AS(pbi(1), InvalidArgument);
    CHECK(parse_distribution("pbi:4") == pbi(4));
    CHECK(parse_distribution("fair:3") == fair(3));
    CHECK(parse_distribution("1/2, 1/4,1/4") == pbi(3));
    CHECK(parse_distribution("0.5,0.5") == pbi(2));
    CHECK_THROWS_AS(parse_distribution("pbi:x"), InvalidArgument);
    CHECK_THROWS_AS(parse_distribution("0.5,0.6"), RejectedDistribution);
}

TEST_CASE("tail masses equal one minus prefix sums")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 7);
        std::vector<long> raw(static_cast<std::size_t>(d));
        long total = 0;
        for (auto& r : raw) {
            r = 1 + static_cast<long>(rng() % 50);
            total += r;
        }
        std::vector<Rational> p;
        for (long r : raw) {
            p.emplace_back(r, total);
        }
        auto dist = make_split_distribution(p);
        Rational prefix = 0;
        for (int k = 0; k <= d; ++k) {
            CHECK(dist.tail_exact(k) == 1 - prefix);
            if (k < d) {
                prefix += dist.p_exact(k + 1);
            }
        }
        for (int k = 1; k <= d; ++k) {
            CHECK(dist.tail_exact(k) <= dist.tail_exact(k - 1));
        }
    }
}

TEST_CASE("last counted slot")
{
    CHECK(last_counted_slot(std::vector<int>{2, 0}, 2) == 1);
    CHECK(last_counted_slot(std::vector<int>{0, 2}, 2) == 2);
    CHECK(last_counted_slot(std::vector<int>{1, 2, 1}, 4) == 2);
    CHECK_THROWS_AS(last_counted_slot(std::vector<int>{1, 1}, 3), InvalidOccupancy);

    for (int d = 2; d <= 4; ++d) {
        for (int n = 2; n <= 8; ++n) {
            detail::for_each_composition(n, d, 0, [&](const std::vector<int>& mu) {
                const int m = last_counted_slot(mu, n);
                CHECK(m >= 1);
                CHECK(m <= d);
                int suffix = 0;
                for (int j = m; j < d; ++j) {
                    suffix += mu[static_cast<std::size_t>(j)];
                }
                CHECK(suffix <= 1);
            });
        }
    }
}

TEST_CASE("composition enumeration counts")
{
    int count = 0;
    detail::for_each_composition(5, 3, 0, [&](const std::vector<int>&) { ++count; });
    CHECK(count == 21);
    count = 0;
    detail::for_each_composition(5, 3, 1, [&](const std::vector<int>&) { ++count; });
    CHECK(count == 6);
    count = 0;
    detail::for_each_composition(0, 0, 1, [&](const std::vector<int>&) { ++count; });
    CHECK(count == 1);
}
