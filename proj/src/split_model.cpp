#include "sicta/split_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sicta/errors.hpp"

namespace sicta {

SplitDistribution::SplitDistribution(std::vector<Rational> p, bool rational_input)
    : exact_(std::move(p)), rational_input_(rational_input)
{
    const std::size_t d = exact_.size();
    values_.reserve(d);
    for (const auto& q : exact_) {
        values_.push_back(sicta::to_double(q));
    }
    tail_exact_.assign(d + 1, Rational(0));
    for (std::size_t k = d; k-- > 0;) {
        tail_exact_[k] = tail_exact_[k + 1] + exact_[k];
    }
    tail_.reserve(d + 1);
    for (const auto& q : tail_exact_) {
        tail_.push_back(sicta::to_double(q));
    }
}

namespace {

void validate(const std::vector<Rational>& p)
{
    if (p.size() < 2) {
        throw RejectedDistribution("a splitting distribution needs d >= 2 entries");
    }
    Rational total = 0;
    for (const auto& q : p) {
        if (q < 0) {
            throw RejectedDistribution("negative splitting probability " + to_string(q));
        }
        if (q >= 1) {
            throw RejectedDistribution("max p_j must be < 1, otherwise a collision can recur forever");
        }
        total += q;
    }
    if (total != 1) {
        throw RejectedDistribution("splitting probabilities sum to " + to_string(total) + ", not 1");
    }
}

}  // namespace

SplitDistribution SplitDistribution::from_rationals(std::vector<Rational> p)
{
    for (auto& q : p) {
        q.canonicalize();
    }
    validate(p);
    return SplitDistribution(std::move(p), true);
}

SplitDistribution SplitDistribution::from_doubles(std::span<const double> p, double tol)
{
    if (p.size() < 2) {
        throw RejectedDistribution("a splitting distribution needs d >= 2 entries");
    }
    double sum = 0.0;
    for (double v : p) {
        if (!std::isfinite(v)) {
            throw RejectedDistribution("non-finite splitting probability");
        }
        if (v < 0.0) {
            throw RejectedDistribution("negative splitting probability");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw RejectedDistribution("splitting probabilities sum to " + std::to_string(sum) + ", not 1");
    }
    std::vector<Rational> exact;
    exact.reserve(p.size());
    for (double v : p) {
        exact.push_back(exact_rational(v));
    }
    Rational total = std::accumulate(exact.begin(), exact.end(), Rational(0));
    auto largest = std::max_element(exact.begin(), exact.end());
    *largest += Rational(1) - total;
    validate(exact);
    return SplitDistribution(std::move(exact), false);
}

double SplitDistribution::min_positive() const
{
    double best = 1.0;
    for (double v : values_) {
        if (v > 0.0) {
            best = std::min(best, v);
        }
    }
    return best;
}

std::string SplitDistribution::to_string() const
{
    std::ostringstream out;
    for (std::size_t j = 0; j < exact_.size(); ++j) {
        out << (j ? "," : "") << sicta::to_string(exact_[j]);
    }
    return out.str();
}

SplitDistribution make_split_distribution(std::vector<Rational> p)
{
    return SplitDistribution::from_rationals(std::move(p));
}

SplitDistribution make_split_distribution(std::span<const double> p)
{
    return SplitDistribution::from_doubles(p);
}

SplitDistribution pbi(int d)
{
    if (d < 2) {
        throw InvalidArgument("pbi requires d >= 2");
    }
    std::vector<Rational> p;
    p.reserve(static_cast<std::size_t>(d));
    for (int i = 1; i <= d; ++i) {
        BigInt den = 1;
        den <<= static_cast<mp_bitcnt_t>(std::min(i, d - 1));
        p.emplace_back(BigInt(1), den);
    }
    return SplitDistribution::from_rationals(std::move(p));
}

SplitDistribution fair(int d)
{
    if (d < 2) {
        throw InvalidArgument("fair split requires d >= 2");
    }
    return SplitDistribution::from_rationals(std::vector<Rational>(static_cast<std::size_t>(d), Rational(1, d)));
}

SplitDistribution parse_distribution(const std::string& text)
{
    auto parse_d = [&](std::size_t prefix) {
        try {
            std::size_t used = 0;
            int d = std::stoi(text.substr(prefix), &used);
            if (prefix + used != text.size()) {
                throw InvalidArgument("trailing characters");
            }
            return d;
        } catch (const std::exception&) {
            throw InvalidArgument("bad branching factor in '" + text + "'");
        }
    };
    if (text.rfind("pbi:", 0) == 0) {
        return pbi(parse_d(4));
    }
    if (text.rfind("fair:", 0) == 0) {
        return fair(parse_d(5));
    }
    std::vector<Rational> p;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        p.push_back(parse_rational(item));
    }
    return SplitDistribution::from_rationals(std::move(p));
}

int last_counted_slot(std::span<const int> counts, int n)
{
    long total = 0;
    for (int c : counts) {
        if (c < 0) {
            throw InvalidOccupancy("negative slot occupancy");
        }
        total += c;
    }
    if (total != n) {
        throw InvalidOccupancy("occupancies sum to " + std::to_string(total) + " but n = " + std::to_string(n));
    }
    if (n < 2) {
        throw InvalidArgument("last counted slot is only defined for n >= 2");
    }
    long prefix = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        prefix += counts[k];
        if (prefix >= n - 1) {
            return static_cast<int>(k + 1);
        }
    }
    return static_cast<int>(counts.size());  // unreachable: total == n
}

}  // namespace sicta
