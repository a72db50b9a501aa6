#pragma once

#include <vector>

namespace sicta::detail {

template <class Visitor>
void compose_rec(std::vector<int>& mu, std::size_t pos, int remaining, int min_part, Visitor& visit)
{
    const std::size_t parts = mu.size();
    if (pos + 1 == parts) {
        mu[pos] = remaining;
        visit(static_cast<const std::vector<int>&>(mu));
        return;
    }
    const int reserve = static_cast<int>(parts - pos - 1) * min_part;
    for (int v = remaining - reserve; v >= min_part; --v) {
        mu[pos] = v;
        compose_rec(mu, pos + 1, remaining - v, min_part, visit);
    }
}

// Visit every composition of `total` into `parts` ordered parts, each at
// least `min_part`. The visitor sees one shared buffer; copy it to keep it.
template <class Visitor>
void for_each_composition(int total, int parts, int min_part, Visitor&& visit)
{
    if (parts <= 0) {
        if (total == 0) {
            const std::vector<int> empty;
            visit(empty);
        }
        return;
    }
    if (total < parts * min_part) {
        return;
    }
    std::vector<int> mu(static_cast<std::size_t>(parts), 0);
    compose_rec(mu, 0, total, min_part, visit);
}

}  // namespace sicta::detail
