#include "tinv/sign.hpp"

#include "tinv/errors.hpp"

#include <string>
#include <vector>

namespace tinv {

int sign_of_sequence(std::span<const int> a)
{
    const auto n = static_cast<int>(a.size());
    std::vector<char> seen(a.size() + 1, 0);
    bool repeated = false;
    for (int v : a) {
        if (v < 1 || v > n)
            throw DomainError("sign_of_sequence: entry " + std::to_string(v) + " outside [1," +
                              std::to_string(n) + "]");
        if (seen[v])
            repeated = true;
        seen[v] = 1;
    }
    if (repeated)
        return 0;

    // parity via cycle decomposition
    std::vector<char> visited(a.size(), 0);
    int transpositions = 0;
    for (int i = 0; i < n; ++i) {
        if (visited[i])
            continue;
        int len = 0;
        for (int j = i; !visited[j]; j = a[j] - 1) {
            visited[j] = 1;
            ++len;
        }
        transpositions += len - 1;
    }
    return (transpositions % 2 == 0) ? 1 : -1;
}

std::int64_t inversions(std::span<const int> a)
{
    std::int64_t inv = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] > a[j])
                ++inv;
    return inv;
}

int multi_sign(std::span<const int> a) { return (inversions(a) % 2 == 0) ? 1 : -1; }

} // namespace tinv
