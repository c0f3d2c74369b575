#pragma once

#include "tinv/balanced_table.hpp"
#include "tinv/hypermatrix.hpp"

#include <random>
#include <string>
#include <vector>

namespace test_support {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 g(0x5eed2024);
    return g;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

// rows given as digit strings, e.g. {"1122", "1212"}
inline tinv::BalancedTable table(std::vector<int> shape, const std::vector<std::string>& rows)
{
    tinv::BalancedTable t;
    t.shape = std::move(shape);
    for (const auto& r : rows) {
        std::vector<int> row;
        for (char c : r)
            row.push_back(c - '0');
        t.rows.push_back(row);
    }
    return t;
}

inline tinv::Hypermatrix random_tensor(const std::vector<int>& shape, int lo, int hi)
{
    tinv::Hypermatrix x(shape);
    std::vector<int> idx(shape.size(), 1);
    for (;;) {
        x.set(idx, tinv::ExactScalar(uniform(lo, hi)));
        std::size_t l = shape.size();
        while (l > 0 && idx[l - 1] == shape[l - 1])
            idx[--l] = 1;
        if (l == 0)
            return x;
        ++idx[l - 1];
    }
}

// Every balanced row of length n*k over [k], each value n times, labels by first occurrence.
inline std::vector<std::vector<int>> normalized_rows(int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> row, used(k + 1, 0);
    auto rec = [&](auto&& self, int top) -> void {
        if (static_cast<int>(row.size()) == n * k) {
            out.push_back(row);
            return;
        }
        for (int v = 1; v <= std::min(top + 1, k); ++v) {
            if (used[v] == n)
                continue;
            ++used[v];
            row.push_back(v);
            self(self, std::max(top, v));
            row.pop_back();
            --used[v];
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace test_support
