#include "tinv/balanced_table.hpp"

#include "tinv/errors.hpp"

#include <algorithm>
#include <numeric>

namespace tinv {

std::vector<int> BalancedTable::column(int j) const
{
    std::vector<int> c(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        c[i] = rows[i][j];
    return c;
}

BalanceCheck validate_balanced(const BalancedTable& t)
{
    auto fail = [](BalanceFailure f, int row, std::string msg) {
        return BalanceCheck{f, row, std::move(msg)};
    };
    if (t.shape.size() != t.rows.size())
        return fail(BalanceFailure::shape_mismatch, -1,
                    "shape has " + std::to_string(t.shape.size()) + " entries but table has " +
                        std::to_string(t.rows.size()) + " rows");
    const int m = t.columns();
    for (int i = 0; i < t.dim(); ++i) {
        if (static_cast<int>(t.rows[i].size()) != m)
            return fail(BalanceFailure::ragged_rows, i, "row " + std::to_string(i + 1) + " has length " +
                                                            std::to_string(t.rows[i].size()) +
                                                            ", expected " + std::to_string(m));
        if (t.shape[i] <= 0)
            return fail(BalanceFailure::shape_mismatch, i, "shape entries must be positive");
    }
    for (int i = 0; i < t.dim(); ++i) {
        const int n = t.shape[i];
        if (m % n != 0)
            return fail(BalanceFailure::not_divisible, i,
                        "n_" + std::to_string(i + 1) + " = " + std::to_string(n) +
                            " does not divide M = " + std::to_string(m));
        const int k = m / n;
        std::vector<int> count(k + 1, 0);
        for (int v : t.rows[i]) {
            if (v < 1 || v > k)
                return fail(BalanceFailure::bad_multiplicity, i,
                            "row " + std::to_string(i + 1) + " has value " + std::to_string(v) +
                                " outside [1," + std::to_string(k) + "]");
            ++count[v];
        }
        for (int v = 1; v <= k; ++v)
            if (count[v] != n)
                return fail(BalanceFailure::bad_multiplicity, i,
                            "row " + std::to_string(i + 1) + " contains " + std::to_string(v) + " " +
                                std::to_string(count[v]) + " times, expected " + std::to_string(n));
    }
    return {};
}

void require_balanced(const BalancedTable& t)
{
    if (auto check = validate_balanced(t); !check)
        throw DomainError("table is not balanced: " + check.message);
}

SetPartitionTuple table_to_set_partitions(const BalancedTable& t)
{
    require_balanced(t);
    SetPartitionTuple out(t.dim());
    for (int i = 0; i < t.dim(); ++i) {
        SetPartition blocks(t.blocks(i));
        for (int j = 0; j < t.columns(); ++j)
            blocks[t.rows[i][j] - 1].push_back(j + 1);
        std::sort(blocks.begin(), blocks.end());  // by smallest element, blocks are disjoint
        out[i] = std::move(blocks);
    }
    return out;
}

namespace {

using Columns = std::vector<std::vector<int>>;

Columns columns_of(const BalancedTable& t)
{
    Columns cols(t.columns());
    for (int j = 0; j < t.columns(); ++j)
        cols[j] = t.column(j);
    return cols;
}

BalancedTable from_columns(const std::vector<int>& shape, const Columns& cols)
{
    BalancedTable t;
    t.shape = shape;
    t.rows.assign(shape.size(), std::vector<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < shape.size(); ++i)
            t.rows[i][j] = cols[j][i];
    return t;
}

Columns relabel_first_occurrence(Columns cols, int d)
{
    for (int i = 0; i < d; ++i) {
        std::vector<int> map;
        for (auto& c : cols) {
            const int v = c[i];
            if (static_cast<int>(map.size()) < v + 1)
                map.resize(v + 1, 0);
            if (map[v] == 0)
                map[v] = 1 + static_cast<int>(std::count_if(map.begin(), map.end(),
                                                            [](int x) { return x != 0; }));
            c[i] = map[v];
        }
    }
    return cols;
}

struct ExhaustiveCanon {
    const Columns& base;
    int d;
    std::vector<std::vector<int>> perm;  // perm[i][v-1] = new label of v in row i
    Columns best;
    bool have_best = false;

    void run(int row)
    {
        if (row == d) {
            Columns cand = base;
            for (auto& c : cand)
                for (int i = 0; i < d; ++i)
                    c[i] = perm[i][c[i] - 1];
            std::sort(cand.begin(), cand.end());
            if (!have_best || cand < best) {
                best = std::move(cand);
                have_best = true;
            }
            return;
        }
        std::sort(perm[row].begin(), perm[row].end());
        do {
            run(row + 1);
        } while (std::next_permutation(perm[row].begin(), perm[row].end()));
    }
};

} // namespace

BalancedTable sort_columns(const BalancedTable& t)
{
    Columns cols = columns_of(t);
    std::sort(cols.begin(), cols.end());
    return from_columns(t.shape, cols);
}

bool has_duplicate_columns(const BalancedTable& t)
{
    Columns cols = columns_of(t);
    std::sort(cols.begin(), cols.end());
    return std::adjacent_find(cols.begin(), cols.end()) != cols.end();
}

BalancedTable canonicalize_table(const BalancedTable& t, long max_relabelings)
{
    require_balanced(t);
    const int d = t.dim();
    const Columns cols = columns_of(t);

    long relabelings = 1;
    for (int i = 0; i < d && relabelings <= max_relabelings; ++i)
        for (int f = 2; f <= t.blocks(i) && relabelings <= max_relabelings; ++f)
            relabelings *= f;

    if (relabelings <= max_relabelings) {
        ExhaustiveCanon canon{cols, d, {}, {}, false};
        canon.perm.resize(d);
        for (int i = 0; i < d; ++i) {
            canon.perm[i].resize(t.blocks(i));
            std::iota(canon.perm[i].begin(), canon.perm[i].end(), 1);
        }
        canon.run(0);
        return from_columns(t.shape, canon.best);
    }

    // Not canonical under column permutation, only under relabeling.
    Columns cur = relabel_first_occurrence(cols, d);
    std::sort(cur.begin(), cur.end());
    for (int iter = 0; iter < 16; ++iter) {
        Columns next = relabel_first_occurrence(cur, d);
        std::sort(next.begin(), next.end());
        if (next == cur)
            break;
        cur = std::move(next);
    }
    return from_columns(t.shape, cur);
}

std::string to_string(const BalancedTable& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i)
            s += " / ";
        for (int v : t.rows[i])
            s += std::to_string(v) + (v >= 10 ? " " : "");
    }
    return s;
}

} // namespace tinv
