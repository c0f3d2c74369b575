#include "tinv/delta.hpp"

#include "tinv/errors.hpp"
#include "tinv/latin.hpp"
#include "tinv/parallel.hpp"
#include "tinv/sign.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <numeric>

namespace tinv {

int block_sign(const SetPartition& part, std::span<const int> sigma)
{
    int s = 1;
    std::vector<int> seq;
    for (const auto& block : part) {
        seq.clear();
        for (int j : block) {
            if (j < 1 || j > static_cast<int>(sigma.size()))
                throw DomainError("block element " + std::to_string(j) + " outside the domain of sigma");
            seq.push_back(sigma[j - 1]);
        }
        const int n = static_cast<int>(seq.size());
        for (int v : seq)
            if (v < 1 || v > n)
                return 0;
        s *= sign_of_sequence(seq);
        if (s == 0)
            return 0;
    }
    return s;
}

namespace {

struct EvalLayout {
    int d = 0;
    int m = 0;
    std::vector<int> slot;           // m * d: mask slot of (column j, row i)
    int slots = 0;
    std::vector<int> idx;            // entries * d, 0-based tensor indices
    std::vector<ExactScalar> value;  // per entry
    bool ones = true;
    bool integral = true;

    int entries() const { return static_cast<int>(value.size()); }
    const int* index(int e) const { return &idx[static_cast<std::size_t>(e) * d]; }
    const int* slots_of(int j) const { return &slot[static_cast<std::size_t>(j) * d]; }
};

EvalLayout make_layout(const BalancedTable& t, const Hypermatrix& x)
{
    EvalLayout lay;
    lay.d = t.dim();
    lay.m = t.columns();
    std::vector<int> base(lay.d);
    for (int i = 0; i < lay.d; ++i) {
        if (t.shape[i] > 64)
            throw DomainError("delta_eval supports legs of dimension at most 64");
        base[i] = lay.slots;
        lay.slots += t.blocks(i);
    }
    lay.slot.resize(static_cast<std::size_t>(lay.m) * lay.d);
    for (int j = 0; j < lay.m; ++j)
        for (int i = 0; i < lay.d; ++i)
            lay.slot[static_cast<std::size_t>(j) * lay.d + i] = base[i] + t.rows[i][j] - 1;
    x.for_each_nonzero([&](std::span<const int> index, const ExactScalar& v) {
        for (int c : index)
            lay.idx.push_back(c - 1);
        lay.value.push_back(v);
        if (v != 1)
            lay.ones = false;
        if (!is_integer(v))
            lay.integral = false;
    });
    return lay;
}

class NodeMeter {
public:
    explicit NodeMeter(std::uint64_t budget) : budget_(budget) {}
    void charge(std::uint64_t nodes)
    {
        if (spent_.fetch_add(nodes) + nodes > budget_)
            throw ResourceError("delta evaluation exceeded its node budget of " + std::to_string(budget_));
    }

private:
    std::uint64_t budget_;
    std::atomic<std::uint64_t> spent_{0};
};

// V is BigInt or ExactScalar; with all-ones entries the products are skipped.
template <class V>
class EvalSearch {
public:
    EvalSearch(const EvalLayout& lay, NodeMeter& meter)
        : lay_(lay), mask_(lay.slots, 0), prod_(lay.m + 1), meter_(meter)
    {
        prod_[0] = 1;
        if (!lay.ones) {
            vals_.reserve(lay.value.size());
            for (const auto& v : lay.value) {
                if constexpr (std::is_same_v<V, BigInt>)
                    vals_.push_back(v.get_num());
                else
                    vals_.push_back(v);
            }
        }
    }

    // Parity contribution of placing entry e at column j, or -1 if it breaks a block.
    int try_place(int j, int e)
    {
        const int* s = lay_.slots_of(j);
        const int* ix = lay_.index(e);
        int par = 0;
        for (int i = 0; i < lay_.d; ++i) {
            const std::uint64_t m = mask_[s[i]];
            if ((m >> ix[i]) & 1ULL)
                return -1;
            par += std::popcount(ix[i] >= 63 ? 0 : m >> (ix[i] + 1));
        }
        for (int i = 0; i < lay_.d; ++i)
            mask_[s[i]] |= 1ULL << ix[i];
        if (!lay_.ones)
            prod_[j + 1] = prod_[j] * vals_[e];
        return par & 1;
    }
    void remove(int j, int e)
    {
        const int* s = lay_.slots_of(j);
        const int* ix = lay_.index(e);
        for (int i = 0; i < lay_.d; ++i)
            mask_[s[i]] &= ~(1ULL << ix[i]);
    }

    V from_column(int j, int parity)
    {
        dfs(j, parity);
        if (pending_)
            meter_.charge(pending_);
        V total = sum_;
        total += V(BigInt(std::to_string(plus_)) - BigInt(std::to_string(minus_)));
        return total;
    }

private:
    void dfs(int j, int parity)
    {
        if (j == lay_.m) {
            if (lay_.ones)
                ++(parity ? minus_ : plus_);
            else if (parity)
                sum_ -= prod_[j];
            else
                sum_ += prod_[j];
            return;
        }
        if (++pending_ == 4096) {
            meter_.charge(pending_);
            pending_ = 0;
        }
        for (int e = 0; e < lay_.entries(); ++e) {
            const int p = try_place(j, e);
            if (p < 0)
                continue;
            dfs(j + 1, parity ^ p);
            remove(j, e);
        }
    }

    const EvalLayout& lay_;
    std::vector<std::uint64_t> mask_;
    std::vector<V> vals_;
    std::vector<V> prod_;
    NodeMeter& meter_;
    V sum_ = 0;
    std::uint64_t plus_ = 0, minus_ = 0, pending_ = 0;
};

template <class V>
V eval_with(const EvalLayout& lay, const DeltaOptions& opts)
{
    NodeMeter meter(opts.node_budget);
    return parallel_sum<V>(static_cast<std::size_t>(lay.entries()), opts.threads, [&](std::size_t e) {
        EvalSearch<V> s(lay, meter);
        const int p = s.try_place(0, static_cast<int>(e));
        if (p < 0)
            return V(0);
        return s.from_column(1, p);
    });
}

} // namespace

ExactScalar delta_eval(const BalancedTable& t, const Hypermatrix& x, const DeltaOptions& opts)
{
    require_balanced(t);
    if (x.shape() != t.shape)
        throw DomainError("tensor shape does not match the table shape");
    if (t.columns() == 0)
        return 1;
    const EvalLayout lay = make_layout(t, x);
    if (lay.entries() == 0)
        return 0;
    if (lay.integral)
        return ExactScalar(eval_with<BigInt>(lay, opts));
    return eval_with<ExactScalar>(lay, opts);
}

int column_permutation_sign(const BalancedTable& t, std::span<const int> perm)
{
    const int m = t.columns();
    if (static_cast<int>(perm.size()) != m)
        throw DomainError("column permutation has the wrong length");
    std::vector<int> check(perm.begin(), perm.end());
    std::sort(check.begin(), check.end());
    for (int j = 0; j < m; ++j)
        if (check[j] != j)
            throw DomainError("column map is not a permutation");
    int s = 1;
    std::vector<int> seq;
    for (int i = 0; i < t.dim(); ++i)
        for (int label = 1; label <= t.blocks(i); ++label) {
            seq.clear();
            for (int j = 0; j < m; ++j)
                if (t.rows[i][perm[j]] == label)
                    seq.push_back(perm[j]);
            s *= multi_sign(seq);
        }
    return s;
}

BigInt delta_eval_unit(const BalancedTable& t, int n, const DeltaOptions& opts)
{
    require_balanced(t);
    for (int ni : t.shape)
        if (ni != n)
            throw DomainError("delta_eval_unit needs shape (n,...,n) with n = " + std::to_string(n));
    const int m = t.columns();
    const int d = t.dim();
    if (m == 0)
        return 1;

    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> cols(m);
    for (int j = 0; j < m; ++j)
        cols[j] = t.column(j);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return cols[a] < cols[b]; });
    for (int j = 1; j < m; ++j)
        if (cols[perm[j]] == cols[perm[j - 1]]) {
            if (d % 2 == 1)
                return 0;
            return delta_eval(t, Hypermatrix::unit(d, n), opts).get_num();
        }

    std::vector<Cell> cells;
    cells.reserve(m);
    for (int j : perm)
        cells.push_back(Cell{cols[j]});
    const MagicSet type = make_magic_set(d, m / n, std::move(cells));
    LatinOptions lo;
    lo.threads = opts.threads;
    lo.node_budget = opts.node_budget;
    return column_permutation_sign(t, perm) * alon_tarsi(type, lo);
}

int column_swap_sign(const BalancedTable& t, int i, int j)
{
    require_balanced(t);
    if (i == j)
        throw DomainError("column_swap_sign needs two distinct columns");
    if (i > j)
        std::swap(i, j);
    if (i < 1 || j > t.columns())
        throw DomainError("column index outside [1," + std::to_string(t.columns()) + "]");
    long l = 0;
    for (int r = 0; r < t.dim(); ++r) {
        const auto& row = t.rows[r];
        const int a = row[i - 1], b = row[j - 1];
        for (int c = i; c <= j; ++c)
            l += (row[c - 1] == a) + (row[c - 1] == b);
        l -= a == b;
    }
    return l % 2 == 0 ? 1 : -1;
}

BalancedTable swap_columns(const BalancedTable& t, int i, int j)
{
    if (i < 1 || j < 1 || i > t.columns() || j > t.columns())
        throw DomainError("column index outside [1," + std::to_string(t.columns()) + "]");
    BalancedTable out = t;
    for (auto& row : out.rows)
        std::swap(row[i - 1], row[j - 1]);
    return out;
}

BalancedTable hconcat(const BalancedTable& a, const BalancedTable& b)
{
    if (a.shape != b.shape)
        throw DomainError("hconcat needs tables of equal shape");
    require_balanced(a);
    require_balanced(b);
    BalancedTable out = a;
    if (out.rows.size() != a.shape.size())
        out.rows.assign(a.shape.size(), {});
    for (int i = 0; i < b.dim(); ++i) {
        const int shift = a.columns() / a.shape[i];
        for (int v : b.rows[i])
            out.rows[i].push_back(v + shift);
    }
    return out;
}

BalancedTable vconcat(const BalancedTable& a, const BalancedTable& b)
{
    if (a.columns() != b.columns())
        throw DomainError("vconcat needs tables with the same number of columns");
    BalancedTable out = a;
    out.shape.insert(out.shape.end(), b.shape.begin(), b.shape.end());
    out.rows.insert(out.rows.end(), b.rows.begin(), b.rows.end());
    return out;
}

namespace {

int checked_power(int k, int e)
{
    long long p = 1;
    for (int i = 0; i < e; ++i) {
        p *= k;
        if (p > 50'000'000)
            throw DomainError("table too large: " + std::to_string(k) + "^" + std::to_string(e) + " columns");
    }
    return static_cast<int>(p);
}

} // namespace

BalancedTable fundamental_table(int d, int k)
{
    if (d < 2 || k < 1)
        throw DomainError("fundamental_table needs d >= 2 and k >= 1");
    const int m = checked_power(k, d);
    BalancedTable t;
    t.shape.assign(d, m / k);
    t.rows.assign(d, std::vector<int>(m));
    for (int i = 0; i < d; ++i) {
        const int step = checked_power(k, d - 1 - i);
        for (int j = 0; j < m; ++j)
            t.rows[i][j] = (j / step) % k + 1;
    }
    return t;
}

BalancedTable fundamental_table_reduced(int d, int k)
{
    if (k < 2)
        throw DomainError("fundamental_table_reduced needs k >= 2");
    const BalancedTable f = fundamental_table(d, k);
    BalancedTable t;
    t.shape.assign(d, f.shape[0] - 1);
    t.rows.assign(d, {});
    for (int j = 0; j < f.columns(); ++j) {
        bool constant = true;
        for (int i = 1; i < d; ++i)
            constant = constant && f.rows[i][j] == f.rows[0][j];
        if (constant)
            continue;
        for (int i = 0; i < d; ++i)
            t.rows[i].push_back(f.rows[i][j]);
    }
    return t;
}

BalancedTable at_square_table(int d, int k)
{
    if (d < 2 || k < 1)
        throw DomainError("at_square_table needs d >= 2 and k >= 1");
    const int m = checked_power(k, 2);
    BalancedTable t;
    t.shape.assign(d, k);
    t.rows.assign(d, std::vector<int>(m));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j)
            t.rows[i][j] = i + 1 < d ? j / k + 1 : j % k + 1;
    return t;
}

BalancedTable at_power_table(int d, int k, int l)
{
    if (d < 2 || k < 1 || l < 1 || l > d)
        throw DomainError("at_power_table needs d >= 2, k >= 1 and 1 <= l <= d");
    const int m = checked_power(k, l);
    BalancedTable t;
    t.shape.assign(d, m / k);
    t.rows.assign(d, std::vector<int>(m));
    for (int i = 1; i <= d; ++i) {
        const int step = i < l ? checked_power(k, l - i) : 1;
        for (int j = 0; j < m; ++j)
            t.rows[i - 1][j] = (j / step) % k + 1;
    }
    return t;
}

} // namespace tinv
