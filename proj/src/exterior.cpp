#include "tinv/exterior.hpp"

#include "tinv/errors.hpp"
#include "tinv/latin.hpp"
#include "tinv/sign.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace tinv {

namespace {

void check_same_space(const WedgeVector& a, const WedgeVector& b)
{
    if (a.d != b.d || a.k != b.k)
        throw DomainError("wedge vectors live over different boxes");
}

void add_term(std::map<BasisIndex, BigInt>& terms, BasisIndex key, const BigInt& c)
{
    if (c == 0)
        return;
    auto [it, fresh] = terms.try_emplace(std::move(key), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0)
            terms.erase(it);
    }
}

} // namespace

WedgeVector zero_vector(int d, int k, int grade)
{
    if (d < 1 || k < 1 || grade < 0)
        throw DomainError("zero_vector needs d, k >= 1 and grade >= 0");
    return WedgeVector{d, k, grade, {}};
}

WedgeVector wedge_of_cells(int d, int k, const std::vector<Cell>& cells, const BigInt& coeff)
{
    CellSpace space(d, k);
    WedgeVector v = zero_vector(d, k, static_cast<int>(cells.size()));
    std::vector<int> order;
    BasisIndex key;
    for (const auto& c : cells) {
        key.push_back(space.index_of(c));
        order.push_back(static_cast<int>(key.back()));
    }
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
        return v;
    add_term(v.terms, std::move(key), multi_sign(order) * coeff);
    return v;
}

WedgeVector operator+(const WedgeVector& a, const WedgeVector& b)
{
    check_same_space(a, b);
    if (a.grade != b.grade && !a.is_zero() && !b.is_zero())
        throw DomainError("cannot add wedge vectors of different grades");
    WedgeVector out = a.is_zero() ? b : a;
    const WedgeVector& other = a.is_zero() ? a : b;
    for (const auto& [key, c] : other.terms)
        add_term(out.terms, key, c);
    return out;
}

WedgeVector operator*(const BigInt& c, const WedgeVector& v)
{
    WedgeVector out = zero_vector(v.d, v.k, v.grade);
    if (c == 0)
        return out;
    for (const auto& [key, x] : v.terms)
        out.terms.emplace(key, c * x);
    return out;
}

WedgeVector wedge(const WedgeVector& v, const WedgeVector& w)
{
    check_same_space(v, w);
    WedgeVector out = zero_vector(v.d, v.k, v.grade + w.grade);
    BasisIndex merged;
    for (const auto& [a, ca] : v.terms)
        for (const auto& [b, cb] : w.terms) {
            merged.clear();
            merged.reserve(a.size() + b.size());
            // crossings: pairs (x in a, y in b) with x > y
            long crossings = 0;
            std::size_t i = 0, j = 0;
            bool clash = false;
            while (i < a.size() && j < b.size()) {
                if (a[i] == b[j]) {
                    clash = true;
                    break;
                }
                if (a[i] < b[j]) {
                    merged.push_back(a[i++]);
                } else {
                    crossings += static_cast<long>(a.size() - i);
                    merged.push_back(b[j++]);
                }
            }
            if (clash)
                continue;
            merged.insert(merged.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
            merged.insert(merged.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
            BigInt c = ca * cb;
            if (crossings % 2)
                c = -c;
            add_term(out.terms, merged, c);
        }
    return out;
}

WedgeVector omega(int d, int k)
{
    if (d < 2 || k < 1)
        throw DomainError("omega needs d >= 2 and k >= 1");
    CellSpace space(d, k);
    WedgeVector out = zero_vector(d, k, k);
    std::vector<std::vector<int>> pi(d - 1, std::vector<int>(k));
    for (auto& p : pi)
        std::iota(p.begin(), p.end(), 1);
    BasisIndex key(k);
    for (;;) {
        int s = 1;
        for (const auto& p : pi)
            s *= sign_of_sequence(p);
        for (int i = 0; i < k; ++i) {
            CellIndex idx = static_cast<CellIndex>(i) * space.stride(1);
            for (int l = 1; l < d; ++l)
                idx += static_cast<CellIndex>(pi[l - 1][i] - 1) * space.stride(l + 1);
            key[i] = idx;
        }
        add_term(out.terms, key, s);
        // odometer over (pi_2, ..., pi_d), last factor fastest
        int l = d - 2;
        while (l >= 0 && !std::next_permutation(pi[l].begin(), pi[l].end()))
            --l;
        if (l < 0)
            break;
    }
    return out;
}

WedgeVector wedge_power(int d, int k, int n)
{
    if (d < 2 || k < 1)
        throw DomainError("wedge_power needs d >= 2 and k >= 1");
    CellSpace space(d, k);
    const int cap = static_cast<int>(space.count() / static_cast<CellIndex>(k));
    if (n < 1 || n > cap)
        throw DomainError("wedge_power needs 1 <= n <= k^(d-1) = " + std::to_string(cap));
    const WedgeVector w = omega(d, k);
    WedgeVector acc = w;
    for (int j = 2; j <= n && !acc.is_zero(); ++j)
        acc = wedge(acc, w);
    if (acc.is_zero())
        acc.grade = n * k;
    return acc;
}

WedgeVector raising_operator(const WedgeVector& v, int direction, int i)
{
    if (direction < 1 || direction > v.d)
        throw DomainError("direction " + std::to_string(direction) + " outside [1," + std::to_string(v.d) + "]");
    if (i < 1 || i > v.k - 1)
        throw DomainError("raising index " + std::to_string(i) + " outside [1," + std::to_string(v.k - 1) + "]");
    CellSpace space(v.d, v.k);
    const CellIndex step = space.stride(direction);
    WedgeVector out = zero_vector(v.d, v.k, v.grade);
    BasisIndex moved;
    for (const auto& [p, c] : v.terms)
        for (std::size_t pos = 0; pos < p.size(); ++pos) {
            if (space.coord(p[pos], direction) != i + 1)
                continue;
            const CellIndex target = p[pos] - step;
            auto lo = std::lower_bound(p.begin(), p.end(), target);
            if (lo != p.end() && *lo == target)
                continue;
            // cells strictly between target and p[pos]
            const auto between = static_cast<std::size_t>(p.begin() + static_cast<std::ptrdiff_t>(pos) - lo);
            moved = p;
            moved.erase(moved.begin() + static_cast<std::ptrdiff_t>(pos));
            moved.insert(std::lower_bound(moved.begin(), moved.end(), target), target);
            add_term(out.terms, moved, between % 2 ? BigInt(-c) : c);
        }
    return out;
}

std::vector<int> weight_of(const BasisIndex& p, int d, int k)
{
    CellSpace space(d, k);
    std::vector<int> w(static_cast<std::size_t>(d) * k, 0);
    for (CellIndex c : p)
        for (int l = 1; l <= d; ++l)
            ++w[static_cast<std::size_t>(l - 1) * k + space.coord(c, l) - 1];
    return w;
}

bool is_weight_homogeneous(const WedgeVector& v)
{
    if (v.terms.empty())
        return true;
    const auto first = weight_of(v.terms.begin()->first, v.d, v.k);
    for (const auto& [p, c] : v.terms)
        if (weight_of(p, v.d, v.k) != first)
            return false;
    return true;
}

bool is_highest_weight(const WedgeVector& v)
{
    if (v.is_zero())
        throw DomainError("is_highest_weight is undefined on the zero vector");
    if (!is_weight_homogeneous(v))
        throw DomainError("is_highest_weight needs a weight-homogeneous vector");
    for (int l = 1; l <= v.d; ++l)
        for (int i = 1; i < v.k; ++i)
            if (!raising_operator(v, l, i).is_zero())
                return false;
    return true;
}

namespace {

BasisIndex to_basis_index(const CellSpace& space, const MagicSet& m)
{
    BasisIndex b;
    b.reserve(m.cells.size());
    for (const auto& c : m.cells)
        b.push_back(space.index_of(c));
    return b;
}

} // namespace

std::vector<BasisIndex> weight_space_basis(int d, int k, int n)
{
    CellSpace space(d, k);
    std::vector<BasisIndex> out;
    enumerate_magic_sets(d, k, n, [&](const MagicSet& m) {
        out.push_back(to_basis_index(space, m));
        return true;
    });
    return out;
}

namespace {

struct Overflow {};

inline std::int64_t mul_checked(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw Overflow{};
    return r;
}
inline std::int64_t sub_checked(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r))
        throw Overflow{};
    return r;
}
inline std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline bool negative(std::int64_t a) { return a < 0; }

inline BigInt mul_checked(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt sub_checked(const BigInt& a, const BigInt& b) { return a - b; }
inline BigInt gcd_of(const BigInt& a, const BigInt& b)
{
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}
inline bool negative(const BigInt& a) { return sgn(a) < 0; }

template <class C>
using SparseRow = std::vector<std::pair<std::uint32_t, C>>;

template <class C>
void normalize(SparseRow<C>& r)
{
    C g = 0;
    for (const auto& [col, x] : r) {
        g = gcd_of(g, x);
        if (g == 1)
            break;
    }
    if (negative(g) || (!r.empty() && negative(r.front().second)))
        g = -g;
    if (g != 1 && g != 0)
        for (auto& e : r)
            e.second /= g;
}

template <class C>
class Echelon {
public:
    // Reduces v against the stored rows; stores it if independent.
    bool insert(SparseRow<C> v)
    {
        SparseRow<C> next;
        while (!v.empty()) {
            auto it = pivot_.find(v.front().first);
            if (it == pivot_.end()) {
                normalize(v);
                pivot_.emplace(v.front().first, rows_.size());
                rows_.push_back(std::move(v));
                return true;
            }
            const SparseRow<C>& r = rows_[it->second];
            const C g = gcd_of(r.front().second, v.front().second);
            const C a = r.front().second / g;  // v <- a*v - c*r
            const C c = v.front().second / g;
            next.clear();
            std::size_t i = 0, j = 0;
            while (i < v.size() || j < r.size()) {
                if (j == r.size() || (i < v.size() && v[i].first < r[j].first)) {
                    next.emplace_back(v[i].first, mul_checked(a, v[i].second));
                    ++i;
                } else if (i == v.size() || r[j].first < v[i].first) {
                    next.emplace_back(r[j].first, sub_checked(C(0), mul_checked(c, r[j].second)));
                    ++j;
                } else {
                    C x = sub_checked(mul_checked(a, v[i].second), mul_checked(c, r[j].second));
                    if (x != 0)
                        next.emplace_back(v[i].first, std::move(x));
                    ++i;
                    ++j;
                }
            }
            normalize(next);
            std::swap(v, next);
        }
        return false;
    }
    std::size_t rank() const { return rows_.size(); }

private:
    std::unordered_map<std::uint32_t, std::size_t> pivot_;
    std::vector<SparseRow<C>> rows_;
};

} // namespace

std::size_t sparse_rank(const std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>& rows)
{
    try {
        Echelon<std::int64_t> e;
        for (const auto& r : rows)
            e.insert(r);
        return e.rank();
    } catch (const Overflow&) {
    }
    Echelon<BigInt> e;
    for (const auto& r : rows) {
        SparseRow<BigInt> big;
        big.reserve(r.size());
        for (const auto& [col, x] : r)
            big.emplace_back(col, BigInt(static_cast<long>(x)));
        e.insert(std::move(big));
    }
    return e.rank();
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto x : v)
            h = (h ^ x) * 1099511628211ULL;
        return h;
    }
};

} // namespace

std::uint64_t raising_kernel_dimension(int d, int k, int n, std::uint64_t max_basis)
{
    CellSpace space(d, k);
    std::vector<BasisIndex> basis;
    bool too_big = false;
    enumerate_magic_sets(d, k, n, [&](const MagicSet& m) {
        if (basis.size() >= max_basis) {
            too_big = true;
            return false;
        }
        basis.push_back(to_basis_index(space, m));
        return true;
    });
    if (too_big)
        throw ResourceError("weight space basis exceeds the budget of " + std::to_string(max_basis) + " elements");
    if (k == 1)
        return basis.size();

    const std::size_t words = (space.count() + 63) / 64;
    std::unordered_map<std::vector<std::uint64_t>, std::uint32_t, KeyHash> ids;
    std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> rows;
    rows.reserve(basis.size());
    std::vector<std::uint64_t> key(words + 1);

    for (const auto& p : basis) {
        WedgeVector v = zero_vector(d, k, static_cast<int>(p.size()));
        v.terms.emplace(p, 1);
        std::vector<std::pair<std::uint32_t, std::int64_t>> row;
        int op = 0;
        for (int l = 1; l <= d; ++l)
            for (int i = 1; i < k; ++i, ++op)
                for (const auto& [q, c] : raising_operator(v, l, i).terms) {
                    std::fill(key.begin(), key.end(), 0);
                    key[0] = static_cast<std::uint64_t>(op);
                    for (CellIndex x : q)
                        key[1 + x / 64] |= 1ULL << (x % 64);
                    auto [it, fresh] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size()));
                    row.emplace_back(it->second, c.get_si());
                }
        std::sort(row.begin(), row.end());
        rows.push_back(std::move(row));
    }
    return basis.size() - sparse_rank(rows);
}

} // namespace tinv
