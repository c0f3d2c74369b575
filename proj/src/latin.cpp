#include "tinv/latin.hpp"

#include "tinv/errors.hpp"
#include "tinv/parallel.hpp"
#include "tinv/sign.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <unistd.h>

namespace tinv {

namespace {

void check_box(int d, int k)
{
    if (d < 1 || k < 1)
        throw DomainError("need d >= 1 and k >= 1, got d = " + std::to_string(d) + ", k = " + std::to_string(k));
}

std::string cell_text(const Cell& c)
{
    std::string s = "(";
    for (std::size_t i = 0; i < c.coords.size(); ++i)
        s += (i ? "," : "") + std::to_string(c.coords[i]);
    return s + ")";
}

} // namespace

MagicSet make_magic_set(int d, int k, std::vector<Cell> cells)
{
    check_box(d, k);
    for (const auto& c : cells) {
        if (static_cast<int>(c.coords.size()) != d)
            throw DomainError("cell " + cell_text(c) + " does not have " + std::to_string(d) + " coordinates");
        for (int v : c.coords)
            if (v < 1 || v > k)
                throw DomainError("cell " + cell_text(c) + " lies outside [" + std::to_string(k) + "]^" +
                                  std::to_string(d));
    }
    std::sort(cells.begin(), cells.end());
    if (auto dup = std::adjacent_find(cells.begin(), cells.end()); dup != cells.end())
        throw DomainError("cell " + cell_text(*dup) + " listed twice");
    if (cells.size() % static_cast<std::size_t>(k) != 0)
        throw DomainError("magic set size " + std::to_string(cells.size()) + " is not a multiple of k");
    const int n = static_cast<int>(cells.size()) / k;
    for (int l = 0; l < d; ++l) {
        std::vector<int> count(k, 0);
        for (const auto& c : cells)
            ++count[c.coords[l] - 1];
        for (int i = 0; i < k; ++i)
            if (count[i] != n)
                throw DomainError("slice " + std::to_string(i + 1) + " in direction " + std::to_string(l + 1) +
                                  " has " + std::to_string(count[i]) + " cells, expected " + std::to_string(n));
    }
    return MagicSet{d, k, n, std::move(cells)};
}

MagicSet full_cube(int d, int k)
{
    CellSpace space(d, k);
    std::vector<Cell> cells;
    cells.reserve(space.count());
    for (CellIndex i = 0; i < space.count(); ++i)
        cells.push_back(space.cell_of(i));
    return make_magic_set(d, k, std::move(cells));
}

int PartialLatinHypercube::value_at(const Cell& c) const
{
    auto it = std::lower_bound(type.cells.begin(), type.cells.end(), c);
    if (it == type.cells.end() || *it != c)
        return 0;
    return values[static_cast<std::size_t>(it - type.cells.begin())];
}

namespace {

// Values in slice (direction l, index i), read in lexicographic cell order.
std::vector<int> slice_values(const PartialLatinHypercube& c, int l, int i)
{
    std::vector<int> out;
    for (std::size_t j = 0; j < c.type.cells.size(); ++j)
        if (c.type.cells[j].coords[l] == i)
            out.push_back(c.values[j]);
    return out;
}

} // namespace

PartialLatinHypercube make_partial_latin(MagicSet type, std::vector<int> values)
{
    if (values.size() != type.cells.size())
        throw DomainError("hypercube has " + std::to_string(values.size()) + " values for " +
                          std::to_string(type.cells.size()) + " cells");
    for (int v : values)
        if (v < 1 || v > type.n)
            throw DomainError("symbol " + std::to_string(v) + " outside [1," + std::to_string(type.n) + "]");
    PartialLatinHypercube c{std::move(type), std::move(values)};
    for (int l = 0; l < c.type.d; ++l)
        for (int i = 1; i <= c.type.k; ++i)
            if (sign_of_sequence(slice_values(c, l, i)) == 0)
                throw DomainError("slice " + std::to_string(i) + " in direction " + std::to_string(l + 1) +
                                  " repeats a symbol");
    return c;
}

void enumerate_magic_sets(int d, int k, int n, const std::function<bool(const MagicSet&)>& visit)
{
    check_box(d, k);
    CellSpace space(d, k);
    const int cap = static_cast<int>(space.count() / static_cast<CellIndex>(k));
    if (n < 0 || n > cap)
        throw DomainError("marginal n = " + std::to_string(n) + " outside [0," + std::to_string(cap) + "]");
    const int total = static_cast<int>(space.count());
    const int slices = d * k;

    std::vector<int> slot(static_cast<std::size_t>(total) * d);
    for (int c = 0; c < total; ++c)
        for (int l = 0; l < d; ++l)
            slot[static_cast<std::size_t>(c) * d + l] = l * k + space.coord(static_cast<CellIndex>(c), l + 1) - 1;

    std::vector<int> used(slices, 0), left(slices, cap);
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(n) * k);
    bool stop = false;

    std::function<void(int)> walk = [&](int c) {
        if (stop)
            return;
        if (static_cast<int>(chosen.size()) == n * k) {
            MagicSet m{d, k, n, {}};
            m.cells.reserve(chosen.size());
            for (int idx : chosen)
                m.cells.push_back(space.cell_of(static_cast<CellIndex>(idx)));
            if (!visit(m))
                stop = true;
            return;
        }
        if (c == total)
            return;
        const int* s = &slot[static_cast<std::size_t>(c) * d];
        bool can_take = true, can_skip = true;
        for (int l = 0; l < d; ++l) {
            if (used[s[l]] >= n)
                can_take = false;
            if (used[s[l]] + left[s[l]] - 1 < n)
                can_skip = false;
        }
        for (int l = 0; l < d; ++l)
            --left[s[l]];
        if (can_take) {
            for (int l = 0; l < d; ++l)
                ++used[s[l]];
            chosen.push_back(c);
            walk(c + 1);
            chosen.pop_back();
            for (int l = 0; l < d; ++l)
                --used[s[l]];
        }
        if (can_skip)
            walk(c + 1);
        for (int l = 0; l < d; ++l)
            ++left[s[l]];
    };
    walk(0);
}

std::vector<MagicSet> magic_sets(int d, int k, int n)
{
    std::vector<MagicSet> out;
    enumerate_magic_sets(d, k, n, [&](const MagicSet& m) {
        out.push_back(m);
        return true;
    });
    return out;
}

std::uint64_t count_magic_sets(int d, int k, int n)
{
    std::uint64_t count = 0;
    enumerate_magic_sets(d, k, n, [&](const MagicSet&) {
        ++count;
        return true;
    });
    return count;
}

int directional_sign(const PartialLatinHypercube& c, int direction)
{
    if (direction < 1 || direction > c.type.d)
        throw DomainError("direction " + std::to_string(direction) + " outside [1," + std::to_string(c.type.d) + "]");
    int s = 1;
    for (int i = 1; i <= c.type.k; ++i)
        s *= sign_of_sequence(slice_values(c, direction - 1, i));
    return s;
}

int full_sign(const PartialLatinHypercube& c)
{
    int s = 1;
    for (int l = 1; l <= c.type.d; ++l)
        s *= directional_sign(c, l);
    return s;
}

int symbol_sign(const PartialLatinHypercube& c)
{
    const auto& t = c.type;
    int s = 1;
    for (int sym = 1; sym <= t.n; ++sym) {
        // cells are sorted, so the diagonal comes out ordered by first coordinate
        std::vector<const Cell*> diag;
        for (std::size_t j = 0; j < t.cells.size(); ++j)
            if (c.values[j] == sym)
                diag.push_back(&t.cells[j]);
        if (static_cast<int>(diag.size()) != t.k)
            throw DomainError("symbol " + std::to_string(sym) + " does not occupy a diagonal");
        std::vector<int> pi(t.k);
        for (int l = 1; l < t.d; ++l) {
            for (int j = 0; j < t.k; ++j)
                pi[j] = diag[j]->coords[l];
            s *= sign_of_sequence(pi);
        }
    }
    return s;
}

int magic_set_sign(const MagicSet& t)
{
    int s = 1;
    std::vector<int> seq(t.cells.size());
    for (int l = 0; l < t.d; ++l) {
        for (std::size_t j = 0; j < t.cells.size(); ++j)
            seq[j] = t.cells[j].coords[l];
        s *= multi_sign(seq);
    }
    return s;
}

PartialLatinHypercube value_swap(const PartialLatinHypercube& c, int i, int j)
{
    if (i == j)
        throw DomainError("value_swap needs two distinct symbols");
    if (i < 1 || i > c.type.n || j < 1 || j > c.type.n)
        throw DomainError("value_swap symbol outside [1," + std::to_string(c.type.n) + "]");
    PartialLatinHypercube out = c;
    for (int& v : out.values)
        v = v == i ? j : v == j ? i : v;
    return out;
}

namespace {

// Per-slice used-symbol sets. Symbols are 0-based bits here.
struct NarrowTracker {
    std::vector<std::uint64_t> used;
    int n;

    NarrowTracker(int slices, int n_) : used(slices, 0), n(n_) {}

    std::uint64_t free_set(const int* s, int d) const
    {
        std::uint64_t busy = 0;
        for (int l = 0; l < d; ++l)
            busy |= used[s[l]];
        const std::uint64_t all = n == 64 ? ~0ULL : ((1ULL << n) - 1);
        return all & ~busy;
    }
    template <class F>
    void for_each_free(const int* s, int d, F&& f) const
    {
        for (std::uint64_t m = free_set(s, d); m; m &= m - 1)
            f(std::countr_zero(m));
    }
    bool is_free(const int* s, int d, int v) const { return (free_set(s, d) >> v) & 1ULL; }
    int greater(int slot, int v) const { return v >= 63 ? 0 : std::popcount(used[slot] >> (v + 1)); }
    void set(int slot, int v) { used[slot] |= 1ULL << v; }
    void clear(int slot, int v) { used[slot] &= ~(1ULL << v); }
};

// Fallback beyond 64 symbols.
struct WideTracker {
    std::vector<std::vector<char>> used;

    WideTracker(int slices, int n) : used(slices, std::vector<char>(n, 0)) {}

    template <class F>
    void for_each_free(const int* s, int d, F&& f) const
    {
        const int n = static_cast<int>(used.front().size());
        for (int v = 0; v < n; ++v)
            if (is_free(s, d, v))
                f(v);
    }
    bool is_free(const int* s, int d, int v) const
    {
        for (int l = 0; l < d; ++l)
            if (used[s[l]][v])
                return false;
        return true;
    }
    int greater(int slot, int v) const
    {
        return static_cast<int>(std::count(used[slot].begin() + v + 1, used[slot].end(), 1));
    }
    void set(int slot, int v) { used[slot][v] = 1; }
    void clear(int slot, int v) { used[slot][v] = 0; }
};

struct Layout {
    int d = 0, k = 0, n = 0, cells = 0;
    std::vector<int> slot;  // cells * d slice ids

    explicit Layout(const MagicSet& t) : d(t.d), k(t.k), n(t.n), cells(static_cast<int>(t.cells.size()))
    {
        slot.resize(static_cast<std::size_t>(cells) * d);
        for (int c = 0; c < cells; ++c)
            for (int l = 0; l < d; ++l)
                slot[static_cast<std::size_t>(c) * d + l] = l * k + t.cells[c].coords[l] - 1;
    }
    const int* slots(int c) const { return &slot[static_cast<std::size_t>(c) * d]; }
};

class BudgetMeter {
public:
    explicit BudgetMeter(std::uint64_t budget) : budget_(budget) {}
    void charge(std::uint64_t nodes)
    {
        if (spent_.fetch_add(nodes) + nodes > budget_)
            throw ResourceError("Latin enumeration exceeded its node budget of " + std::to_string(budget_));
    }

private:
    std::uint64_t budget_;
    std::atomic<std::uint64_t> spent_{0};
};

template <class Tracker>
class LatinSearch {
public:
    LatinSearch(const Layout& layout, BudgetMeter* meter)
        : lay_(layout), track_(layout.d * layout.k, layout.n), values_(layout.cells, -1), meter_(meter)
    {
    }

    // Places value v (0-based) at cell c; returns the inversion parity it adds, or -1 if illegal.
    int place(int c, int v)
    {
        const int* s = lay_.slots(c);
        if (!track_.is_free(s, lay_.d, v))
            return -1;
        int par = 0;
        for (int l = 0; l < lay_.d; ++l) {
            par += track_.greater(s[l], v);
            track_.set(s[l], v);
        }
        values_[c] = v;
        return par & 1;
    }
    void unplace(int c)
    {
        const int* s = lay_.slots(c);
        for (int l = 0; l < lay_.d; ++l)
            track_.clear(s[l], values_[c]);
        values_[c] = -1;
    }

    // Counts completions of cells [from, cells) given the current placement.
    void run(int from, int parity)
    {
        dfs(from, parity);
        flush();
    }

    // Visits every consistent assignment of cells [from, to).
    template <class F>
    void prefixes(int from, int to, F&& f)
    {
        if (from == to) {
            f(values_);
            return;
        }
        const int* s = lay_.slots(from);
        track_.for_each_free(s, lay_.d, [&](int v) {
            place(from, v);
            prefixes(from + 1, to, f);
            unplace(from);
        });
    }

    // Visits complete hypercubes in order (symbols 1-based in the callback).
    template <class F>
    bool visit(int from, F&& f)
    {
        if (from == lay_.cells)
            return f(values_);
        bool go_on = true;
        const int* s = lay_.slots(from);
        track_.for_each_free(s, lay_.d, [&](int v) {
            if (!go_on)
                return;
            place(from, v);
            go_on = visit(from + 1, f);
            unplace(from);
        });
        return go_on;
    }

    LatinTally tally() const
    {
        LatinTally t;
        t.count = BigInt(std::to_string(count_));
        t.signed_sum = BigInt(std::to_string(plus_)) - BigInt(std::to_string(minus_));
        return t;
    }

private:
    void dfs(int c, int parity)
    {
        if (c == lay_.cells) {
            ++count_;
            ++(parity ? minus_ : plus_);
            return;
        }
        if (++pending_ == 4096)
            flush();
        const int* s = lay_.slots(c);
        track_.for_each_free(s, lay_.d, [&](int v) {
            const int p = place(c, v);
            dfs(c + 1, parity ^ p);
            unplace(c);
        });
    }
    void flush()
    {
        if (meter_ && pending_)
            meter_->charge(pending_);
        pending_ = 0;
    }

    const Layout& lay_;
    Tracker track_;
    std::vector<int> values_;
    BudgetMeter* meter_;
    std::uint64_t pending_ = 0;
    std::uint64_t count_ = 0, plus_ = 0, minus_ = 0;
};

// Number of leading cells forced by normalization: the first direction-1 slice.
int normalized_prefix(const MagicSet& t) { return t.cells.empty() ? 0 : t.n; }

// Sum over relabelings pi of sgn(pi)^{dk}.
BigInt relabel_factor(const MagicSet& t)
{
    if ((t.d * t.k) % 2 == 0)
        return factorial(static_cast<unsigned>(t.n));
    return t.n <= 1 ? BigInt(1) : BigInt(0);
}

template <class Tracker>
std::vector<std::vector<int>> split_tasks(const Layout& lay, int fixed, int depth)
{
    LatinSearch<Tracker> s(lay, nullptr);
    for (int c = 0; c < fixed; ++c)
        if (s.place(c, c) < 0)
            return {};
    std::vector<std::vector<int>> out;
    s.prefixes(fixed, fixed + depth, [&](const std::vector<int>& vals) {
        out.emplace_back(vals.begin() + fixed, vals.begin() + fixed + depth);
    });
    return out;
}

template <class Tracker>
LatinTally run_task(const Layout& lay, int fixed, const std::vector<int>& prefix, BudgetMeter& meter)
{
    LatinSearch<Tracker> s(lay, &meter);
    int parity = 0;
    for (int c = 0; c < fixed; ++c) {
        const int p = s.place(c, c);
        if (p < 0)
            return {};
        parity ^= p;
    }
    for (std::size_t j = 0; j < prefix.size(); ++j) {
        const int p = s.place(fixed + static_cast<int>(j), prefix[j]);
        if (p < 0)
            return {};
        parity ^= p;
    }
    s.run(fixed + static_cast<int>(prefix.size()), parity);
    return s.tally();
}

template <class Tracker>
LatinTally tally_impl(const MagicSet& t, bool normalize, const LatinOptions& opts)
{
    Layout lay(t);
    BudgetMeter meter(opts.node_budget);
    const int fixed = normalize ? normalized_prefix(t) : 0;
    const int depth = std::min(t.n, lay.cells - fixed);
    const auto tasks = split_tasks<Tracker>(lay, fixed, depth);
    return parallel_sum<LatinTally>(tasks.size(), opts.threads, [&](std::size_t i) {
        return run_task<Tracker>(lay, fixed, tasks[i], meter);
    });
}

LatinTally tally(const MagicSet& t, bool normalize, const LatinOptions& opts)
{
    if (t.cells.empty())
        return LatinTally{1, 1};
    return t.n <= 64 ? tally_impl<NarrowTracker>(t, normalize, opts) : tally_impl<WideTracker>(t, normalize, opts);
}

std::string type_key(const MagicSet& t)
{
    std::string key = std::to_string(t.d) + ":" + std::to_string(t.k) + ":";
    for (const auto& c : t.cells) {
        for (int v : c.coords)
            key += std::to_string(v) + ".";
        key.back() = ';';
    }
    return key;
}

} // namespace

namespace {

void visit_latin(const MagicSet& type, bool normalize, const std::function<bool(const PartialLatinHypercube&)>& visit)
{
    auto emit = [&](const std::vector<int>& vals) {
        PartialLatinHypercube c{type, {}};
        c.values.reserve(vals.size());
        for (int v : vals)
            c.values.push_back(v + 1);
        return visit(c);
    };
    Layout lay(type);
    const int fixed = normalize ? normalized_prefix(type) : 0;
    auto walk = [&](auto& s) {
        for (int c = 0; c < fixed; ++c)
            if (s.place(c, c) < 0)
                return;
        s.visit(fixed, emit);
    };
    if (type.n <= 64) {
        LatinSearch<NarrowTracker> s(lay, nullptr);
        walk(s);
    } else {
        LatinSearch<WideTracker> s(lay, nullptr);
        walk(s);
    }
}

} // namespace

void for_each_latin(const MagicSet& type, const std::function<bool(const PartialLatinHypercube&)>& visit)
{
    visit_latin(type, false, visit);
}

void for_each_latin_normalized(const MagicSet& type, const std::function<bool(const PartialLatinHypercube&)>& visit)
{
    visit_latin(type, true, visit);
}

std::vector<PartialLatinHypercube> enumerate_latin(const MagicSet& type)
{
    std::vector<PartialLatinHypercube> out;
    for_each_latin(type, [&](const PartialLatinHypercube& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

LatinTally latin_tally(const MagicSet& type, const LatinOptions& opts) { return tally(type, false, opts); }

BigInt alon_tarsi(const MagicSet& type, const LatinOptions& opts)
{
    const BigInt factor = relabel_factor(type);
    if (factor == 0)
        return 0;
    if (type.cells.empty())
        return 1;
    return factor * tally(type, true, opts).signed_sum;
}

BigInt alon_tarsi_brute(const MagicSet& type, const LatinOptions& opts) { return tally(type, false, opts).signed_sum; }

BigInt alon_tarsi_checkpointed(const MagicSet& type, const std::string& checkpoint_path, const LatinOptions& opts)
{
    const BigInt factor = relabel_factor(type);
    if (factor == 0)
        return 0;
    if (type.cells.empty())
        return 1;
    if (type.n > 64)
        throw DomainError("checkpointed enumeration supports at most 64 symbols");

    Layout lay(type);
    const int fixed = normalized_prefix(type);
    const int depth = std::min(type.n, lay.cells - fixed);
    const auto tasks = split_tasks<NarrowTracker>(lay, fixed, depth);
    const std::string key = type_key(type);

    std::map<std::size_t, BigInt> done;
    if (std::ifstream in(checkpoint_path); in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception&) {
                continue;  // torn final line from an interrupted run
            }
            if (j.value("type", "") != key || j.value("tasks", std::size_t{0}) != tasks.size())
                continue;
            done[j.at("task").get<std::size_t>()] = parse_bigint(j.at("sum").get<std::string>());
        }
    }

    std::FILE* out = std::fopen(checkpoint_path.c_str(), "a");
    if (!out)
        throw DomainError("cannot open checkpoint file " + checkpoint_path);
    std::mutex out_mutex;
    BudgetMeter meter(opts.node_budget);

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (!done.count(i))
            todo.push_back(i);

    BigInt fresh;
    try {
        fresh = parallel_sum<BigInt>(todo.size(), opts.threads, [&](std::size_t t) {
            const std::size_t i = todo[t];
            const LatinTally r = run_task<NarrowTracker>(lay, fixed, tasks[i], meter);
            nlohmann::json j = {{"type", key},
                                {"tasks", tasks.size()},
                                {"task", i},
                                {"count", to_decimal(r.count)},
                                {"sum", to_decimal(r.signed_sum)}};
            std::lock_guard lock(out_mutex);
            const std::string line = j.dump() + "\n";
            std::fputs(line.c_str(), out);
            std::fflush(out);
            ::fsync(::fileno(out));
            return r.signed_sum;
        });
    } catch (...) {
        std::fclose(out);
        throw;
    }
    std::fclose(out);

    BigInt sum = fresh;
    for (const auto& [i, v] : done)
        sum += v;
    return factor * sum;
}

} // namespace tinv
