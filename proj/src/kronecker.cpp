#include "tinv/kronecker.hpp"

#include "tinv/errors.hpp"
#include "tinv/exterior.hpp"
#include "tinv/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <unistd.h>
#include <unordered_map>

namespace tinv {

// ---------------------------------------------------------------- cache

CoefficientCache::CoefficientCache(std::string path) : path_(std::move(path))
{
    std::ifstream in(path_);
    std::string line;
    std::vector<std::string> lines;
    while (in && std::getline(in, line))
        if (!line.empty())
            lines.push_back(line);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
            std::vector<Partition> key;
            for (const auto& p : j.at("key"))
                key.emplace_back(p.get<std::vector<int>>());
            const BigInt value = parse_bigint(j.at("value").get<std::string>());
            key = canonical_key(std::move(key));
            auto [it, fresh] = values_.emplace(key, value);
            if (!fresh && it->second != value)
                throw InternalError("cache " + path_ + " holds two values for one key at line " +
                                    std::to_string(i + 1));
        } catch (const nlohmann::json::exception& e) {
            if (i + 1 == lines.size())
                break;  // torn tail from an interrupted writer
            throw DomainError("cache " + path_ + " line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
}

CoefficientCache::~CoefficientCache() { close(); }

void CoefficientCache::close()
{
    std::lock_guard lock(mutex_);
    if (out_) {
        std::fflush(out_);
        ::fsync(::fileno(out_));
        std::fclose(out_);
        out_ = nullptr;
    }
}

std::vector<Partition> CoefficientCache::canonical_key(std::vector<Partition> key)
{
    std::sort(key.begin(), key.end());
    return key;
}

std::optional<BigInt> CoefficientCache::get(const std::vector<Partition>& key) const
{
    const auto k = canonical_key(key);
    std::lock_guard lock(mutex_);
    auto it = values_.find(k);
    if (it == values_.end())
        return std::nullopt;
    return it->second;
}

void CoefficientCache::put(const std::vector<Partition>& key, const BigInt& value)
{
    const auto k = canonical_key(key);
    std::lock_guard lock(mutex_);
    auto [it, fresh] = values_.emplace(k, value);
    if (!fresh) {
        if (it->second != value)
            throw InternalError("cache disagreement for a coefficient: stored " + to_decimal(it->second) +
                                ", computed " + to_decimal(value));
        return;
    }
    if (!out_) {
        // drop a torn tail so the next record starts on a fresh line
        if (std::ifstream in(path_, std::ios::binary); in) {
            const std::string text(std::istreambuf_iterator<char>(in), {});
            if (!text.empty() && text.back() != '\n') {
                const auto cut = text.rfind('\n');
                in.close();
                std::filesystem::resize_file(path_, cut == std::string::npos ? 0 : cut + 1);
            }
        }
        out_ = std::fopen(path_.c_str(), "a");
        if (!out_)
            throw DomainError("cannot open cache file " + path_);
    }
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : k)
        parts.push_back(p.parts());
    const nlohmann::json j = {{"key", parts}, {"value", to_decimal(value)}};
    const std::string text = j.dump() + "\n";
    std::fputs(text.c_str(), out_);
    std::fflush(out_);
}

std::size_t CoefficientCache::size() const
{
    std::lock_guard lock(mutex_);
    return values_.size();
}

// ---------------------------------------------------------------- characters

namespace {

__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

BigInt to_big(Wide v)
{
    const bool neg = v < 0;
    UWide u = neg ? -static_cast<UWide>(v) : static_cast<UWide>(v);
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    BigInt r = (hi << 64) + lo;
    return neg ? BigInt(-r) : r;
}

// Beta set of lambda: bead i at lambda_i + (l - 1 - i); zero parts are stripped.
std::uint64_t beta_mask(const Partition& lambda)
{
    if (lambda.width() + lambda.length() > 63)
        throw ResourceError("partition " + lambda.to_string() + " is too large for the character routine");
    std::uint64_t mask = 0;
    const int l = lambda.length();
    for (int i = 0; i < l; ++i)
        mask |= 1ULL << (lambda.part(i) + l - 1 - i);
    return mask;
}

class CharacterMemo {
public:
    Wide value(std::uint64_t mask, const std::vector<int>& parts, std::size_t from)
    {
        if (from == parts.size())
            return mask == 0 ? 1 : 0;
        std::string key(reinterpret_cast<const char*>(&mask), sizeof mask);
        for (std::size_t i = from; i < parts.size(); ++i)
            key.push_back(static_cast<char>(parts[i]));
        {
            std::lock_guard lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end())
                return it->second;
        }
        const int r = parts[from];
        Wide total = 0;
        for (std::uint64_t beads = mask; beads; beads &= beads - 1) {
            const int p = std::countr_zero(beads);
            if (p < r || ((mask >> (p - r)) & 1ULL))
                continue;
            const std::uint64_t between = mask & ((1ULL << p) - 1) & ~((2ULL << (p - r)) - 1);
            std::uint64_t next = (mask & ~(1ULL << p)) | (1ULL << (p - r));
            while (next & 1ULL)
                next >>= 1;
            Wide term = value(next, parts, from + 1);
            if (std::popcount(between) % 2)
                term = -term;
            if (__builtin_add_overflow(total, term, &total))
                throw ResourceError("character value overflows 128 bits");
        }
        std::lock_guard lock(mutex_);
        memo_.emplace(std::move(key), total);
        return total;
    }

private:
    std::mutex mutex_;
    std::unordered_map<std::string, Wide> memo_;
};

CharacterMemo& character_memo()
{
    static CharacterMemo memo;
    return memo;
}

// Conjugacy classes of S_m in partitions_of order, with their sizes.
struct ClassTable {
    std::vector<Partition> classes;
    std::vector<BigInt> sizes;
    BigInt order;
};

const ClassTable& class_table(int m)
{
    static std::mutex mutex;
    static std::map<int, ClassTable> tables;
    std::lock_guard lock(mutex);
    auto it = tables.find(m);
    if (it != tables.end())
        return it->second;
    ClassTable t;
    t.classes = partitions_of(m);
    for (const auto& mu : t.classes)
        t.sizes.push_back(class_size(mu));
    t.order = factorial(static_cast<unsigned>(m));
    return tables.emplace(m, std::move(t)).first->second;
}

// chi^lambda on every class of S_{|lambda|}, aligned with class_table.
const std::vector<Wide>& character_row(const Partition& lambda)
{
    static std::mutex mutex;
    static std::map<Partition, std::vector<Wide>> rows;
    {
        std::lock_guard lock(mutex);
        if (auto it = rows.find(lambda); it != rows.end())
            return it->second;
    }
    const ClassTable& t = class_table(lambda.size());
    const std::uint64_t mask = beta_mask(lambda);
    std::vector<Wide> row(t.classes.size());
    for (std::size_t c = 0; c < t.classes.size(); ++c)
        row[c] = character_memo().value(mask, t.classes[c].parts(), 0);
    std::lock_guard lock(mutex);
    return rows.emplace(lambda, std::move(row)).first->second;
}

} // namespace

BigInt character(const Partition& lambda, const Partition& mu)
{
    if (lambda.size() != mu.size())
        throw DomainError("character: |lambda| = " + std::to_string(lambda.size()) + " but |mu| = " +
                          std::to_string(mu.size()));
    return to_big(character_memo().value(beta_mask(lambda), mu.parts(), 0));
}

BigInt class_size(const Partition& mu)
{
    BigInt z = 1;
    std::map<int, int> mult;
    for (int p : mu.parts())
        ++mult[p];
    for (const auto& [part, count] : mult) {
        BigInt pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(part), static_cast<unsigned long>(count));
        z *= pw * factorial(static_cast<unsigned>(count));
    }
    return factorial(static_cast<unsigned>(mu.size())) / z;
}

BigInt kronecker_char(const std::vector<Partition>& lambdas, const KronOptions& opts)
{
    if (lambdas.size() < 2)
        throw DomainError("kronecker_char needs at least two partitions");
    const int m = lambdas.front().size();
    for (const auto& l : lambdas)
        if (l.size() != m)
            throw DomainError("kronecker_char: partitions " + lambdas.front().to_string() + " and " + l.to_string() +
                              " have different sizes");
    if (m > opts.max_partition_size)
        throw ResourceError("partition size " + std::to_string(m) + " exceeds the budget of " +
                            std::to_string(opts.max_partition_size));
    if (m == 0)
        return 1;

    std::map<Partition, unsigned long> distinct;
    for (const auto& l : lambdas)
        ++distinct[l];
    std::vector<std::pair<const std::vector<Wide>*, unsigned long>> rows;
    for (const auto& [l, count] : distinct)
        rows.emplace_back(&character_row(l), count);

    const ClassTable& t = class_table(m);
    const BigInt total = parallel_sum<BigInt>(t.classes.size(), opts.threads, [&](std::size_t c) {
        BigInt term = t.sizes[c];
        for (const auto& [row, count] : rows) {
            const Wide x = (*row)[c];
            if (x == 0)
                return BigInt(0);
            BigInt p;
            mpz_pow_ui(p.get_mpz_t(), to_big(x).get_mpz_t(), count);
            term *= p;
        }
        return term;
    });
    if (!mpz_divisible_p(total.get_mpz_t(), t.order.get_mpz_t()))
        throw InternalError("character sum is not divisible by " + std::to_string(m) + "!");
    BigInt g = total / t.order;
    if (g < 0)
        throw InternalError("character sum produced a negative multiplicity");
    return g;
}

// ---------------------------------------------------------------- rectangles

namespace {

void check_rect_args(int d, int n, int k)
{
    if (d < 2 || n < 0 || k < 0)
        throw DomainError("rectangular coefficients need d >= 2 and n, k >= 0");
}

BigInt cached_kronecker(const std::vector<Partition>& key, const KronOptions& opts)
{
    if (opts.cache)
        if (auto hit = opts.cache->get(key))
            return *hit;
    BigInt g = kronecker_char(key, opts);
    if (opts.cache)
        opts.cache->put(key, g);
    return g;
}

long long capped_power(long long k, int e, long long cap)
{
    long long p = 1;
    for (int i = 0; i < e && p <= cap; ++i)
        p *= k;
    return std::min(p, cap);
}

} // namespace

BigInt g_rect(int d, int n, int k, const KronOptions& opts)
{
    check_rect_args(d, n, k);
    if (n == 0 || k == 0)
        return 1;
    if (capped_power(k, d - 1, n + 1LL) < n)
        return 0;
    return cached_kronecker(std::vector<Partition>(d, Partition::rectangle(n, k)), opts);
}

BigInt g_rect_kernel(int d, int n, int k, const KronOptions& opts)
{
    check_rect_args(d, n, k);
    if (n == 0 || k == 0)
        return 1;
    if (capped_power(k, d - 1, n + 1LL) < n)
        return 0;
    return BigInt(static_cast<unsigned long>(raising_kernel_dimension(d, k, n, opts.max_basis)));
}

BigInt g_recursive(int d, int n, int k, const KronOptions& opts)
{
    check_rect_args(d, n, k);
    if (d % 2 == 0 || d < 3)
        throw DomainError("g_recursive needs odd d >= 3");
    if (n == 0 || k == 0)
        return 1;
    if (d == 3)
        return g_rect(3, n, k, opts);
    if (capped_power(k, d - 1, n + 1LL) < n)
        return 0;
    const int m = n * k;
    if (m > opts.max_partition_size)
        throw ResourceError("partition size " + std::to_string(m) + " exceeds the budget of " +
                            std::to_string(opts.max_partition_size));
    const Partition a = Partition::rectangle(k, n);
    const Partition b = Partition::rectangle(n, k);
    auto layer = [&](int i) {
        const long long rows = capped_power(k, i, m);
        const long long cols = capped_power(k, d - i, m);
        return partitions_in_box(m, static_cast<int>(rows), static_cast<int>(cols));
    };
    auto three = [&](const Partition& x, const Partition& y) { return cached_kronecker({x, a, y}, opts); };

    std::vector<Partition> current = layer(2);
    std::vector<BigInt> weight(current.size());
    for (std::size_t j = 0; j < current.size(); ++j)
        weight[j] = three(a, current[j]);
    for (int i = 2; i <= d - 3; ++i) {
        std::vector<Partition> next = layer(i + 1);
        std::vector<BigInt> w(next.size());
        for (std::size_t j = 0; j < current.size(); ++j) {
            if (weight[j] == 0)
                continue;
            for (std::size_t l = 0; l < next.size(); ++l) {
                const BigInt g = three(current[j], next[l]);
                if (g != 0)
                    w[l] += weight[j] * g;
            }
        }
        current = std::move(next);
        weight = std::move(w);
    }
    BigInt total = 0;
    for (std::size_t j = 0; j < current.size(); ++j)
        if (weight[j] != 0)
            total += weight[j] * three(current[j], b);
    return total;
}

// ---------------------------------------------------------------- degrees

long long delta_lower_bound(const std::vector<int>& dims)
{
    const int d = static_cast<int>(dims.size());
    if (d < 3 || d % 2 == 0)
        throw DomainError("the degree lower bound is stated for odd d >= 3");
    BigInt product = 1;
    long long l = 1;
    for (int n : dims) {
        if (n < 1)
            throw DomainError("dimensions must be positive");
        product *= n;
        l = std::lcm(l, static_cast<long long>(n));
    }
    BigInt root;
    const bool exact = mpz_root(root.get_mpz_t(), product.get_mpz_t(), static_cast<unsigned long>(d - 1)) != 0;
    if (!exact)
        root += 1;
    const BigInt step(static_cast<long>(l));
    BigInt bound = (root + step - 1) / step * step;
    if (!bound.fits_slong_p())
        throw DomainError("degree lower bound does not fit in 64 bits");
    return bound.get_si();
}

DegreeResult delta_degree(int d, int n, const KronOptions& opts)
{
    if (n < 1)
        throw DomainError("delta_degree needs n >= 1");
    DegreeResult r;
    const long long lb = delta_lower_bound(std::vector<int>(d, n));
    for (long long k = lb / n;; ++k) {
        const long long m = n * k;
        if (m > opts.max_partition_size) {
            r.note = "no positive coefficient up to degree " + std::to_string(r.checked_up_to) +
                     "; degree " + std::to_string(m) + " exceeds the partition budget of " +
                     std::to_string(opts.max_partition_size);
            return r;
        }
        const BigInt g = g_rect(d, n, static_cast<int>(k), opts);
        r.checked_up_to = m;
        if (g > 0) {
            r.conclusive = true;
            r.degree = m;
            return r;
        }
    }
}

} // namespace tinv
