#pragma once

#include "tinv/partition.hpp"
#include "tinv/scalar.hpp"

#include <cstdint>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tinv {

/// Persistent coefficient store: one JSON object per line,
/// {"key":[[parts],...],"value":"decimal"}, keys sorted. Appends only; the
/// file is synced when the cache is closed.
class CoefficientCache {
public:
    explicit CoefficientCache(std::string path);
    ~CoefficientCache();
    CoefficientCache(const CoefficientCache&) = delete;
    CoefficientCache& operator=(const CoefficientCache&) = delete;

    static std::vector<Partition> canonical_key(std::vector<Partition> key);

    std::optional<BigInt> get(const std::vector<Partition>& key) const;
    /// Records a value; a conflicting earlier value is an InternalError.
    void put(const std::vector<Partition>& key, const BigInt& value);
    std::size_t size() const;
    const std::string& path() const { return path_; }
    void close();

private:
    std::string path_;
    mutable std::mutex mutex_;
    std::map<std::vector<Partition>, BigInt> values_;
    std::FILE* out_ = nullptr;
};

struct KronOptions {
    int max_partition_size = 24;
    std::uint64_t max_basis = 200'000;
    int threads = 1;
    CoefficientCache* cache = nullptr;
};

/// chi^lambda at the class of cycle type mu, by Murnaghan-Nakayama.
BigInt character(const Partition& lambda, const Partition& mu);

/// m! / z_mu.
BigInt class_size(const Partition& mu);

/// Multiplicity of the last irreducible in the tensor product of the others:
/// (1/m!) sum_mu |C_mu| prod_i chi^{lambda_i}(mu). Needs at least two partitions of one size.
BigInt kronecker_char(const std::vector<Partition>& lambdas, const KronOptions& opts = {});

/// g_d(n,k): kronecker_char on d copies of the n x k rectangle (n rows of length k).
BigInt g_rect(int d, int n, int k, const KronOptions& opts = {});

/// g_d(n,k) as the nullity of the stacked raising operators on the weight space.
BigInt g_rect_kernel(int d, int n, int k, const KronOptions& opts = {});

/// g_d(n,k) as a sum over chains of three-way coefficients g(mu_i, k x n, mu_{i+1}),
/// with mu_i confined to the k^i x k^{d-i} box. d = 3 uses kronecker_char directly.
BigInt g_recursive(int d, int n, int k, const KronOptions& opts = {});

/// Smallest multiple of lcm(dims) that is at least ceil((n_1...n_d)^{1/(d-1)}).
/// d must be odd and at least 3.
long long delta_lower_bound(const std::vector<int>& dims);

struct DegreeResult {
    bool conclusive = false;
    long long degree = 0;         // valid when conclusive
    long long checked_up_to = 0;  // largest degree examined
    std::string note;
};

/// delta_d(n): the smallest m = nk with g_d(n,k) > 0, scanning k upward from the
/// lower bound. Sizes above opts.max_partition_size end the scan inconclusively.
DegreeResult delta_degree(int d, int n, const KronOptions& opts = {});

} // namespace tinv
