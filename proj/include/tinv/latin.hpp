#pragma once

#include "tinv/cell.hpp"
#include "tinv/scalar.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tinv {

/// A subset of [k]^d meeting every axis-parallel slice in exactly n cells.
/// Cells are kept sorted lexicographically and distinct.
struct MagicSet {
    int d = 0;
    int k = 0;
    int n = 0;
    std::vector<Cell> cells;

    friend bool operator==(const MagicSet&, const MagicSet&) = default;
};

/// Sorts `cells`, checks distinctness, range and uniform marginals, and fills in n.
/// Throws DomainError with the first violation found.
MagicSet make_magic_set(int d, int k, std::vector<Cell> cells);
MagicSet full_cube(int d, int k);

/// Symbol assignment on a magic set; values[i] belongs to type.cells[i] and lies in [n].
struct PartialLatinHypercube {
    MagicSet type;
    std::vector<int> values;

    int value_at(const Cell& c) const;  // 0 off the support
    friend bool operator==(const PartialLatinHypercube&, const PartialLatinHypercube&) = default;
};

/// Checks that each slice reads a permutation of [n]; throws DomainError otherwise.
PartialLatinHypercube make_partial_latin(MagicSet type, std::vector<int> values);

/// Visits every magic set of [k]^d with marginal n in lexicographic order of
/// the sorted cell lists. Returning false from `visit` stops the walk.
void enumerate_magic_sets(int d, int k, int n, const std::function<bool(const MagicSet&)>& visit);
std::vector<MagicSet> magic_sets(int d, int k, int n);
std::uint64_t count_magic_sets(int d, int k, int n);

/// Visits every partial Latin hypercube of the given type. Cells are filled in
/// lexicographic order with symbols tried ascending, so the order is fixed.
void for_each_latin(const MagicSet& type, const std::function<bool(const PartialLatinHypercube&)>& visit);
std::vector<PartialLatinHypercube> enumerate_latin(const MagicSet& type);

/// As for_each_latin, restricted to hypercubes whose first direction-1 slice
/// reads 1, 2, ..., n. Every hypercube is a relabeling of exactly one of these.
void for_each_latin_normalized(const MagicSet& type, const std::function<bool(const PartialLatinHypercube&)>& visit);

/// Product over the k slices in direction `direction` (1-based) of the sign of
/// the symbols read in lexicographic cell order.
int directional_sign(const PartialLatinHypercube& c, int direction);
int full_sign(const PartialLatinHypercube& c);
int symbol_sign(const PartialLatinHypercube& c);
int magic_set_sign(const MagicSet& t);

/// Exchanges symbols i and j (1-based, distinct).
PartialLatinHypercube value_swap(const PartialLatinHypercube& c, int i, int j);

struct LatinOptions {
    int threads = 1;
    std::uint64_t node_budget = 20'000'000'000ULL;  // DFS nodes before ResourceError
};

struct LatinTally {
    BigInt count;       // number of hypercubes
    BigInt signed_sum;  // sum of full signs

    LatinTally& operator+=(const LatinTally& o)
    {
        count += o.count;
        signed_sum += o.signed_sum;
        return *this;
    }
};

/// Full enumeration: count and signed sum over all hypercubes of the type.
LatinTally latin_tally(const MagicSet& type, const LatinOptions& opts = {});

/// AT_d(k, T). Fixes the symbols of the first slice in direction 1 and scales
/// by the number of relabelings, which is exact by the relabeling sign law.
BigInt alon_tarsi(const MagicSet& type, const LatinOptions& opts = {});

/// AT_d(k, T) by plain enumeration of every hypercube.
BigInt alon_tarsi_brute(const MagicSet& type, const LatinOptions& opts = {});

/// Resumable AT computation. Work is split over the symbol assignments of the
/// second slice in direction 1 (after normalizing the first); each finished
/// subtask is appended to `checkpoint_path` as a JSON line and skipped on rerun.
BigInt alon_tarsi_checkpointed(const MagicSet& type, const std::string& checkpoint_path,
                               const LatinOptions& opts = {});

} // namespace tinv
