#pragma once

#include "tinv/balanced_table.hpp"
#include "tinv/hypermatrix.hpp"
#include "tinv/scalar.hpp"

#include <cstdint>
#include <span>

namespace tinv {

struct DeltaOptions {
    int threads = 1;
    std::uint64_t node_budget = 2'000'000'000ULL;  // search nodes before ResourceError
};

/// Product over the blocks of `part` of the sign of sigma restricted to the
/// block, read in ascending element order. sigma[j-1] is the image of j.
int block_sign(const SetPartition& part, std::span<const int> sigma);

/// Exact value of Delta_T(X). Columns are filled left to right with index
/// tuples drawn from the nonzero entries of X; a tuple is admissible only if it
/// keeps every block of every row injective, which realizes the sum over
/// block-permutation tuples with zero factors never visited.
ExactScalar delta_eval(const BalancedTable& t, const Hypermatrix& x, const DeltaOptions& opts = {});

/// Delta_T(I_n) through the Latin hypercube correspondence: the columns of T
/// form a magic set and the value is the sorting sign times its AT number.
BigInt delta_eval_unit(const BalancedTable& t, int n, const DeltaOptions& opts = {});

/// (-1)^l for the swap of columns i < j (1-based), with
/// l = sum_m #{c in [i,j] : T_mc = T_mi} + #{c in [i,j] : T_mc = T_mj} - [T_mi = T_mj].
int column_swap_sign(const BalancedTable& t, int i, int j);
BalancedTable swap_columns(const BalancedTable& t, int i, int j);

/// Delta of the column-permuted table relative to Delta_T, for any permutation.
/// perm[j] is the 0-based original column placed at position j.
int column_permutation_sign(const BalancedTable& t, std::span<const int> perm);

/// Horizontal concatenation; row-i labels of the second table are shifted by M1/n_i.
BalancedTable hconcat(const BalancedTable& a, const BalancedTable& b);
/// Stacks rows; the shapes are concatenated.
BalancedTable vconcat(const BalancedTable& a, const BalancedTable& b);

/// The d x k^d table whose j-th column is the j-th element of [k]^d in lexicographic order.
BalancedTable fundamental_table(int d, int k);
/// fundamental_table with the k constant columns removed.
BalancedTable fundamental_table_reduced(int d, int k);
/// First d-1 rows 1^k 2^k ... k^k, last row (1 2 ... k) repeated k times.
BalancedTable at_square_table(int d, int k);
/// Row i < l is (1^{k^{l-i}} ... k^{k^{l-i}}) repeated k^{i-1} times; rows l..d are (1 2 ... k)^{k^{l-1}}.
BalancedTable at_power_table(int d, int k, int l);

} // namespace tinv
