#pragma once

#include <string>
#include <vector>

namespace tinv {

/// A d x M integer table indexing a Delta invariant. Row i must contain every
/// value of [M / shape[i]] exactly shape[i] times; entries are 1-based.
///
/// The struct itself is an unchecked grid: use validate_balanced() before
/// handing it to anything that evaluates.
struct BalancedTable {
    std::vector<int> shape;              // (n_1, ..., n_d)
    std::vector<std::vector<int>> rows;  // d rows of M entries

    int dim() const { return static_cast<int>(rows.size()); }
    int columns() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
    /// k_i = M / n_i, the number of blocks in row i (0-based row).
    int blocks(int row) const { return columns() / shape[row]; }
    std::vector<int> column(int j) const;  // 0-based column

    friend bool operator==(const BalancedTable&, const BalancedTable&) = default;
};

enum class BalanceFailure {
    none,
    shape_mismatch,   // shape length differs from row count, or a non-positive n_i
    ragged_rows,      // rows of different lengths
    not_divisible,    // n_i does not divide M
    bad_multiplicity  // some value of [M/n_i] missing, repeated, or out of range
};

struct BalanceCheck {
    BalanceFailure failure = BalanceFailure::none;
    int row = -1;  // 0-based offending row, -1 when not row specific
    std::string message;

    explicit operator bool() const { return failure == BalanceFailure::none; }
};

BalanceCheck validate_balanced(const BalancedTable& t);
/// Throws DomainError with the failure message.
void require_balanced(const BalancedTable& t);

/// One row's set partition of [M]: blocks of 1-based column indices, each
/// ascending, blocks ordered by their smallest element.
using SetPartition = std::vector<std::vector<int>>;
using SetPartitionTuple = std::vector<SetPartition>;

SetPartitionTuple table_to_set_partitions(const BalancedTable& t);

/// Canonical representative under row-value relabeling and column permutation:
/// the lexicographically least column-sorted table over all row relabelings.
/// Falls back to iterated first-occurrence relabeling when the number of
/// relabelings exceeds `max_relabelings`.
BalancedTable canonicalize_table(const BalancedTable& t, long max_relabelings = 200000);

/// Columns sorted lexicographically, labels untouched.
BalancedTable sort_columns(const BalancedTable& t);

bool has_duplicate_columns(const BalancedTable& t);

std::string to_string(const BalancedTable& t);

} // namespace tinv
