#pragma once

#include "tinv/cell.hpp"
#include "tinv/scalar.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace tinv {

/// Strictly increasing cell indices of [k]^d (see CellSpace); names psi_P.
using BasisIndex = std::vector<CellIndex>;

/// Sparse element of the exterior algebra over (C^k)^{⊗d}, homogeneous of one grade.
struct WedgeVector {
    int d = 0;
    int k = 0;
    int grade = 0;
    std::map<BasisIndex, BigInt> terms;  // no zero coefficients

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const WedgeVector&, const WedgeVector&) = default;
};

WedgeVector zero_vector(int d, int k, int grade);

/// c * (e_{c_1} ∧ ... ∧ e_{c_m}) in the order given; sorted with the sign of
/// the sorting permutation, zero if a cell repeats.
WedgeVector wedge_of_cells(int d, int k, const std::vector<Cell>& cells, const BigInt& coeff = 1);

WedgeVector operator+(const WedgeVector& a, const WedgeVector& b);
WedgeVector operator*(const BigInt& c, const WedgeVector& v);

/// Bilinear wedge product. psi_A ∧ psi_B = (-1)^{#{(a,b) : a > b}} psi_{A ∪ B}, 0 if A ∩ B ≠ ∅.
WedgeVector wedge(const WedgeVector& v, const WedgeVector& w);

/// The k-form: sum over pi_2..pi_d in S_k of sgn(pi_2...pi_d) on the diagonal
/// {(i, pi_2(i), ..., pi_d(i))}.
WedgeVector omega(int d, int k);

/// omega^n as (omega^{n-1}) ∧ omega.
WedgeVector wedge_power(int d, int k, int n);

/// E^{(direction)}_{i,i+1}: each cell p with p_direction = i+1 is replaced by
/// the cell one step lower in that direction.
WedgeVector raising_operator(const WedgeVector& v, int direction, int i);

/// Marginals s_l(P, i) of a basis term, laid out as [l * k + (i - 1)].
std::vector<int> weight_of(const BasisIndex& p, int d, int k);
bool is_weight_homogeneous(const WedgeVector& v);

/// True iff every raising operator kills v. Throws DomainError for the zero
/// vector or a vector that is not weight homogeneous.
bool is_highest_weight(const WedgeVector& v);

/// Magic sets of marginal n as basis indices, in lexicographic order.
std::vector<BasisIndex> weight_space_basis(int d, int k, int n);

/// Rank of a list of sparse integer vectors (sorted (column, value) pairs),
/// by fraction-free elimination. Tries 64-bit arithmetic and redoes the work
/// with big integers on overflow.
std::size_t sparse_rank(const std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>>& rows);

/// dim ker of the stacked raising operators restricted to weight_space_basis(d,k,n).
/// Throws ResourceError when the basis is larger than max_basis.
std::uint64_t raising_kernel_dimension(int d, int k, int n, std::uint64_t max_basis);

} // namespace tinv
