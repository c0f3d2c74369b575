#pragma once

#include "tinv/scalar.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace tinv {

/// Sparse exact hypermatrix of shape n_1 x ... x n_d.
///
/// Indices in the public interface are 1-based tuples. Storage is keyed by the
/// 0-based row-major offset (last index fastest), so iteration order is the
/// lexicographic order of index tuples. Absent entries are zero; stored values
/// are never zero.
class Hypermatrix {
public:
    Hypermatrix() = default;
    explicit Hypermatrix(std::vector<int> shape);

    /// The unit tensor I_n with d legs: ones at (i, ..., i).
    static Hypermatrix unit(int d, int n);

    const std::vector<int>& shape() const { return shape_; }
    int dim() const { return static_cast<int>(shape_.size()); }
    std::uint64_t volume() const { return volume_; }
    std::size_t nonzero_count() const { return entries_.size(); }

    ExactScalar at(std::span<const int> index) const;
    ExactScalar at(std::initializer_list<int> index) const
    {
        return at(std::span<const int>(index.begin(), index.size()));
    }
    void set(std::span<const int> index, const ExactScalar& value);
    void set(std::initializer_list<int> index, const ExactScalar& value)
    {
        set(std::span<const int>(index.begin(), index.size()), value);
    }

    /// Visits stored entries in lexicographic index order; `index` is 1-based.
    void for_each_nonzero(
        const std::function<void(std::span<const int> index, const ExactScalar& value)>& fn) const;

    bool all_integer() const;

    friend bool operator==(const Hypermatrix&, const Hypermatrix&) = default;

private:
    std::uint64_t offset_of(std::span<const int> index) const;
    std::vector<int> index_of(std::uint64_t offset) const;

    std::vector<int> shape_;
    std::uint64_t volume_ = 0;
    std::map<std::uint64_t, ExactScalar> entries_;
};

/// Outer tensor product Y ⊗ Z with shape (shape(Y), shape(Z)).
Hypermatrix outer_product(const Hypermatrix& y, const Hypermatrix& z);

/// Acts with the square matrix `a` (row-major, n x n) on leg `leg` (1-based):
/// result[.., i, ..] = sum_l a[i][l] * x[.., l, ..].
Hypermatrix act_on_leg(const Hypermatrix& x, int leg, const std::vector<std::vector<ExactScalar>>& a);

} // namespace tinv
