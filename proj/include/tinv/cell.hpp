#pragma once

#include <cstdint>
#include <vector>

namespace tinv {

/// A cell of the box [k]^d, coordinates 1-based.
struct Cell {
    std::vector<int> coords;

    friend auto operator<=>(const Cell&, const Cell&) = default;
    friend bool operator==(const Cell&, const Cell&) = default;
};

using CellIndex = std::uint32_t;

/// Mixed-radix numbering of [k]^d with the first coordinate most significant,
/// so numeric order of indices equals lexicographic order of cells.
class CellSpace {
public:
    CellSpace(int d, int k);

    int dim() const { return d_; }
    int side() const { return k_; }
    CellIndex count() const { return count_; }

    CellIndex index_of(const Cell& c) const;
    Cell cell_of(CellIndex idx) const;
    /// 1-based coordinate `direction` (1..d) of the cell with index idx.
    int coord(CellIndex idx, int direction) const
    {
        return static_cast<int>((idx / stride_[direction - 1]) % k_) + 1;
    }
    /// Stride of a unit step in `direction` (1..d).
    CellIndex stride(int direction) const { return stride_[direction - 1]; }
    bool contains(const Cell& c) const;

private:
    int d_;
    int k_;
    CellIndex count_;
    std::vector<CellIndex> stride_;
};

} // namespace tinv
