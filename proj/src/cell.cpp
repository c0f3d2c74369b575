#include "tinv/cell.hpp"

#include "tinv/errors.hpp"

#include <limits>
#include <string>

namespace tinv {

CellSpace::CellSpace(int d, int k) : d_(d), k_(k), stride_(d > 0 ? d : 0)
{
    if (d < 1 || k < 1)
        throw DomainError("cell space needs d >= 1 and k >= 1");
    std::uint64_t total = 1;
    for (int i = d - 1; i >= 0; --i) {
        stride_[i] = static_cast<CellIndex>(total);
        total *= static_cast<std::uint64_t>(k);
        if (total > std::numeric_limits<CellIndex>::max())
            throw DomainError("cell space [" + std::to_string(k) + "]^" + std::to_string(d) +
                              " is too large");
    }
    count_ = static_cast<CellIndex>(total);
}

bool CellSpace::contains(const Cell& c) const
{
    if (static_cast<int>(c.coords.size()) != d_)
        return false;
    for (int v : c.coords)
        if (v < 1 || v > k_)
            return false;
    return true;
}

CellIndex CellSpace::index_of(const Cell& c) const
{
    if (!contains(c))
        throw DomainError("cell outside [" + std::to_string(k_) + "]^" + std::to_string(d_));
    CellIndex idx = 0;
    for (int i = 0; i < d_; ++i)
        idx += static_cast<CellIndex>(c.coords[i] - 1) * stride_[i];
    return idx;
}

Cell CellSpace::cell_of(CellIndex idx) const
{
    Cell c;
    c.coords.resize(d_);
    for (int i = 0; i < d_; ++i)
        c.coords[i] = static_cast<int>((idx / stride_[i]) % k_) + 1;
    return c;
}

} // namespace tinv
