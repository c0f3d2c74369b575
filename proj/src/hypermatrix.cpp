#include "tinv/hypermatrix.hpp"

#include "tinv/errors.hpp"

#include <limits>
#include <string>

namespace tinv {

Hypermatrix::Hypermatrix(std::vector<int> shape) : shape_(std::move(shape)), volume_(1)
{
    for (int n : shape_) {
        if (n < 1)
            throw DomainError("hypermatrix shape entries must be positive");
        if (volume_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n))
            throw DomainError("hypermatrix shape too large");
        volume_ *= static_cast<std::uint64_t>(n);
    }
}

Hypermatrix Hypermatrix::unit(int d, int n)
{
    Hypermatrix x(std::vector<int>(d, n));
    std::vector<int> idx(d);
    for (int i = 1; i <= n; ++i) {
        std::fill(idx.begin(), idx.end(), i);
        x.set(idx, 1);
    }
    return x;
}

std::uint64_t Hypermatrix::offset_of(std::span<const int> index) const
{
    if (index.size() != shape_.size())
        throw DomainError("index has " + std::to_string(index.size()) + " coordinates, tensor has " +
                          std::to_string(shape_.size()) + " legs");
    std::uint64_t off = 0;
    for (std::size_t i = 0; i < shape_.size(); ++i) {
        if (index[i] < 1 || index[i] > shape_[i])
            throw DomainError("index coordinate " + std::to_string(index[i]) + " outside [1," +
                              std::to_string(shape_[i]) + "]");
        off = off * static_cast<std::uint64_t>(shape_[i]) + static_cast<std::uint64_t>(index[i] - 1);
    }
    return off;
}

std::vector<int> Hypermatrix::index_of(std::uint64_t offset) const
{
    std::vector<int> idx(shape_.size());
    for (std::size_t i = shape_.size(); i-- > 0;) {
        idx[i] = static_cast<int>(offset % static_cast<std::uint64_t>(shape_[i])) + 1;
        offset /= static_cast<std::uint64_t>(shape_[i]);
    }
    return idx;
}

ExactScalar Hypermatrix::at(std::span<const int> index) const
{
    auto it = entries_.find(offset_of(index));
    return it == entries_.end() ? ExactScalar(0) : it->second;
}

void Hypermatrix::set(std::span<const int> index, const ExactScalar& value)
{
    const auto off = offset_of(index);
    if (value == 0)
        entries_.erase(off);
    else
        entries_[off] = value;
}

void Hypermatrix::for_each_nonzero(
    const std::function<void(std::span<const int>, const ExactScalar&)>& fn) const
{
    for (const auto& [off, v] : entries_) {
        const auto idx = index_of(off);
        fn(idx, v);
    }
}

bool Hypermatrix::all_integer() const
{
    for (const auto& [off, v] : entries_)
        if (!is_integer(v))
            return false;
    return true;
}

Hypermatrix outer_product(const Hypermatrix& y, const Hypermatrix& z)
{
    std::vector<int> shape = y.shape();
    shape.insert(shape.end(), z.shape().begin(), z.shape().end());
    Hypermatrix out(shape);
    std::vector<int> idx(shape.size());
    y.for_each_nonzero([&](std::span<const int> iy, const ExactScalar& vy) {
        z.for_each_nonzero([&](std::span<const int> iz, const ExactScalar& vz) {
            std::copy(iy.begin(), iy.end(), idx.begin());
            std::copy(iz.begin(), iz.end(), idx.begin() + static_cast<std::ptrdiff_t>(iy.size()));
            out.set(idx, vy * vz);
        });
    });
    return out;
}

Hypermatrix act_on_leg(const Hypermatrix& x, int leg, const std::vector<std::vector<ExactScalar>>& a)
{
    if (leg < 1 || leg > x.dim())
        throw DomainError("act_on_leg: leg " + std::to_string(leg) + " out of range");
    const int n = x.shape()[leg - 1];
    if (static_cast<int>(a.size()) != n)
        throw DomainError("act_on_leg: matrix size does not match leg dimension");
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != n)
            throw DomainError("act_on_leg: matrix must be square");

    std::map<std::vector<int>, ExactScalar> acc;
    x.for_each_nonzero([&](std::span<const int> idx, const ExactScalar& v) {
        std::vector<int> target(idx.begin(), idx.end());
        const int l = idx[leg - 1];
        for (int i = 1; i <= n; ++i) {
            if (a[i - 1][l - 1] == 0)
                continue;
            target[leg - 1] = i;
            acc[target] += a[i - 1][l - 1] * v;
        }
    });
    Hypermatrix out(x.shape());
    for (const auto& [idx, v] : acc)
        out.set(idx, v);
    return out;
}

} // namespace tinv
