#include "tinv/partition.hpp"

#include "tinv/errors.hpp"

#include <algorithm>
#include <numeric>

namespace tinv {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts))
{
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0)
            throw DomainError("partition parts must be positive: " + to_string());
        if (i > 0 && parts_[i] > parts_[i - 1])
            throw DomainError("partition parts must be weakly decreasing: " + to_string());
    }
    size_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

Partition Partition::from_parts_trimmed(std::vector<int> parts)
{
    std::erase(parts, 0);
    return Partition(std::move(parts));
}

Partition Partition::rectangle(int rows, int cols)
{
    if (rows < 0 || cols < 0)
        throw DomainError("rectangle dimensions must be nonnegative");
    if (rows == 0 || cols == 0)
        return Partition();
    return Partition(std::vector<int>(rows, cols));
}

Partition Partition::conjugate() const
{
    std::vector<int> out(width(), 0);
    for (int p : parts_)
        for (int j = 0; j < p; ++j)
            ++out[j];
    return Partition(std::move(out));
}

bool Partition::fits_in(int rows, int cols) const { return length() <= rows && width() <= cols; }

Partition Partition::complement_in(int rows, int cols) const
{
    if (!fits_in(rows, cols))
        throw DomainError("partition " + to_string() + " does not fit in " + std::to_string(rows) +
                          "x" + std::to_string(cols));
    std::vector<int> out;
    out.reserve(rows);
    for (int i = rows - 1; i >= 0; --i)
        out.push_back(cols - part(i));
    return from_parts_trimmed(std::move(out));
}

bool Partition::contains(const Partition& other) const
{
    if (other.length() > length())
        return false;
    for (int i = 0; i < other.length(); ++i)
        if (other.parts_[i] > parts_[i])
            return false;
    return true;
}

std::string Partition::to_string() const
{
    std::string s = "(";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(parts_[i]);
    }
    return s + ")";
}

Partition operator+(const Partition& a, const Partition& b)
{
    const int len = std::max(a.length(), b.length());
    std::vector<int> out(len);
    for (int i = 0; i < len; ++i)
        out[i] = a.part(i) + b.part(i);
    return Partition(std::move(out));
}

int intersection_size(const Partition& a, const Partition& b)
{
    int s = 0;
    for (int i = 0; i < std::min(a.length(), b.length()); ++i)
        s += std::min(a.part(i), b.part(i));
    return s;
}

namespace {

void generate(int remaining, int max_part, int max_len, std::vector<int>& cur,
              std::vector<Partition>& out)
{
    if (remaining == 0) {
        out.emplace_back(cur);
        return;
    }
    if (max_len == 0)
        return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
        // the remaining parts can hold at most p * (max_len - 1)
        if (static_cast<long>(p) * max_len < remaining)
            break;
        cur.push_back(p);
        generate(remaining - p, p, max_len - 1, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<Partition> partitions_of(int m)
{
    if (m < 0)
        throw DomainError("partitions_of: negative size");
    return partitions_in_box(m, m, m);
}

std::vector<Partition> partitions_in_box(int m, int rows, int cols)
{
    std::vector<Partition> out;
    if (m < 0 || rows < 0 || cols < 0)
        return out;
    std::vector<int> cur;
    generate(m, cols, rows, cur, out);
    return out;
}

} // namespace tinv
