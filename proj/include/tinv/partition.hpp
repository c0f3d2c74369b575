#pragma once

#include <compare>
#include <string>
#include <vector>

namespace tinv {

/// Integer partition: a weakly decreasing sequence of positive parts.
///
/// Rectangles follow the "a x b" convention: a rows of length b, i.e. the
/// partition (b, ..., b) with a parts.
class Partition {
public:
    Partition() = default;
    /// Throws DomainError unless parts are positive and weakly decreasing.
    explicit Partition(std::vector<int> parts);

    /// Drops zero parts, then validates.
    static Partition from_parts_trimmed(std::vector<int> parts);
    static Partition rectangle(int rows, int cols);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const { return size_; }
    bool empty() const { return parts_.empty(); }
    /// i-th part (0-based), 0 past the end.
    int part(int i) const { return i < length() ? parts_[i] : 0; }
    int width() const { return parts_.empty() ? 0 : parts_.front(); }

    Partition conjugate() const;
    bool fits_in(int rows, int cols) const;
    /// (cols - lambda_rows, ..., cols - lambda_1) inside the rows x cols box.
    Partition complement_in(int rows, int cols) const;
    bool contains(const Partition& other) const;

    std::string to_string() const;

    friend auto operator<=>(const Partition&, const Partition&) = default;
    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
    int size_ = 0;
};

/// Componentwise sum lambda + mu (shorter one padded with zeros).
Partition operator+(const Partition& a, const Partition& b);

/// |a ∩ b| = sum_i min(a_i, b_i).
int intersection_size(const Partition& a, const Partition& b);

/// All partitions of m in reverse lexicographic order: (m), (m-1,1), ..., (1^m).
std::vector<Partition> partitions_of(int m);

/// Partitions of m that fit in a rows x cols box.
std::vector<Partition> partitions_in_box(int m, int rows, int cols);

} // namespace tinv
