#pragma once

#include <cstdint>
#include <span>

namespace tinv {

// Sign of (a_1..a_n) as a permutation of [n] (1-based values), 0 if a value repeats.
// Throws DomainError when an entry lies outside [1, n].
int sign_of_sequence(std::span<const int> a);

// (-1)^inv(a), inv counting pairs i < j with a_i > a_j. Defined for any integer sequence.
int multi_sign(std::span<const int> a);

std::int64_t inversions(std::span<const int> a);

} // namespace tinv
