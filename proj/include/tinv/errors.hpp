#pragma once

#include <stdexcept>
#include <string>

namespace tinv {

// Invalid input: bad shape, out-of-range index, malformed file.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A configured work budget was exhausted before the answer was complete.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An internal invariant failed (e.g. a character sum that should divide exactly did not).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace tinv
