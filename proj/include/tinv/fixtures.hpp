#pragma once

#include "tinv/json_io.hpp"
#include "tinv/kronecker.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tinv {

// One expected value. `source` names the table cell or oracle it came from.
struct FixtureCell {
    int d = 0;
    int n = 0;
    int k = 0;
    std::string expected;
    std::string provenance;  // "table" or "derived"
    std::string source;
};

// kind is one of g_rect, delta_ratio, alon_tarsi, magic_count.
// budget caps the partition size for the Kronecker kinds; 0 means no cap.
struct Fixture {
    std::string name;
    std::string title;
    std::string kind;
    int budget = 0;
    std::string method = "char";
    std::vector<FixtureCell> cells;
};

Fixture fixture_from_json(const Json& j);

/// The fixtures compiled into the binary, sorted by name.
const std::vector<Fixture>& builtin_fixtures();
const Fixture& find_fixture(const std::string& name);

enum class CellStatus { pass, fail, skipped };

struct CellOutcome {
    FixtureCell cell;
    CellStatus status = CellStatus::skipped;
    std::string actual;
    std::string note;
};

struct FixtureReport {
    std::string name;
    std::vector<CellOutcome> cells;

    int count(CellStatus s) const;
    bool ok() const { return count(CellStatus::fail) == 0; }
};

struct FixtureRunOptions {
    std::optional<int> budget;           // overrides the fixture's own budget
    std::optional<std::string> method;   // overrides the fixture's g_rect method
    KronOptions kron;
    int threads = 1;
};

/// Recomputes every cell within budget and compares exactly. Cells beyond the
/// budget are reported as skipped with the note "not reproduced".
FixtureReport run_fixture(const Fixture& f, const FixtureRunOptions& opts = {});

const char* status_name(CellStatus s);

} // namespace tinv
