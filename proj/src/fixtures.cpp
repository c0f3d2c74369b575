#include "tinv/fixtures.hpp"

#include "tinv/errors.hpp"
#include "tinv/latin.hpp"

#include <algorithm>

namespace tinv {

namespace detail {
extern const char* const fixture_texts[];
extern const unsigned fixture_count;
} // namespace detail

namespace {

std::string string_field(const Json& j, const char* name, const std::string& where)
{
    auto it = j.find(name);
    if (it == j.end())
        throw DomainError(where + ": missing field '" + name + "'");
    if (!it->is_string())
        throw DomainError(where + ": field '" + name + "' must be a string");
    return it->get<std::string>();
}

int int_field(const Json& j, const char* name, const std::string& where, bool required = true)
{
    auto it = j.find(name);
    if (it == j.end()) {
        if (required)
            throw DomainError(where + ": missing field '" + name + "'");
        return 0;
    }
    if (!it->is_number_integer())
        throw DomainError(where + ": field '" + name + "' must be an integer");
    return it->get<int>();
}

const std::vector<std::string> kinds = {"g_rect", "delta_ratio", "alon_tarsi", "magic_count"};

} // namespace

Fixture fixture_from_json(const Json& j)
{
    if (!j.is_object())
        throw DomainError("fixture must be a JSON object");
    Fixture f;
    f.name = string_field(j, "name", "fixture");
    const std::string where = "fixture '" + f.name + "'";
    f.title = string_field(j, "title", where);
    f.kind = string_field(j, "kind", where);
    if (std::find(kinds.begin(), kinds.end(), f.kind) == kinds.end())
        throw DomainError(where + ": unknown kind '" + f.kind + "'");
    f.budget = int_field(j, "budget", where);
    if (j.contains("method"))
        f.method = string_field(j, "method", where);
    auto cells = j.find("cells");
    if (cells == j.end() || !cells->is_array())
        throw DomainError(where + ": field 'cells' must be an array");
    for (std::size_t i = 0; i < cells->size(); ++i) {
        const Json& c = (*cells)[i];
        const std::string at = where + " cells[" + std::to_string(i) + "]";
        FixtureCell cell;
        cell.d = int_field(c, "d", at);
        cell.n = int_field(c, "n", at, f.kind != "alon_tarsi");
        cell.k = int_field(c, "k", at, f.kind != "delta_ratio");
        cell.expected = string_field(c, "expected", at);
        cell.provenance = string_field(c, "provenance", at);
        if (cell.provenance != "table" && cell.provenance != "derived")
            throw DomainError(at + ": provenance must be 'table' or 'derived'");
        cell.source = string_field(c, "source", at);
        parse_bigint(cell.expected);
        f.cells.push_back(std::move(cell));
    }
    return f;
}

const std::vector<Fixture>& builtin_fixtures()
{
    static const std::vector<Fixture> all = [] {
        std::vector<Fixture> v;
        for (unsigned i = 0; i < detail::fixture_count; ++i)
            v.push_back(fixture_from_json(parse_json_text(detail::fixture_texts[i], "embedded fixture")));
        std::sort(v.begin(), v.end(), [](const Fixture& a, const Fixture& b) { return a.name < b.name; });
        return v;
    }();
    return all;
}

const Fixture& find_fixture(const std::string& name)
{
    for (const auto& f : builtin_fixtures())
        if (f.name == name)
            return f;
    throw DomainError("no fixture named '" + name + "'");
}

int FixtureReport::count(CellStatus s) const
{
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [&](const CellOutcome& c) { return c.status == s; }));
}

const char* status_name(CellStatus s)
{
    switch (s) {
    case CellStatus::pass:
        return "pass";
    case CellStatus::fail:
        return "FAIL";
    case CellStatus::skipped:
        return "not reproduced";
    }
    return "?";
}

namespace {

// Returns nullopt when the cell lies outside the budget.
std::optional<BigInt> evaluate(const Fixture& f, const FixtureCell& c, int budget, const std::string& method,
                               const FixtureRunOptions& opts)
{
    KronOptions kron = opts.kron;
    kron.threads = opts.threads;
    if (budget > 0)
        kron.max_partition_size = budget;

    if (f.kind == "g_rect") {
        if (static_cast<long long>(c.n) * c.k > kron.max_partition_size)
            return std::nullopt;
        if (method == "char")
            return g_rect(c.d, c.n, c.k, kron);
        if (method == "kernel")
            return g_rect_kernel(c.d, c.n, c.k, kron);
        if (method == "recursive")
            return g_recursive(c.d, c.n, c.k, kron);
        throw DomainError("unknown method '" + method + "'");
    }
    if (f.kind == "delta_ratio") {
        const DegreeResult r = delta_degree(c.d, c.n, kron);
        if (!r.conclusive)
            return std::nullopt;
        return BigInt(static_cast<long>(r.degree / c.n));
    }
    LatinOptions lopts;
    lopts.threads = opts.threads;
    if (f.kind == "alon_tarsi")
        return alon_tarsi(full_cube(c.d, c.k), lopts);
    return BigInt(static_cast<unsigned long>(count_magic_sets(c.d, c.k, c.n)));
}

} // namespace

FixtureReport run_fixture(const Fixture& f, const FixtureRunOptions& opts)
{
    const int budget = opts.budget.value_or(f.budget);
    const std::string method = opts.method.value_or(f.method);
    FixtureReport report;
    report.name = f.name;
    for (const auto& c : f.cells) {
        CellOutcome out;
        out.cell = c;
        try {
            if (auto v = evaluate(f, c, budget, method, opts)) {
                out.actual = to_decimal(*v);
                out.status = out.actual == c.expected ? CellStatus::pass : CellStatus::fail;
                if (out.status == CellStatus::fail)
                    out.note = "expected " + c.expected + ", computed " + out.actual;
            } else {
                out.note = "not reproduced: outside the budget of " + std::to_string(budget);
            }
        } catch (const ResourceError& e) {
            out.status = CellStatus::skipped;
            out.note = std::string("not reproduced: ") + e.what();
        }
        report.cells.push_back(std::move(out));
    }
    return report;
}

} // namespace tinv
