#include "tinv/json_io.hpp"

#include "tinv/errors.hpp"

#include <fstream>
#include <sstream>

namespace tinv {

Json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DomainError(origin + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

namespace {

const Json& field(const Json& j, const char* name)
{
    if (!j.is_object())
        throw DomainError(std::string("expected a JSON object holding field '") + name + "'");
    auto it = j.find(name);
    if (it == j.end())
        throw DomainError(std::string("missing field '") + name + "'");
    return *it;
}

int int_of(const Json& j, const std::string& where)
{
    if (!j.is_number_integer())
        throw DomainError("field '" + where + "' must be an integer");
    const auto v = j.get<long long>();
    if (v < -2147483647LL || v > 2147483647LL)
        throw DomainError("field '" + where + "' is out of range");
    return static_cast<int>(v);
}

std::vector<int> ints_of(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw DomainError("field '" + where + "' must be an array of integers");
    std::vector<int> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(int_of(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::string bigint_text(const Json& j, const std::string& where)
{
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    if (!j.is_string())
        throw DomainError("field '" + where + "' must be a decimal string");
    return j.get<std::string>();
}

std::vector<Cell> cells_of(const Json& j)
{
    if (!j.is_array())
        throw DomainError("field 'cells' must be an array of coordinate lists");
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < j.size(); ++i)
        cells.push_back(Cell{ints_of(j[i], "cells[" + std::to_string(i) + "]")});
    return cells;
}

Json cells_json(const std::vector<Cell>& cells)
{
    Json a = Json::array();
    for (const auto& c : cells)
        a.push_back(c.coords);
    return a;
}

} // namespace

Json to_json(const BalancedTable& t) { return Json{{"shape", t.shape}, {"rows", t.rows}}; }

BalancedTable table_from_json(const Json& j)
{
    BalancedTable t;
    t.shape = ints_of(field(j, "shape"), "shape");
    const Json& rows = field(j, "rows");
    if (!rows.is_array())
        throw DomainError("field 'rows' must be an array of rows");
    for (std::size_t i = 0; i < rows.size(); ++i)
        t.rows.push_back(ints_of(rows[i], "rows[" + std::to_string(i) + "]"));
    if (auto check = validate_balanced(t); !check)
        throw DomainError("field 'rows': " + check.message);
    return t;
}

Json to_json(const Hypermatrix& x)
{
    Json entries = Json::array();
    x.for_each_nonzero([&](std::span<const int> idx, const ExactScalar& v) {
        entries.push_back({{"idx", std::vector<int>(idx.begin(), idx.end())},
                           {"num", to_decimal(v.get_num())},
                           {"den", to_decimal(v.get_den())}});
    });
    return Json{{"shape", x.shape()}, {"entries", entries}};
}

Hypermatrix hypermatrix_from_json(const Json& j)
{
    Hypermatrix x(ints_of(field(j, "shape"), "shape"));
    const Json& entries = field(j, "entries");
    if (!entries.is_array())
        throw DomainError("field 'entries' must be an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string where = "entries[" + std::to_string(i) + "]";
        const Json& e = entries[i];
        const auto idx = ints_of(field(e, "idx"), where + ".idx");
        const std::string num = bigint_text(field(e, "num"), where + ".num");
        const std::string den = e.contains("den") ? bigint_text(e["den"], where + ".den") : "1";
        try {
            x.set(idx, x.at(idx) + make_scalar(num, den));
        } catch (const DomainError& err) {
            throw DomainError("field '" + where + "': " + err.what());
        }
    }
    return x;
}

Json to_json(const MagicSet& m) { return Json{{"k", m.k}, {"d", m.d}, {"cells", cells_json(m.cells)}}; }

MagicSet magic_set_from_json(const Json& j)
{
    const int k = int_of(field(j, "k"), "k");
    const int d = int_of(field(j, "d"), "d");
    try {
        return make_magic_set(d, k, cells_of(field(j, "cells")));
    } catch (const DomainError& err) {
        throw DomainError(std::string("field 'cells': ") + err.what());
    }
}

Json to_json(const PartialLatinHypercube& c)
{
    Json j = to_json(c.type);
    j["values"] = c.values;
    return j;
}

PartialLatinHypercube hypercube_from_json(const Json& j)
{
    const int k = int_of(field(j, "k"), "k");
    const int d = int_of(field(j, "d"), "d");
    auto cells = cells_of(field(j, "cells"));
    auto values = ints_of(field(j, "values"), "values");
    if (values.size() != cells.size())
        throw DomainError("field 'values' must have one entry per cell");
    // the magic set is sorted; carry each value along with its cell
    std::vector<std::pair<Cell, int>> paired;
    for (std::size_t i = 0; i < cells.size(); ++i)
        paired.emplace_back(cells[i], values[i]);
    std::sort(paired.begin(), paired.end());
    cells.clear();
    values.clear();
    for (auto& [c, v] : paired) {
        cells.push_back(c);
        values.push_back(v);
    }
    try {
        return make_partial_latin(make_magic_set(d, k, std::move(cells)), std::move(values));
    } catch (const DomainError& err) {
        throw DomainError(std::string("field 'values': ") + err.what());
    }
}

Json term_to_json(const WedgeVector& v, const BasisIndex& p, const BigInt& coeff)
{
    CellSpace space(v.d, v.k);
    Json cells = Json::array();
    for (CellIndex c : p)
        cells.push_back(space.cell_of(c).coords);
    return Json{{"cells", cells}, {"coeff", to_decimal(coeff)}};
}

} // namespace tinv
