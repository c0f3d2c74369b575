#include "tinv/cli.hpp"

#include "tinv/delta.hpp"
#include "tinv/errors.hpp"
#include "tinv/exterior.hpp"
#include "tinv/fixtures.hpp"
#include "tinv/json_io.hpp"
#include "tinv/kronecker.hpp"
#include "tinv/latin.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <memory>
#include <ostream>
#include <sstream>

namespace tinv::cli {

Environment process_environment()
{
    Environment env;
    for (const char* name : {"TI_CACHE_PATH", "TI_MAX_PARTITION_SIZE", "TI_THREADS"})
        if (const char* v = std::getenv(name))
            env[name] = v;
    return env;
}

namespace {

struct Report {
    Json doc = Json::object();
    std::string plain;
    std::vector<Json> records;  // one JSON line / CSV row each
    int status = 0;
};

Format parse_format(const std::string& s)
{
    if (s == "plain")
        return Format::plain;
    if (s == "json")
        return Format::json;
    if (s == "csv")
        return Format::csv;
    throw DomainError("unknown output format '" + s + "' (plain, json or csv)");
}

long long positive_from_text(const std::string& text, const std::string& what)
{
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty() || v <= 0)
        throw DomainError(what + " must be a positive integer, got '" + text + "'");
    return v;
}

long long positive_from_json(const Json& j, const std::string& key)
{
    if (!j.is_number_integer() || j.get<long long>() <= 0)
        throw DomainError("config field '" + key + "' must be a positive integer");
    return j.get<long long>();
}

void apply_config_file(RunConfig& cfg, const std::string& path)
{
    const Json j = read_json_file(path);
    if (!j.is_object())
        throw DomainError(path + ": config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "max_partition_size")
            cfg.max_partition_size = static_cast<int>(positive_from_json(value, key));
        else if (key == "max_basis")
            cfg.max_basis = static_cast<std::uint64_t>(positive_from_json(value, key));
        else if (key == "max_nodes")
            cfg.max_nodes = static_cast<std::uint64_t>(positive_from_json(value, key));
        else if (key == "threads")
            cfg.threads = static_cast<int>(positive_from_json(value, key));
        else if (key == "cache_path" || key == "format") {
            if (!value.is_string())
                throw DomainError("config field '" + key + "' must be a string");
            if (key == "format")
                cfg.format = parse_format(value.get<std::string>());
            else
                cfg.cache_path = value.get<std::string>();
        } else if (key == "allow_large") {
            if (!value.is_boolean())
                throw DomainError("config field 'allow_large' must be true or false");
            cfg.allow_large = value.get<bool>();
        } else {
            throw DomainError(path + ": unknown config field '" + key + "'");
        }
    }
}

void apply_environment(RunConfig& cfg, const Environment& env)
{
    if (auto it = env.find("TI_CACHE_PATH"); it != env.end())
        cfg.cache_path = it->second;
    if (auto it = env.find("TI_MAX_PARTITION_SIZE"); it != env.end())
        cfg.max_partition_size = static_cast<int>(positive_from_text(it->second, "TI_MAX_PARTITION_SIZE"));
    if (auto it = env.find("TI_THREADS"); it != env.end())
        cfg.threads = static_cast<int>(positive_from_text(it->second, "TI_THREADS"));
}

struct Context {
    RunConfig cfg;
    std::unique_ptr<CoefficientCache> cache;

    KronOptions kron() const
    {
        KronOptions o;
        o.max_partition_size = cfg.max_partition_size;
        o.max_basis = cfg.max_basis;
        o.threads = cfg.threads;
        o.cache = cache.get();
        return o;
    }
    DeltaOptions delta() const { return DeltaOptions{cfg.threads, cfg.max_nodes}; }
    LatinOptions latin() const { return LatinOptions{cfg.threads, cfg.max_nodes}; }
};

std::string csv_field(const Json& v)
{
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

void write_csv(std::ostream& out, const std::vector<Json>& rows)
{
    std::vector<std::string> header;
    for (const auto& r : rows)
        for (const auto& [key, value] : r.items())
            if (std::find(header.begin(), header.end(), key) == header.end())
                header.push_back(key);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << csv_field(Json(header[i]));
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "");
            if (r.contains(header[i]))
                out << csv_field(r[header[i]]);
        }
        out << '\n';
    }
}

void emit(const Report& r, Format format, std::ostream& out)
{
    Json doc = r.doc;
    doc["schema"] = 1;
    switch (format) {
    case Format::plain:
        out << r.plain;
        if (!r.plain.empty() && r.plain.back() != '\n')
            out << '\n';
        break;
    case Format::json:
        for (const auto& rec : r.records)
            out << rec.dump() << '\n';
        out << doc.dump() << '\n';
        break;
    case Format::csv:
        if (r.records.empty()) {
            write_csv(out, {doc});
        } else {
            std::vector<Json> rows;
            for (auto rec : r.records) {
                rec["schema"] = 1;
                rows.push_back(std::move(rec));
            }
            write_csv(out, rows);
        }
        break;
    }
}

std::string join(const std::vector<int>& v, const char* sep = " ")
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

std::string table_text(const BalancedTable& t)
{
    std::string s;
    for (const auto& row : t.rows)
        s += join(row) + "\n";
    return s;
}

Report scalar_report(const std::string& command, const std::string& value)
{
    Report r;
    r.doc = Json{{"command", command}, {"value", value}};
    r.plain = value;
    return r;
}

Report table_report(const std::string& command, const BalancedTable& t)
{
    Report r;
    r.doc = to_json(t);
    r.doc["command"] = command;
    r.plain = table_text(t);
    return r;
}

std::vector<Partition> parse_parts(const std::string& text)
{
    const Json j = parse_json_text(text, "--parts");
    if (!j.is_array())
        throw DomainError("--parts must be a JSON array of partitions");
    std::vector<Partition> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "--parts[" + std::to_string(i) + "]";
        if (!j[i].is_array())
            throw DomainError(where + " must be an array of positive integers");
        std::vector<int> parts;
        for (const auto& x : j[i]) {
            if (!x.is_number_integer())
                throw DomainError(where + " must be an array of positive integers");
            parts.push_back(x.get<int>());
        }
        try {
            out.emplace_back(std::move(parts));
        } catch (const DomainError& e) {
            throw DomainError(where + ": " + e.what());
        }
    }
    return out;
}

WedgeVector wedge_from_json(const Json& j)
{
    const auto int_field = [&](const char* name) {
        if (!j.is_object() || !j.contains(name) || !j[name].is_number_integer())
            throw DomainError(std::string("field '") + name + "' must be an integer");
        return j[name].get<int>();
    };
    const int d = int_field("d");
    const int k = int_field("k");
    if (!j.contains("terms") || !j["terms"].is_array())
        throw DomainError("field 'terms' must be an array");
    std::optional<WedgeVector> sum;
    const CellSpace space(d, k);
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        const std::string where = "terms[" + std::to_string(i) + "]";
        const Json& t = j["terms"][i];
        if (!t.is_object() || !t.contains("cells") || !t["cells"].is_array())
            throw DomainError("field '" + where + ".cells' must be an array of coordinate lists");
        std::vector<Cell> cells;
        for (const auto& c : t["cells"]) {
            if (!c.is_array())
                throw DomainError("field '" + where + ".cells' must be an array of coordinate lists");
            Cell cell;
            for (const auto& x : c) {
                if (!x.is_number_integer())
                    throw DomainError("field '" + where + ".cells' must hold integers");
                cell.coords.push_back(x.get<int>());
            }
            if (!space.contains(cell))
                throw DomainError("field '" + where + ".cells' has a cell outside the box");
            cells.push_back(std::move(cell));
        }
        if (!t.contains("coeff") || !(t["coeff"].is_string() || t["coeff"].is_number_integer()))
            throw DomainError("field '" + where + ".coeff' must be a decimal string");
        BigInt c;
        try {
            c = t["coeff"].is_string() ? parse_bigint(t["coeff"].get<std::string>())
                                       : BigInt(static_cast<long>(t["coeff"].get<long long>()));
        } catch (const DomainError& e) {
            throw DomainError("field '" + where + ".coeff': " + e.what());
        }
        WedgeVector term = wedge_of_cells(d, k, cells, c);
        if (sum && static_cast<int>(cells.size()) != sum->grade)
            throw DomainError("field '" + where + ".cells' has a different grade from the first term");
        sum = sum ? *sum + term : term;
    }
    if (!sum)
        throw DomainError("field 'terms' must not be empty");
    return *sum;
}

std::string cell_label(const Fixture& f, const FixtureCell& c)
{
    std::string s = "d=" + std::to_string(c.d);
    if (f.kind != "alon_tarsi")
        s += " n=" + std::to_string(c.n);
    if (f.kind != "delta_ratio")
        s += " k=" + std::to_string(c.k);
    return s;
}

Report fixture_report(const std::vector<const Fixture*>& list, const FixtureRunOptions& opts)
{
    Report r;
    std::ostringstream plain;
    Json summary = Json::array();
    bool failed = false;
    for (const Fixture* f : list) {
        const FixtureReport rep = run_fixture(*f, opts);
        plain << f->name << ": " << f->title << '\n';
        for (const auto& o : rep.cells) {
            const FixtureCell& c = o.cell;
            Json rec{{"fixture", f->name}, {"d", c.d}, {"expected", c.expected}, {"status", status_name(o.status)},
                     {"provenance", c.provenance}, {"source", c.source}};
            if (f->kind != "alon_tarsi")
                rec["n"] = c.n;
            if (f->kind != "delta_ratio")
                rec["k"] = c.k;
            if (!o.actual.empty())
                rec["computed"] = o.actual;
            r.records.push_back(rec);
            plain << "  " << cell_label(*f, c) << "  expected " << c.expected;
            if (!o.actual.empty())
                plain << "  computed " << o.actual;
            plain << "  " << status_name(o.status) << "  [" << c.source << "]\n";
            if (o.status == CellStatus::fail)
                plain << "  - " << c.expected << "\n  + " << o.actual << '\n';
        }
        const int p = rep.count(CellStatus::pass), x = rep.count(CellStatus::fail), s = rep.count(CellStatus::skipped);
        plain << "  " << p << " passed, " << x << " failed, " << s << " not reproduced\n";
        summary.push_back({{"fixture", f->name}, {"passed", p}, {"failed", x}, {"not_reproduced", s}});
        failed = failed || x > 0;
    }
    r.doc = Json{{"command", "fixtures run"}, {"fixtures", summary}, {"ok", !failed}};
    r.plain = plain.str();
    r.status = failed ? 3 : 0;
    return r;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env)
{
    CLI::App app{"tensor invariants, Latin hypercubes and Kronecker coefficients", "tinv"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string format_flag, cache_flag, config_flag;
    int max_partition_flag = 0, threads_flag = 0;
    std::uint64_t max_basis_flag = 0, max_nodes_flag = 0;
    auto* o_format = app.add_option("--format", format_flag, "plain, json or csv");
    auto* o_cache = app.add_option("--cache", cache_flag, "coefficient cache file (JSON lines)");
    app.add_option("--config", config_flag, "JSON config file");
    auto* o_mps = app.add_option("--max-partition-size", max_partition_flag, "largest partition size for characters");
    auto* o_basis = app.add_option("--max-basis", max_basis_flag, "largest weight-space basis");
    auto* o_nodes = app.add_option("--max-nodes", max_nodes_flag, "search node budget");
    auto* o_threads = app.add_option("--threads", threads_flag, "worker threads");

    // shared argument slots; each subcommand binds the ones it uses
    std::string table_path, tensor_path, left_path, right_path, type_path, cube_path, vector_path;
    std::string checkpoint_path, parts_text, method = "char", fixture_name;
    std::vector<std::string> fixture_names;
    int d = 0, k = 0, n = 0, budget = 0;
    bool reduced = false, vertical = false, allow_large = false, count_only = false;
    bool check_hwv = false, expand = false;

    auto* delta = app.add_subcommand("delta", "Delta invariants of balanced tables")->require_subcommand(1);
    auto* delta_eval_cmd = delta->add_subcommand("eval", "evaluate Delta_T at a tensor");
    delta_eval_cmd->add_option("--table", table_path)->required();
    delta_eval_cmd->add_option("--tensor", tensor_path)->required();
    auto* delta_unit_cmd = delta->add_subcommand("eval-unit", "evaluate Delta_T at the unit tensor");
    delta_unit_cmd->add_option("--table", table_path)->required();
    delta_unit_cmd->add_option("-n", n)->required();
    auto* delta_fund_cmd = delta->add_subcommand("fundamental", "the table of all cells of [k]^d");
    delta_fund_cmd->add_option("-d", d)->required();
    delta_fund_cmd->add_option("-k", k)->required();
    delta_fund_cmd->add_flag("--reduced", reduced, "drop the constant columns");
    auto* delta_concat_cmd = delta->add_subcommand("concat", "concatenate two tables");
    delta_concat_cmd->add_option("--left", left_path)->required();
    delta_concat_cmd->add_option("--right", right_path)->required();
    delta_concat_cmd->add_flag("--vertical", vertical, "stack rows instead of columns");

    auto* latin = app.add_subcommand("latin", "Latin hypercubes and Alon-Tarsi numbers")->require_subcommand(1);
    auto* latin_count_cmd = latin->add_subcommand("count", "count and signed sum of hypercubes of a type");
    latin_count_cmd->add_option("--type", type_path)->required();
    auto* latin_at_cmd = latin->add_subcommand("at", "Alon-Tarsi number");
    latin_at_cmd->add_option("-d", d);
    latin_at_cmd->add_option("-k", k);
    latin_at_cmd->add_option("--type", type_path);
    latin_at_cmd->add_option("--checkpoint", checkpoint_path, "resumable progress file");
    latin_at_cmd->add_flag("--allow-large", allow_large, "permit full cubes beyond 27 cells");
    auto* latin_signs_cmd = latin->add_subcommand("signs", "the sign statistics of a hypercube");
    latin_signs_cmd->add_option("--cube", cube_path)->required();
    auto* latin_magic_cmd = latin->add_subcommand("magic-sets", "list the magic sets of [k]^d with marginal n");
    latin_magic_cmd->add_option("-d", d)->required();
    latin_magic_cmd->add_option("-k", k)->required();
    latin_magic_cmd->add_option("-n", n)->required();
    latin_magic_cmd->add_flag("--count", count_only, "print only the number");

    auto* hwv = app.add_subcommand("hwv", "wedge powers and highest weight vectors")->require_subcommand(1);
    auto* hwv_omega_cmd = hwv->add_subcommand("omega", "the n-th wedge power of omega");
    hwv_omega_cmd->add_option("-d", d)->required();
    hwv_omega_cmd->add_option("-k", k)->required();
    hwv_omega_cmd->add_option("-n", n)->required();
    hwv_omega_cmd->add_flag("--check-hwv", check_hwv, "test the raising operators");
    hwv_omega_cmd->add_flag("--expand", expand, "print every term");
    auto* hwv_check_cmd = hwv->add_subcommand("check", "test a vector for highest weight");
    hwv_check_cmd->add_option("--vector", vector_path)->required();

    auto* kron = app.add_subcommand("kron", "Kronecker coefficients")->require_subcommand(1);
    auto* kron_g_cmd = kron->add_subcommand("g", "coefficient of a list of partitions");
    kron_g_cmd->add_option("--parts", parts_text, "JSON list of partitions")->required();
    auto* kron_rect_cmd = kron->add_subcommand("rect", "g_d(n,k) for n x k rectangles");
    kron_rect_cmd->add_option("-d", d)->required();
    kron_rect_cmd->add_option("-n", n)->required();
    kron_rect_cmd->add_option("-k", k)->required();
    kron_rect_cmd->add_option("--method", method)->check(CLI::IsMember({"char", "kernel", "recursive"}));
    auto* kron_degree_cmd = kron->add_subcommand("degree", "smallest degree of a nonzero invariant");
    kron_degree_cmd->add_option("-d", d)->required();
    kron_degree_cmd->add_option("-n", n)->required();
    auto* kron_table_cmd = kron->add_subcommand("table", "reproduce a stored table");
    kron_table_cmd->add_option("--fixture", fixture_name)->required();
    kron_table_cmd->add_option("--budget", budget, "partition size cap");

    auto* fixtures = app.add_subcommand("fixtures", "stored golden values")->require_subcommand(1);
    auto* fixtures_list_cmd = fixtures->add_subcommand("list", "list the fixtures");
    auto* fixtures_run_cmd = fixtures->add_subcommand("run", "recompute fixtures and compare");
    fixtures_run_cmd->add_option("names", fixture_names, "fixture names (default: all)");
    auto* o_budget = fixtures_run_cmd->add_option("--budget", budget, "partition size cap");
    auto* o_method = fixtures_run_cmd->add_option("--method", method)->check(CLI::IsMember({"char", "kernel", "recursive"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    Context ctx;
    Format format = Format::plain;
    try {
        if (!config_flag.empty())
            apply_config_file(ctx.cfg, config_flag);
        apply_environment(ctx.cfg, env);
        if (o_format->count())
            ctx.cfg.format = parse_format(format_flag);
        if (o_cache->count())
            ctx.cfg.cache_path = cache_flag;
        if (o_mps->count())
            ctx.cfg.max_partition_size = static_cast<int>(positive_from_text(std::to_string(max_partition_flag), "--max-partition-size"));
        if (o_basis->count())
            ctx.cfg.max_basis = static_cast<std::uint64_t>(positive_from_text(std::to_string(max_basis_flag), "--max-basis"));
        if (o_nodes->count())
            ctx.cfg.max_nodes = static_cast<std::uint64_t>(positive_from_text(std::to_string(max_nodes_flag), "--max-nodes"));
        if (o_threads->count())
            ctx.cfg.threads = static_cast<int>(positive_from_text(std::to_string(threads_flag), "--threads"));
        ctx.cfg.allow_large = ctx.cfg.allow_large || allow_large;
        format = ctx.cfg.format;
        if (!ctx.cfg.cache_path.empty())
            ctx.cache = std::make_unique<CoefficientCache>(ctx.cfg.cache_path);

        Report r;
        if (delta_eval_cmd->parsed()) {
            const auto t = table_from_json(read_json_file(table_path));
            const auto x = hypermatrix_from_json(read_json_file(tensor_path));
            r = scalar_report("delta eval", delta_eval(t, x, ctx.delta()).get_str());
        } else if (delta_unit_cmd->parsed()) {
            const auto t = table_from_json(read_json_file(table_path));
            r = scalar_report("delta eval-unit", to_decimal(delta_eval_unit(t, n, ctx.delta())));
        } else if (delta_fund_cmd->parsed()) {
            r = table_report("delta fundamental", reduced ? fundamental_table_reduced(d, k) : fundamental_table(d, k));
        } else if (delta_concat_cmd->parsed()) {
            const auto a = table_from_json(read_json_file(left_path));
            const auto b = table_from_json(read_json_file(right_path));
            r = table_report("delta concat", vertical ? vconcat(a, b) : hconcat(a, b));
        } else if (latin_count_cmd->parsed()) {
            const MagicSet type = magic_set_from_json(read_json_file(type_path));
            const LatinTally tally = latin_tally(type, ctx.latin());
            r.doc = Json{{"command", "latin count"}, {"count", to_decimal(tally.count)},
                         {"signed_sum", to_decimal(tally.signed_sum)}};
            r.plain = "count " + to_decimal(tally.count) + "\nsigned_sum " + to_decimal(tally.signed_sum);
        } else if (latin_at_cmd->parsed()) {
            MagicSet type;
            if (!type_path.empty()) {
                type = magic_set_from_json(read_json_file(type_path));
            } else {
                if (d < 1 || k < 1)
                    throw DomainError("latin at needs -d and -k (positive) or --type");
                long long cells = 1;
                for (int i = 0; i < d && cells <= 27; ++i)
                    cells *= k;
                if (k >= 3 && cells > 27 && !ctx.cfg.allow_large)
                    throw ResourceError("the full cube [" + std::to_string(k) + "]^" + std::to_string(d) +
                                        " is beyond desk scale; pass --allow-large to try anyway");
                type = full_cube(d, k);
            }
            const BigInt at = checkpoint_path.empty() ? alon_tarsi(type, ctx.latin())
                                                      : alon_tarsi_checkpointed(type, checkpoint_path, ctx.latin());
            r = scalar_report("latin at", to_decimal(at));
        } else if (latin_signs_cmd->parsed()) {
            const auto c = hypercube_from_json(read_json_file(cube_path));
            std::vector<int> dirs;
            for (int l = 1; l <= c.type.d; ++l)
                dirs.push_back(directional_sign(c, l));
            r.doc = Json{{"command", "latin signs"}, {"directional", dirs}, {"full", full_sign(c)},
                         {"symbol", symbol_sign(c)}, {"type", magic_set_sign(c.type)}};
            r.plain = "directional " + join(dirs) + "\nfull " + std::to_string(full_sign(c)) + "\nsymbol " +
                      std::to_string(symbol_sign(c)) + "\ntype " + std::to_string(magic_set_sign(c.type));
        } else if (latin_magic_cmd->parsed()) {
            std::uint64_t count = 0;
            std::string plain;
            enumerate_magic_sets(d, k, n, [&](const MagicSet& m) {
                ++count;
                if (count_only)
                    return true;
                if (count > ctx.cfg.max_basis)
                    throw ResourceError("more than " + std::to_string(ctx.cfg.max_basis) +
                                        " magic sets; use --count or raise --max-basis");
                Json cells = Json::array();
                std::string line;
                for (const auto& c : m.cells) {
                    cells.push_back(c.coords);
                    line += (line.empty() ? "" : " ") + join(c.coords, "");
                }
                r.records.push_back(Json{{"cells", cells}});
                plain += line + "\n";
                return true;
            });
            r.doc = Json{{"command", "latin magic-sets"}, {"d", d}, {"k", k}, {"n", n}, {"count", count}};
            r.plain = plain + "count " + std::to_string(count);
            if (count_only)
                r.plain = std::to_string(count);
        } else if (hwv_omega_cmd->parsed()) {
            if (d < 1 || k < 1)
                throw DomainError("hwv omega needs positive -d and -k");
            BigInt terms = 1;
            for (int i = 1; i < d; ++i)
                terms *= factorial(static_cast<unsigned>(k));
            if (terms > BigInt(static_cast<unsigned long>(ctx.cfg.max_basis)))
                throw ResourceError("omega has " + to_decimal(terms) + " terms, beyond the basis budget");
            const WedgeVector v = wedge_power(d, k, n);
            r.doc = Json{{"command", "hwv omega"}, {"d", d}, {"k", k}, {"n", n}, {"terms", v.terms.size()}, {"zero", v.is_zero()}};
            std::string plain;
            if (expand)
                for (const auto& [p, c] : v.terms) {
                    r.records.push_back(term_to_json(v, p, c));
                    plain += r.records.back().dump() + "\n";
                }
            plain += "terms " + std::to_string(v.terms.size());
            if (check_hwv) {
                const bool h = !v.is_zero() && is_highest_weight(v);
                r.doc["highest_weight"] = h;
                plain += std::string("\nhighest_weight ") + (h ? "true" : "false");
            }
            r.plain = plain;
        } else if (hwv_check_cmd->parsed()) {
            const WedgeVector v = wedge_from_json(read_json_file(vector_path));
            const bool homogeneous = !v.is_zero() && is_weight_homogeneous(v);
            const bool h = homogeneous && is_highest_weight(v);
            r.doc = Json{{"command", "hwv check"}, {"terms", v.terms.size()}, {"weight_homogeneous", homogeneous},
                         {"highest_weight", h}};
            r.plain = std::string("weight_homogeneous ") + (homogeneous ? "true" : "false") + "\nhighest_weight " +
                      (h ? "true" : "false");
        } else if (kron_g_cmd->parsed()) {
            const auto parts = parse_parts(parts_text);
            std::optional<BigInt> g;
            if (ctx.cache)
                g = ctx.cache->get(parts);
            if (!g) {
                g = kronecker_char(parts, ctx.kron());
                if (ctx.cache)
                    ctx.cache->put(parts, *g);
            }
            r = scalar_report("kron g", to_decimal(*g));
        } else if (kron_rect_cmd->parsed()) {
            const BigInt g = method == "kernel"      ? g_rect_kernel(d, n, k, ctx.kron())
                             : method == "recursive" ? g_recursive(d, n, k, ctx.kron())
                                                     : g_rect(d, n, k, ctx.kron());
            r = scalar_report("kron rect", to_decimal(g));
        } else if (kron_degree_cmd->parsed()) {
            const DegreeResult res = delta_degree(d, n, ctx.kron());
            r.doc = Json{{"command", "kron degree"}, {"d", d}, {"n", n}, {"conclusive", res.conclusive},
                         {"checked_up_to", res.checked_up_to}};
            if (res.conclusive) {
                r.doc["degree"] = res.degree;
                r.doc["ratio"] = res.degree / n;
                r.plain = std::to_string(res.degree);
            } else {
                r.doc["note"] = res.note;
                r.plain = "inconclusive: " + res.note;
                r.status = 2;
            }
        } else if (kron_table_cmd->parsed() || fixtures_run_cmd->parsed()) {
            FixtureRunOptions fo;
            fo.kron = ctx.kron();
            fo.threads = ctx.cfg.threads;
            if (budget > 0)
                fo.budget = budget;
            else if (budget < 0 || (o_budget->count() && budget == 0))
                throw DomainError("--budget must be a positive integer");
            if (o_method->count())
                fo.method = method;
            std::vector<const Fixture*> list;
            if (kron_table_cmd->parsed())
                list.push_back(&find_fixture(fixture_name));
            else if (fixture_names.empty())
                for (const auto& f : builtin_fixtures())
                    list.push_back(&f);
            else
                for (const auto& name : fixture_names)
                    list.push_back(&find_fixture(name));
            r = fixture_report(list, fo);
        } else if (fixtures_list_cmd->parsed()) {
            std::ostringstream plain;
            for (const auto& f : builtin_fixtures()) {
                r.records.push_back(Json{{"name", f.name}, {"kind", f.kind}, {"title", f.title},
                                         {"cells", f.cells.size()}, {"budget", f.budget}});
                plain << f.name << "  " << f.kind << "  " << f.cells.size() << " cells  " << f.title << '\n';
            }
            r.doc = Json{{"command", "fixtures list"}, {"count", builtin_fixtures().size()}};
            r.plain = plain.str();
        }
        if (ctx.cache)
            ctx.cache->close();
        emit(r, format, out);
        return r.status;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ResourceError& e) {
        err << "budget exhausted: " << e.what() << '\n';
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace tinv::cli
