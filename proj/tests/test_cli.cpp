#include "tinv/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args, const tinv::cli::Environment& env = {})
{
    std::ostringstream out, err;
    Outcome o;
    o.code = tinv::cli::run(args, out, err, env);
    o.out = out.str();
    o.err = err.str();
    return o;
}

class Scratch {
public:
    Scratch() : dir_(fs::temp_directory_path() / "tinv_cli_test")
    {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) const
    {
        const auto path = (dir_ / name).string();
        std::ofstream(path) << text;
        return path;
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

const char* cayley_table = R"({"shape":[2,2,2],"rows":[[1,1,2,2],[1,1,2,2],[1,2,1,2]]})";
const char* fundamental32 = R"({"shape":[4,4,4],"rows":[[1,1,1,1,2,2,2,2],[1,1,2,2,1,1,2,2],[1,2,1,2,1,2,1,2]]})";

} // namespace

TEST_CASE("computations print their value")
{
    Outcome r = run({"kron", "rect", "-d", "3", "-n", "4", "-k", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "5\n");
    CHECK(run({"kron", "rect", "-d", "3", "-n", "2", "-k", "2", "--method", "kernel"}).out == "1\n");
    CHECK(run({"kron", "rect", "-d", "5", "-n", "3", "-k", "2", "--method", "recursive"}).out == "11\n");
    CHECK(run({"kron", "rect", "-d", "3", "-n", "2", "-k", "2", "--method", "magic"}).code == 1);

    r = run({"latin", "at", "-d", "3", "-k", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "0\n");
    CHECK(run({"latin", "at", "-d", "2", "-k", "2"}).out == "2\n");
    CHECK(run({"latin", "at", "-d", "3", "-k", "2"}).out == "24\n");
    CHECK(run({"latin", "magic-sets", "-d", "3", "-k", "2", "-n", "1", "--count"}).out == "4\n");
    CHECK(run({"kron", "g", "--parts", "[[2,2],[2,2],[2,2]]"}).out == "1\n");
    CHECK(run({"kron", "degree", "-d", "3", "-n", "4"}).out == "8\n");
}

TEST_CASE("delta commands")
{
    Scratch s;
    const auto f32 = s.write("f32.json", fundamental32);
    const Outcome a = run({"delta", "eval-unit", "--table", f32, "-n", "4"});
    const Outcome b = run({"delta", "eval-unit", "--table", f32, "-n", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == "24\n");
    CHECK(a.out == b.out);

    const auto cayley = s.write("cayley.json", cayley_table);
    const auto unit = s.write("unit.json", R"({"shape":[2,2,2],"entries":[{"idx":[1,1,1],"num":"1"},{"idx":[2,2,2],"num":"1"}]})");
    CHECK(run({"delta", "eval", "--table", cayley, "--tensor", unit}).out == "-2\n");
    const auto half = s.write("half.json", R"({"shape":[2,2],"entries":[{"idx":[1,1],"num":"1","den":"2"},{"idx":[2,2],"num":"1"}]})");
    const auto ones = s.write("ones.json", R"({"shape":[2,2],"rows":[[1,1],[1,1]]})");
    CHECK(run({"delta", "eval", "--table", ones, "--tensor", half}).out == "1\n");

    CHECK(run({"delta", "fundamental", "-d", "3", "-k", "2"}).out == "1 1 1 1 2 2 2 2\n1 1 2 2 1 1 2 2\n1 2 1 2 1 2 1 2\n");
    CHECK(run({"delta", "fundamental", "-d", "3", "-k", "2", "--reduced"}).out == "1 1 1 2 2 2\n1 2 2 1 1 2\n2 1 2 1 2 1\n");
    CHECK(run({"delta", "concat", "--left", ones, "--right", ones}).out == "1 1 2 2\n1 1 2 2\n");
    CHECK(run({"delta", "concat", "--left", ones, "--right", ones, "--vertical"}).out == "1 1\n1 1\n1 1\n1 1\n");
    CHECK(run({"delta", "concat", "--left", ones, "--right", cayley}).code == 1);
}

TEST_CASE("latin and hwv commands")
{
    Scratch s;
    const auto cube = s.write("cube.json", R"({"k":3,"d":3,
        "cells":[[1,3,3],[2,1,2],[3,2,1],[1,1,3],[2,2,2],[3,3,1],[1,1,1],[2,2,3],[3,3,2]],
        "values":[1,1,1,2,2,2,3,3,3]})");
    const Outcome signs = run({"latin", "signs", "--cube", cube});
    CHECK(signs.code == 0);
    CHECK(signs.out == "directional -1 -1 -1\nfull -1\nsymbol -1\ntype -1\n");
    const Outcome js = run({"--format", "json", "latin", "signs", "--cube", cube});
    const auto doc = nlohmann::json::parse(js.out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["full"] == -1);

    const auto square = s.write("square.json", R"({"k":2,"d":2,"cells":[[1,1],[1,2],[2,1],[2,2]]})");
    CHECK(run({"latin", "count", "--type", square}).out == "count 2\nsigned_sum 2\n");
    CHECK(run({"latin", "at", "--type", square}).out == "2\n");

    const Outcome large = run({"latin", "at", "-d", "3", "-k", "4"});
    CHECK(large.code == 2);
    CHECK(large.out.empty());
    CHECK(contains(large.err, "--allow-large"));

    const auto ckpt = s.path("ckpt.jsonl");
    CHECK(run({"latin", "at", "-d", "3", "-k", "2", "--checkpoint", ckpt}).out == "24\n");
    CHECK(fs::exists(ckpt));
    CHECK(run({"latin", "at", "-d", "3", "-k", "2", "--checkpoint", ckpt}).out == "24\n");

    const Outcome top = run({"hwv", "omega", "-d", "3", "-k", "2", "-n", "4", "--check-hwv"});
    CHECK(top.out == "terms 1\nhighest_weight true\n");
    CHECK(run({"hwv", "omega", "-d", "3", "-k", "3", "-n", "2"}).out == "terms 0\n");
    const Outcome expanded = run({"--format", "json", "hwv", "omega", "-d", "3", "-k", "2", "-n", "1", "--expand"});
    std::istringstream lines(expanded.out);
    std::string line;
    int n = 0;
    nlohmann::json last;
    while (std::getline(lines, line)) {
        last = nlohmann::json::parse(line);
        ++n;
    }
    CHECK(n == 5);
    CHECK(last["terms"] == 4);
    CHECK(last["schema"] == 1);

    const auto low = s.write("low.json", R"({"d":3,"k":2,"terms":[{"cells":[[2,1,1]],"coeff":"1"}]})");
    CHECK(run({"hwv", "check", "--vector", low}).out == "weight_homogeneous true\nhighest_weight false\n");
    const auto bad = s.write("bad.json", R"({"d":3,"k":2,"terms":[{"cells":[[2,1,1]],"coeff":"x"}]})");
    const Outcome rejected = run({"hwv", "check", "--vector", bad});
    CHECK(rejected.code == 1);
    CHECK(contains(rejected.err, "terms[0].coeff"));
}

TEST_CASE("malformed input names the problem")
{
    Scratch s;
    const auto syntax = s.write("syntax.json", R"({"shape":[2,2], "rows": [[1,1],[1,1])");
    Outcome r = run({"delta", "eval-unit", "--table", syntax, "-n", "2"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "byte"));

    const auto rows = s.write("rows.json", R"({"shape":[2,2],"rows":"11"})");
    r = run({"delta", "eval-unit", "--table", rows, "-n", "2"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "rows"));

    const auto shape = s.write("shape.json", R"({"shap":[2,2],"rows":[[1,1],[1,1]]})");
    CHECK(contains(run({"delta", "eval-unit", "--table", shape, "-n", "2"}).err, "shape"));

    r = run({"kron", "g", "--parts", "[[2,2],[2,2"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--parts"));
    r = run({"kron", "g", "--parts", "[[1,2],[3]]"});
    CHECK(r.code == 1);
    CHECK(contains(r.err, "--parts[0]"));

    CHECK(run({"delta", "eval-unit", "--table", s.path("missing.json"), "-n", "2"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"--threads", "0", "kron", "rect", "-d", "3", "-n", "1", "-k", "1"}).code == 1);
}

TEST_CASE("budgets and configuration")
{
    Scratch s;
    const std::vector<std::string> degree = {"kron", "degree", "-d", "3", "-n", "7"};
    Outcome r = run(degree);
    CHECK(r.code == 2);
    CHECK(contains(r.out, "inconclusive"));

    const auto cfg = s.write("cfg.json", R"({"max_partition_size": 28})");
    auto with = [](std::vector<std::string> front, const std::vector<std::string>& back) {
        front.insert(front.end(), back.begin(), back.end());
        return front;
    };
    r = run(with({"--config", cfg}, degree));
    CHECK(r.code == 0);
    CHECK(r.out == "28\n");
    CHECK(run(with({"--config", cfg}, degree), {{"TI_MAX_PARTITION_SIZE", "24"}}).code == 2);
    CHECK(run(with({"--config", cfg, "--max-partition-size", "28"}, degree), {{"TI_MAX_PARTITION_SIZE", "24"}}).code == 0);
    CHECK(run(degree, {{"TI_MAX_PARTITION_SIZE", "28"}}).code == 0);
    CHECK(run(degree, {{"TI_MAX_PARTITION_SIZE", "many"}}).code == 1);

    const auto unknown = s.write("unknown.json", R"({"max_partition": 28})");
    r = run(with({"--config", unknown}, degree));
    CHECK(r.code == 1);
    CHECK(contains(r.err, "max_partition"));
    const auto typed = s.write("typed.json", R"({"threads": "two"})");
    CHECK(contains(run(with({"--config", typed}, degree)).err, "threads"));

    const auto fmt = s.write("fmt.json", R"({"format": "csv"})");
    CHECK(run({"--config", fmt, "kron", "rect", "-d", "3", "-n", "4", "-k", "4"}).out == "command,schema,value\nkron rect,1,5\n");

    CHECK(run({"--max-basis", "10", "hwv", "omega", "-d", "3", "-k", "3", "-n", "1"}).code == 2);
    const auto cube = s.write("cube.json", R"({"k":2,"d":3,"cells":[[1,1,1],[1,1,2],[1,2,1],[1,2,2],[2,1,1],[2,1,2],[2,2,1],[2,2,2]]})");
    r = run({"--max-nodes", "5", "latin", "count", "--type", cube});
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(run({"latin", "count", "--type", cube}).code == 0);
}

TEST_CASE("output formats")
{
    const std::vector<std::string> rect = {"kron", "rect", "-d", "3", "-n", "4", "-k", "4"};
    std::vector<std::string> args = {"--format", "json"};
    args.insert(args.end(), rect.begin(), rect.end());
    const auto doc = nlohmann::json::parse(run(args).out);
    CHECK(doc["schema"] == 1);
    CHECK(doc["value"] == "5");
    CHECK(doc["command"] == "kron rect");

    args = {"--format", "csv"};
    args.insert(args.end(), rect.begin(), rect.end());
    CHECK(run(args).out == "command,schema,value\nkron rect,1,5\n");
    CHECK(run({"--format", "xml", "kron", "rect", "-d", "3", "-n", "4", "-k", "4"}).code == 1);

    const Outcome table = run({"--format", "csv", "fixtures", "run", "g3k2"});
    CHECK(table.code == 0);
    std::istringstream in(table.out);
    std::string header;
    std::getline(in, header);
    CHECK(contains(header, "status"));
    CHECK(contains(header, "schema"));
    CHECK(contains(header, "provenance"));
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        ++rows;
    CHECK(rows == 8);
}

TEST_CASE("fixtures and tables")
{
    const Outcome list = run({"fixtures", "list"});
    CHECK(list.code == 0);
    CHECK(contains(list.out, "g3k4"));
    CHECK(contains(list.out, "delta3"));

    Outcome r = run({"fixtures", "run", "g3k2", "g5n2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "8 passed, 0 failed, 0 not reproduced"));
    CHECK(contains(r.out, "9 passed, 0 failed, 0 not reproduced"));

    r = run({"kron", "table", "--fixture", "g3k4"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "not reproduced"));
    r = run({"kron", "table", "--fixture", "g3k4", "--budget", "12"});
    CHECK(contains(r.out, "4 passed"));
    CHECK(run({"fixtures", "run", "nope"}).code == 1);
    CHECK(run({"fixtures", "run", "g3k2", "--budget", "0"}).code == 1);
    CHECK(run({"fixtures", "run", "g3k2", "--method", "kernel"}).code == 0);
}

TEST_CASE("coefficient cache through the command line")
{
    Scratch s;
    const auto cache = s.path("cache.jsonl");
    const std::vector<std::string> g = {"--cache", cache, "kron", "g", "--parts", "[[3,3],[3,3],[2,2,2]]"};
    const Outcome cold = run(g);
    const Outcome warm = run(g);
    CHECK(cold.code == 0);
    CHECK(cold.out == warm.out);
    std::ifstream in(cache);
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(contains(text, "\"key\""));

    const auto env_cache = s.path("env.jsonl");
    CHECK(run({"kron", "rect", "-d", "3", "-n", "3", "-k", "3"}, {{"TI_CACHE_PATH", env_cache}}).out == "1\n");
    CHECK(fs::exists(env_cache));
    CHECK(run({"kron", "rect", "-d", "3", "-n", "3", "-k", "3"}, {{"TI_CACHE_PATH", env_cache}}).out == "1\n");

    CHECK(run({"--threads", "2", "kron", "rect", "-d", "3", "-n", "6", "-k", "3"}).out ==
          run({"kron", "rect", "-d", "3", "-n", "6", "-k", "3"}).out);
}
