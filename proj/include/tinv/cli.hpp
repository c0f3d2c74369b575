#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace tinv::cli {

enum class Format { plain, json, csv };

struct RunConfig {
    int max_partition_size = 24;
    std::uint64_t max_basis = 200'000;
    std::uint64_t max_nodes = 2'000'000'000ULL;
    std::string cache_path;  // empty: no persistent cache
    Format format = Format::plain;
    int threads = 1;
    bool allow_large = false;
};

using Environment = std::map<std::string, std::string>;

/// TI_CACHE_PATH, TI_MAX_PARTITION_SIZE and TI_THREADS from the process environment.
Environment process_environment();

/// Runs one command line (without the program name). Returns the exit status:
/// 0 success, 1 domain or parse error, 2 budget exhausted or inconclusive,
/// 3 internal invariant violation (including a fixture mismatch).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = process_environment());

} // namespace tinv::cli
