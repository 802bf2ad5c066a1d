#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cdbundle/feasibility.hpp"
#include "cdbundle/kernels.hpp"
#include "cdbundle/oracle.hpp"

namespace cdbundle::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;
inline constexpr int usage = 2;
inline constexpr int numeric = 3;
inline constexpr int eigenvalues_match_only = 10;
inline constexpr int distinct = 11;
}  // namespace exit_code

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Comma-separated reals; SpecParseError unless exactly `expected` finite values.
std::vector<double> parse_number_list(const std::string& text, std::size_t expected);

// SpecParseError on I/O or parse failure.
KernelSpec load_kernel_file(const std::string& path);

// CSV with header x,y,eig1..eign over a grid x grid lattice on [-r, r]^2 clipped to |z| <= r.
std::string field_csv(const KernelSpec& spec, int grid, double radius, const FDConfig& cfg, unsigned threads = 0);

struct ScenarioCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioResult {
    std::string name;
    std::vector<ScenarioCheck> checks;
    std::vector<std::string> notes;
    bool all_pass() const;
};

const std::vector<std::string>& scenario_names();
ScenarioResult run_scenario(const std::string& name);

}  // namespace cdbundle::cli
