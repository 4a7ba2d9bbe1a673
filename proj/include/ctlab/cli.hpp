#pragma once

#include "ctlab/ladder.hpp"
#include "ctlab/words.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ctlab::cli {

enum ExitCode : int { pass = 0, criteria_failed = 1, input_error = 2, numerical_error = 3 };

struct LeafRunConfig {
    std::string monodromy = "2,1,1,1";
    std::size_t leaves = 50;
    std::size_t depth = 30;
    /// Secondary depth whose median gap is reported alongside.
    std::size_t compare_depth = 10;
    double tol = 1e-3;
    double ratio = 10.0;
    std::uint64_t seed = 1;
};

/// Leaf and control gap report behind `verify-leaves`.
nlohmann::json verify_leaves_report(const LeafRunConfig& config);

/// Every ladder audit for one spec: {"audits": {...}, "summary": {...}}.
nlohmann::json ladder_audit_report(const ladder::SplitSpec& spec);

/// Rows "parameter,x,y,z,convergence,status" for k stratified boundary samples.
std::string ct_draw_csv(const words::Monodromy& m, std::size_t samples, std::size_t depth, double tol,
                        std::uint64_t seed, std::string* svg = nullptr, double* fraction_below_tol = nullptr);

/// Writes via a temporary file in the same directory and renames into place.
void write_atomically(const std::string& path, const std::string& contents);

/// Entry point of the ctlab command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctlab::cli
