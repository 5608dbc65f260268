#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pcalc::cli {

struct IdentityIntegral {
    int n = 1;
    double value = 0.0;
    double target = 0.0;
    double residual = 0.0;  // relative
};
// Cubature of (1 + |y|^2)^{-(n+1)/2} over (0,1)^n against omega_{n+1} / 2^{n+1}.
IdentityIntegral identity_integral(int n);

struct ReportRow {
    std::string scenario;
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    std::string verdict;  // pass, fail, flagged
    double wall_ms = 0.0;
    std::string note;
};

struct RunOptions {
    int jobs = 1;
    double tol_scale = 1.0;
    bool fail_fast = false;
    bool timing = false;
    std::uint64_t seed = 20240611;
};

// Reads PAIRING_CALC_SEED when set.
std::uint64_t seed_from_env(std::uint64_t fallback);

// All checks of one scenario. ConfigError on malformed input.
std::vector<ReportRow> run_scenario(const nlohmann::json& scenario, const RunOptions& opt);
// Scenarios in parallel up to opt.jobs; rows ordered by scenario id, then check order.
std::vector<ReportRow> run_scenarios(const nlohmann::json& config, const RunOptions& opt);

std::string format_number(double v);  // 17 significant digits
std::string report_csv(const std::vector<ReportRow>& rows, bool timing);
bool all_pass(const std::vector<ReportRow>& rows);  // flagged rows do not fail

nlohmann::json load_json(const std::string& path_or_inline);

}  // namespace pcalc::cli

#include "pcalc/function1d.hpp"

#include <random>

namespace pcalc::cli {

struct CoareaInstance {
    PiecewiseFunction1D A, u, phi;
};
// Bounded piecewise-linear u with jumps, continuous piecewise-linear A > 0
// (so |DA| << L^1) and a polynomial bump phi on (-1, 1).
CoareaInstance random_coarea_instance(std::mt19937_64& rng);

}  // namespace pcalc::cli
