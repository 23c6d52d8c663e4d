#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ncs {

enum class Suite { paper, quick, mc };
Suite parse_suite(const std::string& name);
std::string to_string(Suite s);

struct VerifyOptions {
    double tol = 1e-10;
    double mc_sigmas = 3;
    long mc_samples = 100000;
    int haar_samples = 20;
    int fixed_vector_models = 100;
    std::uint64_t seed = 0;
    // S_4 classified in the real regime only.
    bool reduced_classification = false;
};

struct Estimate {
    std::string label;
    double exact = 0;
    double mean = 0;
    double standard_error = 0;
    long samples = 0;
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0;
    std::string detail;
    std::vector<Estimate> estimates;
};

struct SuiteReport {
    Suite suite = Suite::paper;
    std::vector<CheckResult> checks;

    bool passed() const;
};

inline constexpr int check_count = 14;
std::string check_name(int id);
// Runs check 1..14; exceptions count as failures.
CheckResult run_check(int id, const VerifyOptions& opt = {});
// paper: all checks; quick: no Monte Carlo and a smaller classification;
// mc: the sampled checks with their estimates.
SuiteReport run_suite(Suite s, const VerifyOptions& opt = {});
VerifyOptions suite_options(Suite s, VerifyOptions base = {});

}  // namespace ncs
