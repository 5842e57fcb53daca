#pragma once

// Self-checks run by `cvpq verify`: analytic routes against each other
// ("oracles") and against sampling ("montecarlo").

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cvpq {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string to_json(int indent = 2) const;
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    std::size_t samples = 200000;  ///< per Monte-Carlo moment case
    unsigned workers = 0;
};

/// suite is "oracles", "montecarlo" or "all".
VerifyReport run_verify_suite(const std::string& suite, const VerifyOptions& options = {});

}  // namespace cvpq
