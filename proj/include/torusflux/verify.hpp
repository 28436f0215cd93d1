#ifndef TORUSFLUX_VERIFY_HPP
#define TORUSFLUX_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace torusflux {

struct CheckResult {
    std::string id;
    bool pass = false;
    double value = 0.0; // measured quantity
    double bound = 0.0; // the limit it is held against
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 0x5EED0001ULL;
};

// The full verification battery. One line per check is streamed to `progress`
// (when given) as it completes.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts, std::ostream* progress);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace torusflux

#endif
