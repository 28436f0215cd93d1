// Verification battery driver: one PASS/FAIL line per criterion check,
// nonzero exit on any failure.

#include <iostream>

#include "torusflux/verify.hpp"

int main() {
    torusflux::VerifyOptions opts;
    auto results = torusflux::run_acceptance(opts, &std::cout);
    int passed = 0;
    for (const auto& r : results)
        if (r.pass) ++passed;
    std::cout << passed << "/" << results.size() << " checks passed\n";
    return torusflux::all_passed(results) ? 0 : 1;
}
