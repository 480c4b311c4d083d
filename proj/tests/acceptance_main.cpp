#include "coulomb/acceptance.hpp"

#include <cstdio>
#include <cstring>

// One PASS/FAIL line per criterion. Pass "quick" for the reduced sample sizes.
int main(int argc, char** argv) {
    using namespace coulomb::acceptance;
    const Suite suite = argc > 1 && std::strcmp(argv[1], "quick") == 0 ? Suite::quick : Suite::full;
    int failed = 0;
    run_suite(suite, [&](const CriterionResult& r) {
        std::printf("%s\n", format_line(r).c_str());
        std::fflush(stdout);
        if (!r.passed) ++failed;
    });
    std::printf("%d of %d criteria passed\n", kCriteria - failed, kCriteria);
    return failed == 0 ? 0 : 1;
}
