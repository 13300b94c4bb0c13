// Acceptance suite runner: one pass/fail line per criterion.
//   acceptance_tests                 run everything
//   acceptance_tests --criterion N   run one criterion
//   acceptance_tests --quick         skip the long Monte Carlo / facet scans
#include <cstdio>
#include <cstring>
#include <exception>

#include "latq/acceptance.hpp"

int main(int argc, char** argv) {
    int criterion = 0;
    int workers = 0;
    bool quick = false;
    for (int i = 1; i < argc; i++) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) {
            criterion = std::atoi(argv[++i]);
        } else if (!std::strcmp(argv[i], "--workers") && i + 1 < argc) {
            workers = std::atoi(argv[++i]);
        } else if (!std::strcmp(argv[i], "--quick")) {
            quick = true;
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N] [--workers N] [--quick]\n",
                         argv[0]);
            return 2;
        }
    }
    try {
        if (criterion > 0) {
            auto r = latq::acceptance::run_criterion(criterion, workers, quick);
            const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
            std::printf("%s  C%-2d  %s (%.1fs)\n%s", tag, r.id, r.name.c_str(), r.seconds,
                        r.details.c_str());
            return r.pass || r.skipped ? 0 : 1;
        }
        return latq::acceptance::run_all(workers, quick) ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
