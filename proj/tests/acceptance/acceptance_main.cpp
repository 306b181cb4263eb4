// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
//   rdcauchy_acceptance [--out DIR] [--only ID]...

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>

#include "rdcauchy/acceptance.hpp"

int main(int argc, char** argv) {
    rdcauchy::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--out") && i + 1 < argc) {
            opt.out_dir = argv[++i];
        } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
            opt.only.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: %s [--out DIR] [--only ID]...\n", argv[0]);
            return 2;
        }
    }
    opt.progress = &std::cerr;
    const auto results = rdcauchy::run_acceptance(opt);
    bool ok = true;
    std::printf("\n");
    for (const auto& r : results) {
        std::printf("%s\n", rdcauchy::format_result(r).c_str());
        ok = ok && r.passed;
    }
    std::printf("%s\n", ok ? "all criteria passed" : "some criteria failed");
    return ok ? 0 : 1;
}
