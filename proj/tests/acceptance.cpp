#include <cstdlib>
#include <iostream>
#include <string>

#include "hsprop/cli.hpp"

// Prints one CRITERION line per acceptance criterion.  Exit status is 0 only
// when every criterion passes.
int main(int argc, char** argv) {
    hsprop::suite::SuiteOptions opt;
    if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
    opt.cli = hsprop::cli::run_capture;
    int failed = 0;
    for (const auto& criterion : hsprop::suite::criteria()) {
        auto r = criterion(opt);
        if (!r.pass) ++failed;
        std::cout << hsprop::suite::format_line(r) << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
    return failed ? 1 : 0;
}
