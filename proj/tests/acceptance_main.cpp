#include <iostream>

#include "redop/acceptance.hpp"

int main()
{
    redop::acceptance::Suite suite;
    int failed = 0;
    for (const auto& o : suite.run()) {
        std::cout << redop::acceptance::format(o) << '\n';
        if (!o.passed) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
