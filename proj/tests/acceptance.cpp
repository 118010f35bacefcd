/** \file    acceptance.cpp
    \brief   Acceptance report: one pass/fail line per criterion; tolerances live in the verify suites
*/
#include "fracext/verify.hpp"
#include <cstdio>
#include <string>
#include <vector>

using namespace fracext;

namespace {

struct Criterion {
    const char* label;
    std::vector<std::string> suites;
};

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {"1  kernel normalization", {"kernel-mass"}},
        {"2  closed-form extension", {"closed-form"}},
        {"3  sharp constant", {"maximizer"}},
        {"4  rearrangement, scaling and Kelvin invariance", {"invariance"}},
        {"5  Moebius transfer of norms", {"transfer"}},
        {"6  sphere integral expansions", {"sphere-integrals"}},
        {"7  boundary spectral value", {"boundary-value"}},
        {"8  weighted harmonics", {"harmonics"}},
        {"9  Funk-Hecke diagonalization", {"funk-hecke"}},
        {"10 Sobolev counterexample", {"sobolev"}},
        {"T  Theta identity", {"theta"}},
    };
    bool all = true;
    for(const auto& c : criteria) {
        bool ok = true;
        double seconds = 0;
        std::string failed;
        for(const auto& name : c.suites) {
            SuiteResult r = run_suite(name);
            seconds += r.seconds;
            ok = ok && r.pass();
            for(const auto& chk : r.checks)
                if(!chk.pass)
                    failed += " [" + chk.name + ": " + std::to_string(chk.value) + " vs " +
                              std::to_string(chk.tolerance) + "]";
            if(r.seconds > r.budget_seconds)
                failed += " [over budget]";
        }
        std::printf("%s %-48s %8.2f s%s\n", ok ? "PASS" : "FAIL", c.label, seconds, failed.c_str());
        std::fflush(stdout);
        all = all && ok;
    }
    std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
    return all ? 0 : 1;
}
