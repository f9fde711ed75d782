#pragma once

#include "errors.hpp"

#include <cstdlib>
#include <string>

namespace dmlab {

// Relative thresholds for turning exact-zero / exact-equality statements into
// finite-precision tests.
//   deg:  degeneracy grouping, gaps <= deg * max|Omega|
//   cpl:  zero-column detection, |G_j| <= cpl * |C|_F
//   rank: singular value cutoff, s <= rank * s_max
struct Tolerances {
    double deg = 1e-8;
    double cpl = 1e-10;
    double rank = 1e-10;

    // DARKMODE_LAB_TOL_{DEG,CPL,RANK} override the given defaults when set.
    static Tolerances from_env();
    static Tolerances from_env(Tolerances base) {
        auto read = [](const char* name, double& slot) {
            const char* v = std::getenv(name);
            if (!v || !*v) return;
            char* end = nullptr;
            double x = std::strtod(v, &end);
            if (end == v || *end != '\0' || !(x >= 0.0))
                throw ParseError(std::string("environment variable ") + name + " is not a non-negative number");
            slot = x;
        };
        read("DARKMODE_LAB_TOL_DEG", base.deg);
        read("DARKMODE_LAB_TOL_CPL", base.cpl);
        read("DARKMODE_LAB_TOL_RANK", base.rank);
        return base;
    }
};

inline Tolerances Tolerances::from_env() { return from_env(Tolerances{}); }

}  // namespace dmlab
