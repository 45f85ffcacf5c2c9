#pragma once

#include <string>
#include <vector>

#include "corrector/problem.hpp"

namespace corrector {

struct InvariantItem {
    std::string name;
    bool pass = false;
    double worst = 0.0;   // most extreme measured value
    double limit = 0.0;   // threshold it was compared against
    std::string detail;
};

struct InvariantReport {
    std::vector<InvariantItem> items;

    bool all_pass() const {
        for (const auto& item : items)
            if (!item.pass) return false;
        return true;
    }

    std::string to_text() const;
};

// Structural checks every converged solution must satisfy: eigenvalue
// iterates decrease, the potential is normalized, bounded below, discretely
// convex along axis and transfer directions, its difference quotients stay
// inside the admissible gradient set, the equation residual vanishes row by
// row, axis curvature respects the interior bound, the potential is linear
// along active transfer rays, and symmetric costs give symmetric output.
// Checks that only make sense for the ergodic form are skipped when the
// solution carries a positive discount.
InvariantReport check_invariants(const CorrectorProblem& problem,
                                 const CorrectorSolution& solution);

}  // namespace corrector
