#include "corrector/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <limits>

#include "corrector/errors.hpp"
#include "corrector/solver.hpp"
#include "corrector/support_function.hpp"

namespace corrector {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool symmetric_costs(const Eigen::MatrixXd& lambda) {
    for (Eigen::Index i = 0; i < lambda.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < lambda.cols(); ++j) {
            const double a = lambda(i, j);
            const double b = lambda(j, i);
            if (std::isinf(a) != std::isinf(b)) return false;
            if (!std::isinf(a) && a != b) return false;
        }
    }
    return true;
}

std::int64_t mirror_node(const Grid& grid, std::int64_t k) {
    auto c = grid.unpack(k);
    for (int a = 0; a < grid.d; ++a) c[static_cast<std::size_t>(a)] = grid.n - 1 - c[a];
    return grid.pack(c);
}

double generator_value(const Stencil& stencil, const Grid& grid, const Eigen::VectorXd& w,
                       std::int64_t k) {
    double total = stencil.center * w[k];
    for (const auto& term : stencil.neighbors) {
        total += term.coeff * w[grid.shift(k, term.dir)];
    }
    return total;
}

}  // namespace

std::string InvariantReport::to_text() const {
    std::string out;
    for (const auto& item : items) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %s (worst=%.6g, limit=%.6g)%s%s\n",
                      item.pass ? "PASS" : "FAIL", item.name.c_str(), item.worst, item.limit,
                      item.detail.empty() ? "" : " ", item.detail.c_str());
        out += buf;
    }
    return out;
}

InvariantReport check_invariants(const CorrectorProblem& problem,
                                 const CorrectorSolution& solution) {
    const Grid& grid = problem.grid;
    const std::int64_t N = grid.size();
    const Eigen::VectorXd& w = solution.w;
    if (w.size() != N || solution.policy.size() != static_cast<std::size_t>(N)) {
        throw Error(Errc::DegenerateInput, "solution does not match the problem grid");
    }
    const bool ergodic = solution.discount == 0.0;
    const double res = solution.residualNorm;
    const double wInf = w.size() > 0 ? w.cwiseAbs().maxCoeff() : 0.0;
    const auto pairs = problem.finite_pairs();
    const Eigen::MatrixXd A = problem.diffusion_matrix();
    const Stencil stencil = build_stencil(A, grid.d, grid.h);

    InvariantReport report;
    auto add = [&report](const std::string& name, bool pass, double worst, double limit,
                         std::string detail = "") {
        report.items.push_back({name, pass, worst, limit, std::move(detail)});
    };

    if (ergodic) {
        double worstRise = -kInf;
        for (std::size_t j = 1; j < solution.aHistory.size(); ++j) {
            worstRise = std::max(worstRise, solution.aHistory[j] - solution.aHistory[j - 1]);
        }
        const double limit = std::max(1e-9 * std::max(1.0, std::abs(solution.aBar)), 10.0 * res);
        if (solution.aHistory.size() < 2) worstRise = 0.0;
        add("eigenvalue-iterates-decrease", worstRise <= limit, worstRise, limit);

        const double origin = std::abs(w[grid.origin()]);
        const double normLimit = std::max(1e-12, 10.0 * res);
        add("origin-normalization", origin <= normLimit, origin, normLimit);
    }

    const bool symCosts = symmetric_costs(problem.lambda);
    {
        const double limit = std::max({1e-12, 10.0 * res, 1e-10 * wInf});
        if (!ergodic || symCosts) {
            const double worst = w.minCoeff();
            add("potential-lower-bound", worst >= -limit, worst, limit);
        } else {
            // With asymmetric costs the potential can dip below zero, but a
            // telescoped gradient bound still gives w(rho) >= -delta_C(-rho).
            const GradientPolytope poly = build_gradient_polytope(problem.lambda);
            double worst = kInf;
            for (std::int64_t k = 0; k < N; ++k) {
                worst = std::min(worst, w[k] + delta_C(poly, -grid.rho(k)));
            }
            add("potential-lower-bound", worst >= -limit, worst, limit,
                "against -delta_C(-rho)");
        }
    }

    {
        const double limit = std::max(1e-12, 100.0 * res);
        double worstAxis = kInf;
        for (std::int64_t k = 0; k < N; ++k) {
            for (int a = 0; a < grid.d; ++a) {
                std::array<int, 3> dir{0, 0, 0};
                dir[static_cast<std::size_t>(a)] = 1;
                const std::int64_t up = grid.shift(k, dir);
                dir[static_cast<std::size_t>(a)] = -1;
                const std::int64_t dn = grid.shift(k, dir);
                if (up < 0 || dn < 0) continue;
                worstAxis = std::min(worstAxis, w[up] + w[dn] - 2.0 * w[k]);
            }
        }
        add("axis-convexity", worstAxis >= -limit, worstAxis, limit);

        double worstDir = kInf;
        for (const auto& pr : pairs) {
            const auto dir = pair_direction(pr.from, pr.to);
            std::array<int, 3> back{-dir[0], -dir[1], -dir[2]};
            for (std::int64_t k = 0; k < N; ++k) {
                const std::int64_t up = grid.shift(k, dir);
                const std::int64_t dn = grid.shift(k, back);
                if (up < 0 || dn < 0) continue;
                worstDir = std::min(worstDir, w[up] + w[dn] - 2.0 * w[k]);
            }
        }
        add("transfer-direction-convexity", worstDir >= -limit, worstDir, limit);
    }

    {
        const double limit = std::max(1e-9, 100.0 * res);
        double worst = -kInf;
        for (const auto& pr : pairs) {
            const auto dir = pair_direction(pr.from, pr.to);
            for (std::int64_t k = 0; k < N; ++k) {
                const std::int64_t target = grid.shift(k, dir);
                if (target < 0) continue;
                const double r = (w[k] - w[target]) / grid.h - problem.lambda(pr.from, pr.to);
                worst = std::max(worst, r);
            }
        }
        add("gradient-in-admissible-set", worst <= limit, worst, limit);
    }

    {
        const double diffuseLimit =
            std::max(1e-8 * std::max(1.0, std::abs(solution.aBar)), 10.0 * res);
        const double rayLimit = std::max(1e-10, 10.0 * res / grid.h);
        double worstDiffuse = 0.0;
        double worstRay = 0.0;
        for (std::int64_t k = 0; k < N; ++k) {
            const int action = solution.policy[static_cast<std::size_t>(k)];
            if (action == kDiffuse) {
                if (!grid.diffusible(k)) continue;
                const double member = ergodic ? solution.aBar : solution.discount * w[k];
                const double resid =
                    member - problem.running_cost(grid.rho(k)) - generator_value(stencil, grid, w, k);
                worstDiffuse = std::max(worstDiffuse, std::abs(resid));
            } else if (action >= 0) {
                const TransferPair pr = pair_from_id(action);
                const std::int64_t target = grid.shift(k, pair_direction(pr.from, pr.to));
                const double r =
                    (w[k] - w[target]) / grid.h - problem.lambda(pr.from, pr.to);
                worstRay = std::max(worstRay, std::abs(r));
            } else {
                const std::int64_t target = grid.shift(k, [&] {
                    auto c = grid.unpack(k);
                    std::array<int, 3> dir{0, 0, 0};
                    for (int a = 0; a < grid.d; ++a) {
                        if (c[static_cast<std::size_t>(a)] == 0) dir[static_cast<std::size_t>(a)] = 1;
                        if (c[static_cast<std::size_t>(a)] == grid.n - 1)
                            dir[static_cast<std::size_t>(a)] = -1;
                    }
                    return dir;
                }());
                worstRay = std::max(worstRay, std::abs(w[k] - w[target]) / grid.h);
            }
        }
        add("equation-residual-diffuse", worstDiffuse <= diffuseLimit, worstDiffuse,
            diffuseLimit);
        add("equation-residual-transfer", worstRay <= rayLimit, worstRay, rayLimit);
    }

    if (ergodic) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        const double minEv = eig.eigenvalues().minCoeff();
        const double M = minEv > 0.0 ? 2.0 * std::abs(solution.aBar) / minEv : kInf;
        const double limit =
            M * grid.h * grid.h + 2.0 * problem.max_finite_cost() * grid.h + 100.0 * res + 1e-12;
        double worst = -kInf;
        for (std::int64_t k = 0; k < N; ++k) {
            for (int a = 0; a < grid.d; ++a) {
                std::array<int, 3> dir{0, 0, 0};
                dir[static_cast<std::size_t>(a)] = 1;
                const std::int64_t up = grid.shift(k, dir);
                dir[static_cast<std::size_t>(a)] = -1;
                const std::int64_t dn = grid.shift(k, dir);
                if (up < 0 || dn < 0) continue;
                worst = std::max(worst, w[up] + w[dn] - 2.0 * w[k]);
            }
        }
        add("axis-curvature-bound", worst <= limit, worst, limit);
    }

    {
        const double limit = std::max(1e-12, 100.0 * res);
        double worst = 0.0;
        for (std::int64_t k = 0; k < N; ++k) {
            const int action = solution.policy[static_cast<std::size_t>(k)];
            if (action < 0) continue;
            const TransferPair pr = pair_from_id(action);
            const auto dir = pair_direction(pr.from, pr.to);
            const std::int64_t mid = grid.shift(k, dir);
            if (mid < 0 || solution.policy[static_cast<std::size_t>(mid)] != action) continue;
            const std::int64_t far = grid.shift(mid, dir);
            if (far < 0) continue;
            worst = std::max(worst, std::abs(w[far] - 2.0 * w[mid] + w[k]));
        }
        add("transfer-ray-linearity", worst <= limit, worst, limit);
    }

    if (symCosts) {
        const double limit = std::max({1e-11, 1e-6 * wInf, 100.0 * res});
        double worst = 0.0;
        std::int64_t regionMismatches = 0;
        const bool haveMasks = solution.bindingSets.size() == static_cast<std::size_t>(N);
        for (std::int64_t k = 0; k < N; ++k) {
            const std::int64_t m = mirror_node(grid, k);
            worst = std::max(worst, std::abs(w[k] - w[m]));
            if (haveMasks) {
                const bool ntHere = solution.bindingSets[static_cast<std::size_t>(k)] == 0;
                const bool ntThere = solution.bindingSets[static_cast<std::size_t>(m)] == 0;
                if (ntHere != ntThere) ++regionMismatches;
            }
        }
        add("symmetry-potential", worst <= limit, worst, limit);
        add("symmetry-region", regionMismatches == 0, static_cast<double>(regionMismatches),
            0.0);
    }

    return report;
}

}  // namespace corrector
