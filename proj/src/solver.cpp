#include "corrector/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "corrector/support_function.hpp"

namespace corrector {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Precomputed per-solve data: stencil with flat index offsets (valid at
// diffusible nodes, where no axis step can wrap a row), transfer pair table,
// and the running cost sampled on the grid.
struct Workspace {
    Stencil stencil;
    std::vector<std::int64_t> offsets;  // one per stencil neighbour
    std::vector<TransferPair> pairs;
    std::vector<std::array<int, 3>> dirs;
    std::vector<double> costs;
    std::vector<int> ids;
    Eigen::VectorXd f;
};

std::array<std::int64_t, 3> index_strides(const Grid& grid) {
    std::array<std::int64_t, 3> s{0, 0, 0};
    std::int64_t acc = 1;
    for (int a = grid.d - 1; a >= 0; --a) {
        s[a] = acc;
        acc *= grid.n;
    }
    return s;
}

Workspace make_workspace(const CorrectorProblem& prob) {
    Workspace ws;
    const Grid& grid = prob.grid;
    ws.stencil = build_stencil(prob.diffusion_matrix(), grid.d, grid.h);
    const auto strides = index_strides(grid);
    ws.offsets.reserve(ws.stencil.neighbors.size());
    for (const auto& term : ws.stencil.neighbors) {
        std::int64_t off = 0;
        for (int a = 0; a < grid.d; ++a) off += term.dir[a] * strides[a];
        ws.offsets.push_back(off);
    }
    ws.pairs = prob.finite_pairs();
    for (const auto& pr : ws.pairs) {
        ws.dirs.push_back(pair_direction(pr.from, pr.to));
        ws.costs.push_back(prob.lambda(pr.from, pr.to));
        ws.ids.push_back(pair_id(grid.d, pr.from, pr.to));
    }
    const std::int64_t N = grid.size();
    ws.f.resize(N);
    for (std::int64_t k = 0; k < N; ++k) ws.f[k] = prob.running_cost(grid.rho(k));
    return ws;
}

double generator_at(const Workspace& ws, const Eigen::VectorXd& w, std::int64_t k) {
    double val = ws.stencil.center * w[k];
    for (std::size_t t = 0; t < ws.offsets.size(); ++t)
        val += ws.stencil.neighbors[t].coeff * w[k + ws.offsets[t]];
    return val;
}

std::int64_t neumann_target(const Grid& grid, std::int64_t k) {
    auto c = grid.unpack(k);
    for (int a = 0; a < grid.d; ++a) {
        if (c[a] == 0) c[a] = 1;
        else if (c[a] == grid.n - 1) c[a] = grid.n - 2;
    }
    return grid.pack(c);
}

std::int64_t action_target(const Grid& grid, const Workspace& ws, std::int64_t k, int action) {
    if (action == kNeumann) return neumann_target(grid, k);
    const TransferPair pr = pair_from_id(action);
    for (std::size_t q = 0; q < ws.pairs.size(); ++q)
        if (ws.pairs[q].from == pr.from && ws.pairs[q].to == pr.to)
            return grid.shift(k, ws.dirs[q]);
    throw Error(Errc::DegenerateInput, "policy uses a pair with non-finite cost");
}

// Every non-Diffuse node must reach a Diffuse node by following its action
// targets; a revisited in-progress node means the transfer graph cycles and
// the policy system is singular.
void check_policy_graph(const Grid& grid, const Workspace& ws, const PolicyField& policy) {
    const std::int64_t N = grid.size();
    std::int64_t diffuse = 0;
    std::vector<std::uint8_t> color(N, 0);
    std::vector<std::int64_t> path;
    for (std::int64_t start = 0; start < N; ++start) {
        if (policy[start] == kDiffuse) {
            ++diffuse;
            continue;
        }
        if (color[start] != 0) continue;
        path.clear();
        std::int64_t cur = start;
        while (true) {
            if (policy[cur] == kDiffuse || color[cur] == 2) break;
            if (color[cur] == 1)
                throw Error(Errc::SingularSystem, "transfer chains form a cycle");
            color[cur] = 1;
            path.push_back(cur);
            const std::int64_t next = action_target(grid, ws, cur, policy[cur]);
            if (next < 0)
                throw Error(Errc::StencilOutOfDomain, "transfer action leaves the grid");
            cur = next;
        }
        for (std::int64_t node : path) color[node] = 2;
    }
    if (diffuse == 0)
        throw Error(Errc::SingularSystem, "policy has no diffuse node");
}

struct LinearResult {
    Eigen::VectorXd x;
    double residual = 0.0;
};

LinearResult solve_sparse(const Eigen::SparseMatrix<double>& M, const Eigen::VectorXd& rhs,
                          const Eigen::VectorXd& guess, const SolverOptions& opts) {
    const std::int64_t size = M.rows();
    const bool direct = opts.backend == LinearBackend::Direct ||
                        (opts.backend == LinearBackend::Auto && size <= opts.directSolverLimit);
    LinearResult out;
    if (direct) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success)
            throw Error(Errc::SingularSystem,
                        "policy system factorization failed: " + lu.lastErrorMessage());
        out.x = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw Error(Errc::LinearSolveFailure, "policy system back-substitution failed");
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
        solver.setTolerance(opts.iterativeTol);
        solver.setMaxIterations(opts.iterativeMaxIters);
        solver.compute(M);
        if (solver.info() != Eigen::Success)
            throw Error(Errc::LinearSolveFailure, "iterative solver preconditioner failed");
        if (guess.size() == size)
            out.x = solver.solveWithGuess(rhs, guess);
        else
            out.x = solver.solve(rhs);
        if (solver.info() != Eigen::Success)
            throw Error(Errc::LinearSolveFailure,
                        "iterative solver stalled at error " + std::to_string(solver.error()));
    }
    out.residual = (M * out.x - rhs).cwiseAbs().maxCoeff();
    return out;
}

// Shared assembly for the ergodic (eta = 0, extra unknown aBar plus the
// normalization row) and discounted (eta > 0, square in w alone) systems.
LinearResult evaluate_system(const PolicyField& policy, const CorrectorProblem& prob,
                             const Workspace& ws, double eta, const Eigen::VectorXd& guess,
                             const SolverOptions& opts) {
    const Grid& grid = prob.grid;
    const std::int64_t N = grid.size();
    if (static_cast<std::int64_t>(policy.size()) != N)
        throw Error(Errc::DegenerateInput, "policy size does not match the grid");
    check_policy_graph(grid, ws, policy);

    const bool ergodic = eta == 0.0;
    const std::int64_t size = ergodic ? N + 1 : N;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(N) * (ws.offsets.size() + 2) + 2);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);

    for (std::int64_t k = 0; k < N; ++k) {
        const int action = policy[k];
        if (action == kDiffuse) {
            if (!grid.diffusible(k))
                throw Error(Errc::StencilOutOfDomain, "diffuse action at a boundary node");
            if (ergodic) {
                trips.emplace_back(k, k, ws.stencil.center);
                for (std::size_t t = 0; t < ws.offsets.size(); ++t)
                    trips.emplace_back(k, k + ws.offsets[t], ws.stencil.neighbors[t].coeff);
                trips.emplace_back(k, N, -1.0);
                rhs[k] = -ws.f[k];
            } else {
                trips.emplace_back(k, k, eta - ws.stencil.center);
                for (std::size_t t = 0; t < ws.offsets.size(); ++t)
                    trips.emplace_back(k, k + ws.offsets[t], -ws.stencil.neighbors[t].coeff);
                rhs[k] = ws.f[k];
            }
        } else if (action == kNeumann) {
            trips.emplace_back(k, k, 1.0);
            trips.emplace_back(k, neumann_target(grid, k), -1.0);
        } else {
            const std::int64_t target = action_target(grid, ws, k, action);
            if (target < 0)
                throw Error(Errc::StencilOutOfDomain, "transfer action leaves the grid");
            const TransferPair pr = pair_from_id(action);
            trips.emplace_back(k, k, 1.0);
            trips.emplace_back(k, target, -1.0);
            rhs[k] = grid.h * prob.lambda(pr.from, pr.to);
        }
    }
    if (ergodic) trips.emplace_back(N, grid.origin(), 1.0);

    Eigen::SparseMatrix<double> M(size, size);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    return solve_sparse(M, rhs, guess, opts);
}

// One Howard improvement step shared by both solvers. Members are the
// equation residuals read so that larger means the action's equation pushes
// w further down: Diffuse contributes aBar - f - L w in the ergodic case and
// eta w - L w - f in the discounted one, Transfer(i,j) contributes r^{ij}.
// The current action survives unless a challenger beats it by tolSwitch.
PolicyField improve_impl(const Eigen::VectorXd& w, double aBar, double eta,
                         const PolicyField& current, const CorrectorProblem& prob,
                         const Workspace& ws, const SolverOptions& opts) {
    const Grid& grid = prob.grid;
    const std::int64_t N = grid.size();
    if (w.size() != N || static_cast<std::int64_t>(current.size()) != N)
        throw Error(Errc::DegenerateInput, "field or policy size does not match the grid");
    const double h = grid.h;
    PolicyField next(current.size(), kDiffuse);

    for (std::int64_t k = 0; k < N; ++k) {
        const int ec = grid.extreme_count(k);
        if (ec > 0) {
            // Forced band: re-pick the admissible inward transfer with the
            // largest residual; an existing best is only displaced by a
            // strictly better candidate so ties stay deterministic.
            int bestId = kNeumann;
            double bestR = -kInf;
            for (std::size_t q = 0; q < ws.pairs.size(); ++q) {
                const std::int64_t target = grid.shift(k, ws.dirs[q]);
                if (target < 0 || grid.extreme_count(target) >= ec) continue;
                const double r = (w[k] - w[target]) / h - ws.costs[q];
                if (bestId == kNeumann || r > bestR + 1e-15) {
                    bestR = r;
                    bestId = ws.ids[q];
                }
            }
            next[k] = bestId;
            continue;
        }

        const double diffuseMember =
            (eta == 0.0 ? aBar : eta * w[k]) - ws.f[k] - generator_at(ws, w, k);
        double bestVal = diffuseMember;
        int bestId = kDiffuse;
        double currentVal = current[k] == kDiffuse ? diffuseMember : -kInf;
        for (std::size_t q = 0; q < ws.pairs.size(); ++q) {
            const std::int64_t target = grid.shift(k, ws.dirs[q]);
            if (target < 0) continue;
            const double r = (w[k] - w[target]) / h - ws.costs[q];
            if (r > bestVal) {
                bestVal = r;
                bestId = ws.ids[q];
            }
            if (current[k] == ws.ids[q]) currentVal = r;
        }
        next[k] = currentVal >= bestVal - opts.tolSwitch ? current[k] : bestId;
    }
    return next;
}

std::vector<std::uint8_t> binding_sets_impl(const Eigen::VectorXd& w,
                                            const CorrectorProblem& prob, const Workspace& ws,
                                            double tolBind) {
    const Grid& grid = prob.grid;
    const std::int64_t N = grid.size();
    std::vector<std::uint8_t> mask(N, 0);
    for (std::size_t q = 0; q < ws.pairs.size(); ++q) {
        const std::uint8_t bit = static_cast<std::uint8_t>(
            1u << unordered_pair_slot(grid.d, ws.pairs[q].from, ws.pairs[q].to));
        for (std::int64_t k = 0; k < N; ++k) {
            const std::int64_t target = grid.shift(k, ws.dirs[q]);
            if (target < 0) continue;
            const double r = (w[k] - w[target]) / grid.h - ws.costs[q];
            if (std::abs(r) <= tolBind) mask[k] |= bit;
        }
    }
    return mask;
}

void warn_non_monotone(const Workspace& ws, CorrectorSolution& sol) {
    sol.monotoneStencil = ws.stencil.monotone;
    if (!ws.stencil.monotone)
        std::cerr << "warning: diffusion stencil lacks diagonal dominance; "
                     "the scheme is not monotone on this problem\n";
}

// The no-transaction region must stay clear of the artificial boundary: at
// convergence every node within two grid steps of a face has to sit in the
// transfer region (some constraint binding). Surrogate nodes are exempt,
// they exist only when no inward transfer is available at all.
void check_domain_margin(const CorrectorProblem& prob, const CorrectorSolution& sol) {
    const Grid& grid = prob.grid;
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        if (grid.boundary_depth(k) > 2 || sol.policy[k] == kNeumann) continue;
        if (sol.bindingSets[k] == 0)
            throw Error(Errc::DomainTooSmall,
                        "no constraint binds within two steps of the boundary; "
                        "increase the domain radius");
    }
}

void check_discounted_envelope(const CorrectorProblem& prob, double eta,
                               const Eigen::VectorXd& w) {
    const GradientPolytope poly = build_gradient_polytope(prob.lambda);
    const Eigen::MatrixXd Q = prob.sigmaEff.transpose() * prob.sigmaEff;
    const BracketConstants bc = bracket_constants(prob.lambda, Q, prob.alphaBar);
    const double slack = 1e-8 * std::max(1.0, w.cwiseAbs().maxCoeff());
    const Grid& grid = prob.grid;
    for (std::int64_t k = 0; k < grid.size(); ++k) {
        const double dc = delta_C(poly, grid.rho(k));
        const double lower = std::max(dc - bc.K1, 0.0);
        if (w[k] < lower - slack)
            throw Error(Errc::NonConvergence,
                        "discounted solution falls below the support-function envelope");
        if (std::isfinite(bc.K2) && w[k] > bc.K2 / eta + dc + slack)
            throw Error(Errc::NonConvergence,
                        "discounted solution exceeds the support-function envelope");
    }
}

}  // namespace

std::vector<TransferPair> CorrectorProblem::finite_pairs() const {
    std::vector<TransferPair> pairs;
    for (int i = 0; i <= d(); ++i)
        for (int j = 0; j <= d(); ++j)
            if (i != j && std::isfinite(lambda(i, j))) pairs.push_back(TransferPair{i, j});
    return pairs;
}

double CorrectorProblem::max_finite_cost() const {
    double best = 0.0;
    for (int i = 0; i <= d(); ++i)
        for (int j = 0; j <= d(); ++j)
            if (i != j && std::isfinite(lambda(i, j))) best = std::max(best, lambda(i, j));
    return best;
}

void CorrectorProblem::validate() const {
    const int dim = d();
    if (grid.n < 5)
        throw Error(Errc::DegenerateInput, "solver grids need at least 5 nodes per axis");
    if (sigmaEff.rows() != dim || sigmaEff.cols() != dim || !sigmaEff.allFinite())
        throw Error(Errc::DegenerateInput, "running-cost matrix must be finite and d x d");
    if (alphaBar.rows() != dim || alphaBar.cols() != dim || !alphaBar.allFinite())
        throw Error(Errc::DegenerateInput, "diffusion matrix must be finite and d x d");
    if (lambda.rows() != dim + 1 || lambda.cols() != dim + 1)
        throw Error(Errc::DegenerateInput, "cost matrix must be (d+1) x (d+1)");
    for (int i = 0; i <= dim; ++i) {
        if (lambda(i, i) != 0.0)
            throw Error(Errc::DegenerateInput, "cost matrix diagonal must be zero");
        for (int j = 0; j <= dim; ++j) {
            const double lij = lambda(i, j);
            if (std::isnan(lij) || (std::isfinite(lij) && lij < 0.0))
                throw Error(Errc::DegenerateInput, "costs must be nonnegative or inf");
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diffusion_matrix());
    const double floor = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
    if (!(es.eigenvalues().minCoeff() > floor))
        throw Error(Errc::DegenerateDiffusion, "alphaBar alphaBar^T is numerically singular");
    for (int a = 0; a < dim; ++a) {
        Eigen::VectorXd axis = Eigen::VectorXd::Zero(dim);
        axis[a] = 1.0;
        delta_C(lambda, axis);  // throws UnboundedDirection when C is unbounded
        delta_C(lambda, (-axis).eval());
    }
}

double default_radius(const Eigen::MatrixXd& sigmaEff, const Eigen::MatrixXd& alphaBar,
                      const Eigen::MatrixXd& lambda, double margin, double minRadius) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es1(sigmaEff * sigmaEff.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(alphaBar * alphaBar.transpose());
    const double c1 = es1.eigenvalues().maxCoeff();
    const double c2 = es2.eigenvalues().maxCoeff();
    if (!(c1 > 0.0))
        throw Error(Errc::DegenerateInput, "running-cost matrix is zero; domain size undefined");
    double lamBar = 0.0;
    for (Eigen::Index i = 0; i < lambda.rows(); ++i)
        for (Eigen::Index j = 0; j < lambda.cols(); ++j)
            if (i != j && std::isfinite(lambda(i, j))) lamBar = std::max(lamBar, lambda(i, j));
    // Scalar comparison instance with both one-sided costs doubled: its free
    // boundary bounds the true one, so margin times it clears the NT region.
    const double rhoPlus = std::cbrt(3.0 * c2 * (4.0 * lamBar) / (4.0 * c1));
    return std::max(margin * rhoPlus, minRadius);
}

Stencil build_stencil(const Eigen::MatrixXd& A, int d, double h) {
    Stencil st;
    const double h2 = h * h;
    for (int a = 0; a < d; ++a) {
        double offDiag = 0.0;
        for (int b = 0; b < d; ++b)
            if (b != a) offDiag += std::abs(A(a, b));
        const double coeff = (A(a, a) - offDiag) / (2.0 * h2);
        if (coeff < 0.0) st.monotone = false;
        if (coeff != 0.0) {
            std::array<int, 3> dir{0, 0, 0};
            dir[a] = 1;
            st.neighbors.push_back({dir, coeff});
            dir[a] = -1;
            st.neighbors.push_back({dir, coeff});
        }
    }
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            const double cross = A(a, b);
            if (cross == 0.0) continue;
            const double coeff = std::abs(cross) / (2.0 * h2);
            std::array<int, 3> dir{0, 0, 0};
            dir[a] = 1;
            dir[b] = cross > 0.0 ? 1 : -1;
            st.neighbors.push_back({dir, coeff});
            dir[a] = -1;
            dir[b] = -dir[b];
            st.neighbors.push_back({dir, coeff});
        }
    }
    for (const auto& term : st.neighbors) st.center -= term.coeff;
    return st;
}

double apply_generator(const Eigen::VectorXd& w, std::int64_t node,
                       const CorrectorProblem& problem) {
    const Grid& grid = problem.grid;
    if (node < 0 || node >= grid.size() || w.size() != grid.size())
        throw Error(Errc::DegenerateInput, "node or field does not match the grid");
    if (!grid.diffusible(node))
        throw Error(Errc::StencilOutOfDomain, "stencil leaves the grid at this node");
    const Stencil st = build_stencil(problem.diffusion_matrix(), grid.d, grid.h);
    double val = st.center * w[node];
    for (const auto& term : st.neighbors) val += term.coeff * w[grid.shift(node, term.dir)];
    return val;
}

double transfer_residual(const Eigen::VectorXd& w, std::int64_t node, int i, int j,
                         const CorrectorProblem& problem) {
    const Grid& grid = problem.grid;
    if (node < 0 || node >= grid.size() || w.size() != grid.size())
        throw Error(Errc::DegenerateInput, "node or field does not match the grid");
    if (i < 0 || j < 0 || i > grid.d || j > grid.d || i == j)
        throw Error(Errc::DegenerateInput, "transfer pair indices out of range");
    if (!std::isfinite(problem.lambda(i, j)))
        throw Error(Errc::DegenerateInput, "transfer pair has non-finite cost");
    const std::int64_t target = grid.shift(node, pair_direction(i, j));
    if (target < 0)
        throw Error(Errc::StencilOutOfDomain, "transfer target leaves the grid");
    return (w[node] - w[target]) / grid.h - problem.lambda(i, j);
}

PolicyField initial_policy(const CorrectorProblem& problem) {
    const Grid& grid = problem.grid;
    const std::int64_t N = grid.size();
    const auto pairs = problem.finite_pairs();
    const int center = (grid.n - 1) / 2;
    PolicyField policy(N, kDiffuse);
    for (std::int64_t k = 0; k < N; ++k) {
        const int ec = grid.extreme_count(k);
        if (ec == 0) continue;
        int bestId = kNeumann;
        int bestDist = grid.n;
        for (const auto& pr : pairs) {
            const std::int64_t target = grid.shift(k, pair_direction(pr.from, pr.to));
            if (target < 0 || grid.extreme_count(target) >= ec) continue;
            const auto c = grid.unpack(target);
            int dist = 0;
            for (int a = 0; a < grid.d; ++a) dist = std::max(dist, std::abs(c[a] - center));
            if (dist < bestDist) {
                bestDist = dist;
                bestId = pair_id(grid.d, pr.from, pr.to);
            }
        }
        policy[k] = bestId;
    }
    return policy;
}

std::pair<Eigen::VectorXd, double> evaluate_policy(const PolicyField& policy,
                                                   const CorrectorProblem& problem,
                                                   const SolverOptions& opts) {
    const Workspace ws = make_workspace(problem);
    const LinearResult res =
        evaluate_system(policy, problem, ws, 0.0, Eigen::VectorXd(), opts);
    const std::int64_t N = problem.grid.size();
    return {res.x.head(N), res.x[N]};
}

PolicyField improve_policy(const Eigen::VectorXd& w, double aBar, const PolicyField& current,
                           const CorrectorProblem& problem, const SolverOptions& opts) {
    const Workspace ws = make_workspace(problem);
    return improve_impl(w, aBar, 0.0, current, problem, ws, opts);
}

std::vector<std::uint8_t> binding_sets(const Eigen::VectorXd& w, const CorrectorProblem& problem,
                                       double tolBind) {
    const Workspace ws = make_workspace(problem);
    return binding_sets_impl(w, problem, ws, tolBind);
}

double binding_tolerance(const CorrectorProblem& problem, const SolverOptions& opts) {
    return std::max(10.0 * opts.tolSwitch, problem.grid.h * problem.max_finite_cost() * 1e-3);
}

CorrectorSolution solve_policy_iteration(const CorrectorProblem& problem,
                                         const SolverOptions& opts) {
    problem.validate();
    const Workspace ws = make_workspace(problem);
    const std::int64_t N = problem.grid.size();

    CorrectorSolution sol;
    sol.grid = problem.grid;
    warn_non_monotone(ws, sol);

    PolicyField policy = initial_policy(problem);
    Eigen::VectorXd guess;
    double aPrev = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 1; iter <= opts.maxIters; ++iter) {
        const LinearResult lin = evaluate_system(policy, problem, ws, 0.0, guess, opts);
        const Eigen::VectorXd w = lin.x.head(N);
        const double aBar = lin.x[N];
        sol.aHistory.push_back(aBar);
        const PolicyField next = improve_impl(w, aBar, 0.0, policy, problem, ws, opts);
        const bool stalled =
            std::isfinite(aPrev) && std::abs(aBar - aPrev) < opts.tolA * std::max(1.0, std::abs(aBar));
        if (stalled && next == policy) {
            sol.w = w;
            sol.aBar = aBar;
            sol.policy = policy;
            sol.iterations = iter;
            sol.residualNorm = lin.residual;
            sol.tolBind = binding_tolerance(problem, opts);
            sol.bindingSets = binding_sets_impl(w, problem, ws, sol.tolBind);
            sol.neumannNodes = static_cast<int>(std::count(policy.begin(), policy.end(), kNeumann));
            check_domain_margin(problem, sol);
            return sol;
        }
        policy = next;
        aPrev = aBar;
        guess = lin.x;
    }
    throw Error(Errc::MaxItersExceeded,
                "policy iteration did not settle in " + std::to_string(opts.maxIters) +
                    " iterations");
}

CorrectorSolution solve_discounted(const CorrectorProblem& problem, double eta,
                                   const SolverOptions& opts) {
    if (!(eta > 0.0))
        throw Error(Errc::DegenerateInput, "discount rate must be positive");
    problem.validate();
    const Workspace ws = make_workspace(problem);

    CorrectorSolution sol;
    sol.grid = problem.grid;
    sol.discount = eta;
    warn_non_monotone(ws, sol);

    PolicyField policy = initial_policy(problem);
    Eigen::VectorXd guess;
    double aPrev = std::numeric_limits<double>::quiet_NaN();
    for (int iter = 1; iter <= opts.maxIters; ++iter) {
        const LinearResult lin = evaluate_system(policy, problem, ws, eta, guess, opts);
        const double aEstimate = eta * lin.x.minCoeff();
        sol.aHistory.push_back(aEstimate);
        const PolicyField next = improve_impl(lin.x, 0.0, eta, policy, problem, ws, opts);
        const bool stalled = std::isfinite(aPrev) &&
                             std::abs(aEstimate - aPrev) < opts.tolA * std::max(1.0, std::abs(aEstimate));
        if (stalled && next == policy) {
            sol.w = lin.x;
            sol.aBar = aEstimate;
            sol.policy = policy;
            sol.iterations = iter;
            sol.residualNorm = lin.residual;
            sol.tolBind = binding_tolerance(problem, opts);
            sol.bindingSets = binding_sets_impl(lin.x, problem, ws, sol.tolBind);
            sol.neumannNodes = static_cast<int>(std::count(policy.begin(), policy.end(), kNeumann));
            check_discounted_envelope(problem, eta, lin.x);
            return sol;
        }
        policy = next;
        aPrev = aEstimate;
        guess = lin.x;
    }
    throw Error(Errc::MaxItersExceeded,
                "discounted policy iteration did not settle in " + std::to_string(opts.maxIters) +
                    " iterations");
}

}  // namespace corrector
