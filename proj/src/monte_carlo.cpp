#include "corrector/monte_carlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

#include "corrector/errors.hpp"
#include "corrector/grid.hpp"

namespace corrector {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Box-Muller on the raw 64-bit stream; one engine per path keeps results
// independent of the thread count.
class NormalSampler {
   public:
    explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 6.283185307179586476925286766559 * u2;
        spare_ = mag * std::sin(ang);
        have_ = true;
        return mag * std::cos(ang);
    }

   private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

struct PathOutcome {
    double mean = 0.0;
    std::int64_t escapes = 0;
};

}  // namespace

McResult mc_ergodic_cost(const CorrectorSolution& solution, const CorrectorProblem& problem,
                         const McOptions& opts) {
    const Grid& grid = problem.grid;
    const int d = grid.d;
    if (solution.grid.d != grid.d || solution.grid.n != grid.n) {
        throw Error(Errc::DegenerateInput, "solution and problem grids do not match");
    }
    if (solution.policy.size() != static_cast<std::size_t>(grid.size())) {
        throw Error(Errc::DegenerateInput, "solution carries no policy field");
    }
    if (!(opts.horizon > 0.0) || !(opts.dt > 0.0) || opts.paths < 1) {
        throw Error(Errc::DegenerateInput, "simulation needs positive horizon, step and paths");
    }

    Eigen::VectorXd start = opts.start;
    if (start.size() == 0) {
        start = Eigen::VectorXd::Zero(d);
    } else if (start.size() != d) {
        throw Error(Errc::DegenerateInput, "start point dimension does not match the problem");
    }
    {
        std::array<int, 3> coords{0, 0, 0};
        bool inside = true;
        for (int a = 0; a < d; ++a) {
            const long idx = std::lround((start(a) + grid.radius) / grid.h);
            if (idx < 0 || idx >= grid.n) inside = false;
            coords[static_cast<std::size_t>(a)] = static_cast<int>(idx);
        }
        if (!inside) {
            throw Error(Errc::DegenerateInput, "start point lies outside the grid");
        }
        if (solution.policy[static_cast<std::size_t>(grid.pack(coords))] != kDiffuse) {
            throw Error(Errc::NoNTRegion,
                        "policy does not diffuse at the start point; nothing to average");
        }
    }

    const std::int64_t steps = std::llround(opts.horizon / opts.dt);
    if (steps < 1) {
        throw Error(Errc::DegenerateInput, "horizon shorter than one step");
    }
    const double sqdt = std::sqrt(opts.dt);
    const long chainGuard = 4L * grid.n * (d + 1);

    auto runPath = [&](int path) -> PathOutcome {
        NormalSampler gauss(mix64(opts.seed ^ mix64(static_cast<std::uint64_t>(path) + 1)));
        Eigen::VectorXd rho = start;
        Eigen::VectorXd noise(d);
        long double cost = 0.0L;
        std::int64_t escapes = 0;
        for (std::int64_t step = 0; step < steps; ++step) {
            for (int a = 0; a < d; ++a) noise(a) = gauss();
            rho += problem.alphaBar * (sqdt * noise);

            std::array<int, 3> coords{0, 0, 0};
            bool escaped = false;
            for (int a = 0; a < d; ++a) {
                long idx = std::lround((rho(a) + grid.radius) / grid.h);
                if (idx < 0) {
                    idx = 0;
                    escaped = true;
                } else if (idx >= grid.n) {
                    idx = grid.n - 1;
                    escaped = true;
                }
                coords[static_cast<std::size_t>(a)] = static_cast<int>(idx);
            }
            if (escaped) ++escapes;

            std::int64_t node = grid.pack(coords);
            long hops = 0;
            while (solution.policy[static_cast<std::size_t>(node)] >= 0) {
                const TransferPair pr =
                    pair_from_id(solution.policy[static_cast<std::size_t>(node)]);
                const std::array<int, 3> dir = pair_direction(pr.from, pr.to);
                for (int a = 0; a < d; ++a) {
                    rho(a) += grid.h * dir[static_cast<std::size_t>(a)];
                }
                cost += static_cast<long double>(problem.lambda(pr.from, pr.to)) * grid.h;
                node = grid.shift(node, dir);
                if (node < 0) {
                    throw Error(Errc::NonConvergence,
                                "transfer policy pushed a path outside the grid");
                }
                if (++hops > chainGuard) {
                    throw Error(Errc::NonConvergence,
                                "transfer chain failed to reach the no-transaction region");
                }
            }
            if (solution.policy[static_cast<std::size_t>(node)] == kNeumann) {
                throw Error(Errc::NonConvergence,
                            "path reached a boundary node the solver never resolved");
            }
            cost += static_cast<long double>(problem.running_cost(rho)) * opts.dt;
        }
        PathOutcome out;
        out.mean = static_cast<double>(cost / (static_cast<long double>(steps) *
                                               static_cast<long double>(opts.dt)));
        out.escapes = escapes;
        return out;
    };

    std::vector<PathOutcome> outcomes(static_cast<std::size_t>(opts.paths));
    int workers = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (workers > opts.paths) workers = opts.paths;

    if (workers == 1) {
        for (int p = 0; p < opts.paths; ++p) outcomes[static_cast<std::size_t>(p)] = runPath(p);
    } else {
        std::atomic<int> nextPath{0};
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (;;) {
                        const int p = nextPath.fetch_add(1);
                        if (p >= opts.paths) break;
                        outcomes[static_cast<std::size_t>(p)] = runPath(p);
                    }
                } catch (...) {
                    failures[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& failure : failures) {
            if (failure) std::rethrow_exception(failure);
        }
    }

    McResult result;
    std::int64_t escapes = 0;
    long double sum = 0.0L;
    for (const auto& outcome : outcomes) {
        sum += outcome.mean;
        escapes += outcome.escapes;
    }
    result.estimate = static_cast<double>(sum / opts.paths);
    result.escapes = escapes;
    if (opts.paths > 1) {
        long double var = 0.0L;
        for (const auto& outcome : outcomes) {
            const long double diff = outcome.mean - result.estimate;
            var += diff * diff;
        }
        var /= (opts.paths - 1);
        result.stderrEstimate =
            static_cast<double>(std::sqrt(static_cast<double>(var)) / std::sqrt(opts.paths));
    }

    const std::int64_t totalSteps = steps * opts.paths;
    if (escapes * 1000 > totalSteps) {
        throw Error(Errc::NonConvergence,
                    "paths left the grid repeatedly; enlarge the domain before averaging");
    }
    return result;
}

McResult mc_ergodic_cost(const CorrectorSolution& solution, const CorrectorProblem& problem,
                         double horizon, double dt, std::uint64_t seed) {
    McOptions opts;
    opts.horizon = horizon;
    opts.dt = dt;
    opts.seed = seed;
    return mc_ergodic_cost(solution, problem, opts);
}

}  // namespace corrector
