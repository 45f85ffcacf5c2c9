#include "corrector/oracles.hpp"

#include <cmath>
#include <limits>

#include "corrector/errors.hpp"

namespace corrector {

namespace {

bool diagonal_within(const Eigen::MatrixXd& m, double tol) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i != j && std::abs(m(i, j)) > tol) return false;
        }
    }
    return true;
}

}  // namespace

double OneDimSolution::value(double rho) const {
    const double a2 = alphaBar * alphaBar;
    if (rho > rhoPlus) {
        const double edge = (aBar * rhoPlus * rhoPlus -
                             sigma * sigma * rhoPlus * rhoPlus * rhoPlus * rhoPlus / 12.0) /
                                a2 +
                            slopeShift * rhoPlus;
        return edge + lambda10 * (rho - rhoPlus);
    }
    if (rho < -rhoPlus) {
        const double edge = (aBar * rhoPlus * rhoPlus -
                             sigma * sigma * rhoPlus * rhoPlus * rhoPlus * rhoPlus / 12.0) /
                                a2 -
                            slopeShift * rhoPlus;
        return edge + lambda01 * (-rho - rhoPlus);
    }
    return (aBar * rho * rho - sigma * sigma * rho * rho * rho * rho / 12.0) / a2 +
           slopeShift * rho;
}

double OneDimSolution::derivative(double rho) const {
    if (rho > rhoPlus) return lambda10;
    if (rho < -rhoPlus) return -lambda01;
    const double a2 = alphaBar * alphaBar;
    return (2.0 * aBar * rho - sigma * sigma * rho * rho * rho / 3.0) / a2 + slopeShift;
}

double OneDimSolution::second_derivative(double rho) const {
    if (std::abs(rho) > rhoPlus) return 0.0;
    const double a2 = alphaBar * alphaBar;
    return (2.0 * aBar - sigma * sigma * rho * rho) / a2;
}

OneDimSolution solve_1d_closed_form(double sigmaEff, double alphaBar, double lambda01,
                                    double lambda10) {
    if (!std::isfinite(sigmaEff) || !std::isfinite(alphaBar) || !std::isfinite(lambda01) ||
        !std::isfinite(lambda10)) {
        throw Error(Errc::DegenerateInput, "closed form requires finite scalar inputs");
    }
    if (sigmaEff == 0.0 || alphaBar == 0.0) {
        throw Error(Errc::DegenerateInput, "closed form requires nonzero sigma and alpha");
    }
    if (lambda01 < 0.0 || lambda10 < 0.0) {
        throw Error(Errc::DegenerateInput, "transaction costs must be nonnegative");
    }

    OneDimSolution out;
    out.sigma = sigmaEff;
    out.alphaBar = alphaBar;
    out.lambda01 = lambda01;
    out.lambda10 = lambda10;
    const double s2 = sigmaEff * sigmaEff;
    const double a2 = alphaBar * alphaBar;
    out.rhoPlus = std::cbrt(3.0 * a2 * (lambda10 + lambda01) / (4.0 * s2));
    out.aBar = s2 * out.rhoPlus * out.rhoPlus / 2.0;
    out.slopeShift = (lambda10 - lambda01) / 2.0;
    return out;
}

double SeparableSolution::value(const Eigen::VectorXd& rho) const {
    double total = 0.0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        total += axes[a].value(rho(static_cast<Eigen::Index>(a)));
    }
    return total;
}

SeparableSolution separable_solution(const std::vector<OneDimSolution>& perAxis) {
    if (perAxis.empty()) {
        throw Error(Errc::DegenerateInput, "separable solution needs at least one axis");
    }
    SeparableSolution out;
    out.axes = perAxis;
    for (const auto& axis : perAxis) out.aHat += axis.aBar;
    return out;
}

SeparableSolution separable_solution(const CorrectorProblem& problem) {
    const int d = problem.d();
    const double scale = std::max({1.0, problem.sigmaEff.cwiseAbs().maxCoeff(),
                                   problem.alphaBar.cwiseAbs().maxCoeff()});
    const double tol = 1e-14 * scale;
    if (!diagonal_within(problem.sigmaEff, tol) || !diagonal_within(problem.alphaBar, tol)) {
        throw Error(Errc::InapplicableStructure,
                    "separable reference requires diagonal volatility and diffusion");
    }
    for (int i = 1; i <= d; ++i) {
        for (int j = 1; j <= d; ++j) {
            if (i != j && std::isfinite(problem.lambda(i, j))) {
                throw Error(Errc::InapplicableStructure,
                            "separable reference requires infinite asset-asset costs");
            }
        }
    }
    std::vector<OneDimSolution> axes;
    axes.reserve(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        const double l01 = problem.lambda(0, a + 1);
        const double l10 = problem.lambda(a + 1, 0);
        if (!std::isfinite(l01) || !std::isfinite(l10)) {
            throw Error(Errc::InapplicableStructure,
                        "separable reference requires finite cash costs on every axis");
        }
        axes.push_back(
            solve_1d_closed_form(problem.sigmaEff(a, a), problem.alphaBar(a, a), l01, l10));
    }
    return separable_solution(axes);
}

}  // namespace corrector
