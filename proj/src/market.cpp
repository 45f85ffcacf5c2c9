#include "corrector/market.hpp"

#include <cmath>

namespace corrector {

double MertonSolution::value(double z) const { return vK * std::pow(z, p) / p; }

MertonSolution solve_merton(const MarketParams& params) {
    const int d = params.d;
    if (d < 1) throw Error(Errc::DegenerateInput, "market needs at least one asset");
    if (params.mu.size() != d || params.sigma.rows() != d || params.sigma.cols() != d)
        throw Error(Errc::DegenerateInput, "mu/sigma sizes do not match asset count");
    if (!(params.p > 0.0 && params.p < 1.0))
        throw Error(Errc::DegenerateInput, "risk aversion exponent must lie in (0,1)");
    if (!(params.beta > 0.0)) throw Error(Errc::DegenerateInput, "discount rate must be positive");

    const Eigen::MatrixXd ss = params.sigma * params.sigma.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ss);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw Error(Errc::SingularVolatility, "sigma sigma^T is not invertible");

    const Eigen::VectorXd excess = params.mu.array() - params.r;
    MertonSolution sol;
    sol.d = d;
    sol.p = params.p;
    sol.r = params.r;
    sol.beta = params.beta;
    sol.pi = lu.solve(excess) / (1.0 - params.p);
    sol.excessDotPi = sol.pi.dot(excess);
    sol.sigmaTpiSq = (params.sigma.transpose() * sol.pi).squaredNorm();
    sol.kappa1 = params.r + 0.5 * (1.0 - params.p) * sol.sigmaTpiSq;
    sol.c0 = (params.beta - params.p * sol.kappa1) / (1.0 - params.p);
    if (!(sol.c0 > 0.0))
        throw Error(Errc::NonFiniteValue,
                    "beta <= p * kappa1, the frictionless value is not finite");
    sol.vK = std::pow(sol.c0, params.p - 1.0);
    return sol;
}

Eigen::MatrixXd effective_diffusion(const MertonSolution& merton, const Eigen::MatrixXd& sigma) {
    const int d = merton.d;
    if (sigma.rows() != d || sigma.cols() != d)
        throw Error(Errc::DegenerateInput, "sigma size does not match solution");
    const Eigen::MatrixXd proj =
        Eigen::MatrixXd::Identity(d, d) - merton.pi * Eigen::RowVectorXd::Ones(d);
    const Eigen::MatrixXd alphaBar =
        (1.0 - merton.p) * proj * merton.pi.asDiagonal() * sigma;
    const Eigen::MatrixXd aa = alphaBar * alphaBar.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(aa);
    const double floor = 1e-14 * std::max(1.0, es.eigenvalues().maxCoeff());
    if (!(es.eigenvalues().minCoeff() > floor))
        throw Error(Errc::DegenerateDiffusion,
                    "effective diffusion is singular (check sum(pi) != 1 and pi_i != 0)");
    return alphaBar;
}

SecondCorrector second_corrector_value(const MertonSolution& merton, double aBar) {
    const double p = merton.p;
    SecondCorrector sc;
    sc.kappa2 = merton.beta - p * (merton.r + merton.excessDotPi - merton.c0) +
                0.5 * p * (1.0 - p) * merton.sigmaTpiSq;
    if (!(sc.kappa2 > 0.0))
        throw Error(Errc::IllPosedCorrector, "second corrector rate kappa2 is not positive");
    sc.u0 = merton.vK * aBar / ((1.0 - p) * sc.kappa2);
    return sc;
}

double expansion_value(const MertonSolution& merton, double aBar, double eps, double z) {
    if (!(z > 0.0)) throw Error(Errc::DegenerateInput, "wealth must be positive");
    const SecondCorrector sc = second_corrector_value(merton, aBar);
    const double zp = std::pow(z, merton.p);
    return merton.vK * zp / merton.p - eps * eps * sc.u0 * zp;
}

Eigen::MatrixXd map_nt_region(const MertonSolution& merton, double eps, double z,
                              const Eigen::MatrixXd& points) {
    if (!(z > 0.0)) throw Error(Errc::DegenerateInput, "wealth must be positive");
    if (points.cols() != merton.d)
        throw Error(Errc::DegenerateInput, "points must have one column per asset");
    const double scale = eps * z * merton.eta_factor();
    Eigen::MatrixXd mapped(points.rows(), points.cols());
    for (Eigen::Index row = 0; row < points.rows(); ++row)
        mapped.row(row) = (merton.pi * z).transpose() + scale * points.row(row);
    return mapped;
}

}  // namespace corrector
