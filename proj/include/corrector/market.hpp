#pragma once

#include <Eigen/Dense>

#include "corrector/errors.hpp"

namespace corrector {

// Frictionless market with d risky assets, constant coefficients, and a
// power-utility investor maximising expected discounted utility of
// consumption. Transaction costs enter only through lambda, which scales
// with the small parameter epsilon elsewhere in the pipeline.
struct MarketParams {
    int d = 0;
    Eigen::VectorXd mu;      // total drift per asset
    double r = 0.0;          // money-market rate
    Eigen::MatrixXd sigma;   // d x d volatility, rows = assets
    double beta = 0.0;       // discount rate
    double p = 0.0;          // risk aversion exponent, 0 < p < 1
    Eigen::MatrixXd lambda;  // (d+1) x (d+1) proportional costs, inf = no transfer
    double epsilon = 0.0;    // cost scale, lambda^{i,j} * epsilon^3 per unit moved
};

// Closed-form solution of the frictionless problem. The value function is
// v(z) = vK * z^p / p, optimal holdings y = pi * z, consumption c = c0 * z.
struct MertonSolution {
    int d = 0;
    Eigen::VectorXd pi;     // fractions of wealth held in each risky asset
    double kappa1 = 0.0;    // growth rate, r + (1-p)/2 * |sigma^T pi|^2
    double c0 = 0.0;        // consumption rate, (beta - p*kappa1) / (1-p)
    double vK = 0.0;        // value coefficient, c0^(p-1)
    double p = 0.0;
    double r = 0.0;
    double beta = 0.0;
    double excessDotPi = 0.0;    // pi . (mu - r 1)
    double sigmaTpiSq = 0.0;     // |sigma^T pi|^2

    double value(double z) const;
    // eta(z) = -v_z / v_zz = z / (1-p); this returns the 1/(1-p) factor.
    double eta_factor() const { return 1.0 / (1.0 - p); }
};

// Second-order term of the expansion v - eps^2 * u + o(eps^2): u = u0 * z^p
// with A(u0 z^p) = kappa2 * u0 * z^p matching v_z * eta * aBar.
struct SecondCorrector {
    double kappa2 = 0.0;
    double u0 = 0.0;
};

MertonSolution solve_merton(const MarketParams& params);

// alphaBar = (1-p) (I - pi 1^T) diag(pi) sigma, the constant diffusion of the
// normalised deviation process rho. Throws DegenerateDiffusion when the
// result is singular (sum pi = 1 or a zero holding).
Eigen::MatrixXd effective_diffusion(const MertonSolution& merton, const Eigen::MatrixXd& sigma);

SecondCorrector second_corrector_value(const MertonSolution& merton, double aBar);

// Expanded value function vK z^p / p - eps^2 u0 z^p at wealth z.
double expansion_value(const MertonSolution& merton, double aBar, double eps, double z);

// Maps no-transaction points from rho coordinates to asset holdings at
// wealth z: y = pi z + eps (z / (1-p)) rho. Rows of points are rho vectors.
Eigen::MatrixXd map_nt_region(const MertonSolution& merton, double eps, double z,
                              const Eigen::MatrixXd& points);

}  // namespace corrector
