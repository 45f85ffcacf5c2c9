#pragma once

#include <Eigen/Dense>
#include <vector>

#include "corrector/errors.hpp"

namespace corrector {

// The closed convex set of admissible gradients
//   C = { u in R^d : u_i - u_j <= lambda^{i,j} for all i != j, u_0 := 0 },
// where lambda is the (d+1)x(d+1) cost matrix and infinite entries drop the
// constraint. delta_C is its support function.
struct GradientPolytope {
    int d = 0;
    Eigen::MatrixXd G;  // one row per finite constraint, G u <= b
    Eigen::VectorXd b;
    std::vector<std::pair<int, int>> pairs;  // (i,j) labels per row
};

GradientPolytope build_gradient_polytope(const Eigen::MatrixXd& lambda);

// delta_C(rho) = sup { u . rho : u in C }, solved with a dense simplex using
// Bland's pivoting rule. Throws UnboundedDirection when C is unbounded in
// the direction rho.
double delta_C(const Eigen::MatrixXd& lambda, const Eigen::VectorXd& rho);
double delta_C(const GradientPolytope& poly, const Eigen::VectorXd& rho);

// All vertices of C by basis enumeration (d <= 3 keeps this tiny).
std::vector<Eigen::VectorXd> polytope_vertices(const GradientPolytope& poly);

// Constants of the sub/supersolution bracket for the discounted equation,
//   (delta_C(rho) - K1)^+  <=  w_eta(rho)  <=  K2 / eta + delta_C(rho):
//
//   K1 = sup_rho (delta_C(rho) - rho^T Q rho / 2) = max_{u in vert C} u^T Q^{-1} u / 2,
//        so that the subsolution stays below the running cost everywhere;
//   K2 = lambda_max(Q) / (2 r0^2) + lambda_max(alphaBar alphaBar^T) L^2 / 2,
//        covering the running cost on {delta_C < 1} (contained in the ball
//        of radius 1/r0, r0 = inradius of C) plus the curvature term of the
//        capped supersolution, whose a.e. Hessian is grad grad^T with
//        gradients of norm at most L = max vertex norm.
//
// Q is the running-cost quadratic (sigma^T sigma by default). r0 = 0, and
// hence K2 = +inf, when some finite cost is zero; the upper bound is vacuous
// then. Requires C bounded (UnboundedDirection otherwise).
struct BracketConstants {
    double K1 = 0.0;
    double K2 = 0.0;
    double inradius = 0.0;
    double vertexNorm = 0.0;  // L
};

BracketConstants bracket_constants(const Eigen::MatrixXd& lambda, const Eigen::MatrixXd& Q,
                                   const Eigen::MatrixXd& alphaBar);

}  // namespace corrector
