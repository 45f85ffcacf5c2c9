#include "corrector/support_function.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace corrector {

namespace {

constexpr double kPivotEps = 1e-11;

// max c^T x s.t. A x <= b, x >= 0, b >= 0 (slack basis is feasible).
// Returns the optimum; throws UnboundedDirection if the objective is
// unbounded. Bland's rule keeps the pivoting finite under degeneracy.
double simplex_max(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    // Tableau: constraint rows [A | I | b], cost row [c | 0 | 0].
    Eigen::MatrixXd T(m + 1, n + m + 1);
    T.setZero();
    T.block(0, 0, m, n) = A;
    T.block(0, n, m, m).setIdentity();
    T.block(0, n + m, m, 1) = b;
    T.block(m, 0, 1, n) = c.transpose();

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    const double scale = std::max({1.0, A.cwiseAbs().maxCoeff(), c.cwiseAbs().maxCoeff()});
    const double eps = kPivotEps * scale;

    for (int guard = 0; guard < 10000; ++guard) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j) {
            if (T(m, j) > eps) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return -T(m, n + m);

        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > eps) {
                const double ratio = T(i, n + m) / T(i, enter);
                if (ratio < best - eps || (ratio < best + eps && (leave < 0 || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw Error(Errc::UnboundedDirection, "support function is infinite");

        T.row(leave) /= T(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i != leave && T(i, enter) != 0.0) T.row(i) -= T(i, enter) * T.row(leave);
        }
        basis[leave] = enter;
    }
    throw Error(Errc::NonConvergence, "simplex did not terminate");
}

}  // namespace

GradientPolytope build_gradient_polytope(const Eigen::MatrixXd& lambda) {
    const int d = static_cast<int>(lambda.rows()) - 1;
    if (d < 1 || lambda.cols() != lambda.rows())
        throw Error(Errc::DegenerateInput, "lambda must be square of size d+1");
    GradientPolytope poly;
    poly.d = d;
    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> bs;
    for (int i = 0; i <= d; ++i) {
        for (int j = 0; j <= d; ++j) {
            if (i == j) continue;
            const double lam = lambda(i, j);
            if (!std::isfinite(lam)) continue;
            if (lam < 0.0) throw Error(Errc::DegenerateInput, "costs must be nonnegative");
            Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(d);
            if (i > 0) g[i - 1] += 1.0;
            if (j > 0) g[j - 1] -= 1.0;
            rows.push_back(g);
            bs.push_back(lam);
            poly.pairs.emplace_back(i, j);
        }
    }
    poly.G.resize(static_cast<Eigen::Index>(rows.size()), d);
    poly.b.resize(static_cast<Eigen::Index>(bs.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
        poly.G.row(static_cast<Eigen::Index>(k)) = rows[k];
        poly.b[static_cast<Eigen::Index>(k)] = bs[k];
    }
    return poly;
}

double delta_C(const GradientPolytope& poly, const Eigen::VectorXd& rho) {
    if (rho.size() != poly.d) throw Error(Errc::DegenerateInput, "rho dimension mismatch");
    if (poly.G.rows() == 0) {
        // No finite constraint: C = R^d, support finite only at rho = 0.
        if (rho.isZero(0.0)) return 0.0;
        throw Error(Errc::UnboundedDirection, "support function is infinite");
    }
    // Split u = x+ - x- to get nonnegative variables.
    const int d = poly.d;
    const int m = static_cast<int>(poly.G.rows());
    Eigen::MatrixXd A(m, 2 * d);
    A.block(0, 0, m, d) = poly.G;
    A.block(0, d, m, d) = -poly.G;
    Eigen::VectorXd c(2 * d);
    c.head(d) = rho;
    c.tail(d) = -rho;
    return simplex_max(A, poly.b, c);
}

double delta_C(const Eigen::MatrixXd& lambda, const Eigen::VectorXd& rho) {
    return delta_C(build_gradient_polytope(lambda), rho);
}

std::vector<Eigen::VectorXd> polytope_vertices(const GradientPolytope& poly) {
    const int d = poly.d;
    const int m = static_cast<int>(poly.G.rows());
    std::vector<Eigen::VectorXd> vertices;
    const double scale = std::max(1.0, poly.b.size() > 0 ? poly.b.maxCoeff() : 1.0);
    const double tol = 1e-9 * scale;

    std::vector<int> pick(d);
    auto try_basis = [&]() {
        Eigen::MatrixXd Gs(d, d);
        Eigen::VectorXd bs(d);
        for (int a = 0; a < d; ++a) {
            Gs.row(a) = poly.G.row(pick[a]);
            bs[a] = poly.b[pick[a]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(Gs);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) return;
        const Eigen::VectorXd u = lu.solve(bs);
        if (((poly.G * u - poly.b).array() > tol).any()) return;
        for (const auto& v : vertices)
            if ((v - u).norm() <= tol) return;
        vertices.push_back(u);
    };
    // enumerate all d-subsets of rows
    std::vector<int> idx(d);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == d) {
            pick = idx;
            try_basis();
            return;
        }
        for (int k = start; k < m; ++k) {
            idx[depth] = k;
            rec(k + 1, depth + 1);
        }
    };
    if (m >= d) rec(0, 0);
    return vertices;
}

BracketConstants bracket_constants(const Eigen::MatrixXd& lambda, const Eigen::MatrixXd& Q,
                                   const Eigen::MatrixXd& alphaBar) {
    const GradientPolytope poly = build_gradient_polytope(lambda);
    const int d = poly.d;
    // boundedness check along every axis
    for (int a = 0; a < d; ++a) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e[a] = 1.0;
        delta_C(poly, e);
        delta_C(poly, Eigen::VectorXd(-e));
    }

    const auto vertices = polytope_vertices(poly);
    BracketConstants out;
    Eigen::FullPivLU<Eigen::MatrixXd> qlu(Q);
    if (!qlu.isInvertible())
        throw Error(Errc::SingularVolatility, "running-cost quadratic is singular");
    for (const auto& u : vertices) {
        out.K1 = std::max(out.K1, 0.5 * u.dot(qlu.solve(u)));
        out.vertexNorm = std::max(out.vertexNorm, u.norm());
    }
    double r0 = std::numeric_limits<double>::infinity();
    for (Eigen::Index row = 0; row < poly.G.rows(); ++row)
        r0 = std::min(r0, poly.b[row] / poly.G.row(row).norm());
    out.inradius = std::isfinite(r0) ? r0 : 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esQ(Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esA(alphaBar * alphaBar.transpose());
    if (out.inradius > 0.0) {
        out.K2 = esQ.eigenvalues().maxCoeff() / (2.0 * out.inradius * out.inradius) +
                 0.5 * esA.eigenvalues().maxCoeff() * out.vertexNorm * out.vertexNorm;
    } else {
        out.K2 = std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace corrector
