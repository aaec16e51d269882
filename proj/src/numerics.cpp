#include "bclass/numerics.hpp"

#include <cmath>

namespace bclass {

double log_sum_exp(const Vector& v) {
    if (v.size() == 0) throw std::invalid_argument("empty vector");
    const double m = v.maxCoeff();
    if (!std::isfinite(m)) {
        if (m == -std::numeric_limits<double>::infinity()) return m;
        throw std::invalid_argument("non-finite entry in log_sum_exp");
    }
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v[i] - m);
    return m + std::log(s);
}

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("cholesky: matrix not square");
    const Eigen::Index n = a.rows();
    Matrix l = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double d = a(j, j) - l.row(j).head(j).squaredNorm();
        if (!(d > 0.0)) throw NotPdError(static_cast<int>(j));
        d = std::sqrt(d);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
        }
    }
    return l;
}

double mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
    if (x.size() != mean.size() || cov.rows() != x.size() || cov.cols() != x.size()) {
        throw std::invalid_argument("mvn_logpdf: dimension mismatch");
    }
    const Matrix l = cholesky(cov);
    const Vector z = l.triangularView<Eigen::Lower>().solve(x - mean);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += std::log(l(i, i));
    const double d = static_cast<double>(x.size());
    return -0.5 * z.squaredNorm() - log_det - 0.5 * d * std::log(2.0 * M_PI);
}

Vector finite_diff_grad(const std::function<double(const Vector&)>& f,
                        const Vector& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be positive");
    Vector g(x.size());
    Vector xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw std::runtime_error("finite_diff_grad: non-finite evaluation at coordinate " +
                                     std::to_string(i));
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Vector normal_vector(RngStream& rng, Eigen::Index d) {
    Vector v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
    return v;
}

}  // namespace bclass
