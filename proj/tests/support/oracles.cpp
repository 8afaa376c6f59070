#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

Eigen::VectorXd wls_normal_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& w,
                                 const Eigen::VectorXd& y) {
    const Eigen::Index n = H.rows(), d = H.cols();
    std::vector<std::vector<long double>> a(static_cast<std::size_t>(d),
                                            std::vector<long double>(static_cast<std::size_t>(d), 0.0L));
    std::vector<long double> b(static_cast<std::size_t>(d), 0.0L);
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double wi = w(i);
        for (Eigen::Index j = 0; j < d; ++j) {
            const long double hij = H(i, j);
            b[static_cast<std::size_t>(j)] += wi * hij * static_cast<long double>(y(i));
            for (Eigen::Index k = 0; k < d; ++k) {
                a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +=
                    wi * hij * static_cast<long double>(H(i, k));
            }
        }
    }

    const auto dim = static_cast<std::size_t>(d);
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < dim; ++row) {
            if (std::fabs(static_cast<double>(a[row][col])) >
                std::fabs(static_cast<double>(a[pivot][col]))) {
                pivot = row;
            }
        }
        if (a[pivot][col] == 0.0L) throw std::runtime_error("oracle: singular normal matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < dim; ++row) {
            const long double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < dim; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    Eigen::VectorXd x(d);
    for (std::size_t row = dim; row-- > 0;) {
        long double acc = b[row];
        for (std::size_t k = row + 1; k < dim; ++k) {
            acc -= a[row][k] * static_cast<long double>(x(static_cast<Eigen::Index>(k)));
        }
        x(static_cast<Eigen::Index>(row)) = static_cast<double>(acc / a[row][row]);
    }
    return x;
}

double derivative(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b,
                double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    return adaptive(f, a, fa, b, fb, m, fm, simpson(a, fa, b, fb, fm), tol, 60);
}

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::runtime_error("oracle: quantile of empty set");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double fx = cdf(samples[i]);
        d = std::max(d, std::fabs(fx - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(fx - static_cast<double>(i) / n));
    }
    return d;
}

Eigen::Vector2d grid_argmin_2d(const std::function<double(const Eigen::Vector2d&)>& f,
                               double lo, double hi, double step) {
    const int cells = static_cast<int>(std::lround((hi - lo) / step));
    Eigen::Vector2d best(lo, lo);
    double best_val = f(best);
    for (int i = 0; i <= cells; ++i) {
        for (int j = 0; j <= cells; ++j) {
            const Eigen::Vector2d p(lo + step * i, lo + step * j);
            const double v = f(p);
            if (v < best_val) {
                best_val = v;
                best = p;
            }
        }
    }
    return best;
}

std::vector<double> fisher_standard_errors(
    const std::function<double(const std::vector<double>&, double)>& log_pdf,
    const std::vector<double>& theta, const std::vector<double>& samples) {
    const auto dim = static_cast<Eigen::Index>(theta.size());
    std::vector<double> h(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        h[j] = 1e-5 * std::max(1.0, std::fabs(theta[j]));
    }
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd score(dim);
    for (double x : samples) {
        for (std::size_t j = 0; j < theta.size(); ++j) {
            std::vector<double> up = theta, down = theta;
            up[j] += h[j];
            down[j] -= h[j];
            score(static_cast<Eigen::Index>(j)) =
                (log_pdf(up, x) - log_pdf(down, x)) / (2.0 * h[j]);
        }
        info += score * score.transpose();
    }
    const Eigen::MatrixXd cov = info.inverse();
    std::vector<double> se(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        se[j] = std::sqrt(cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
    }
    return se;
}

double gaussian_log_pdf(double mu, double sigma, double x) {
    const double z = (x - mu) / sigma;
    return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
}

double logistic_log_pdf(double m, double s, double x) {
    const double a = std::fabs(x - m) / s;
    return -a - std::log(s) - 2.0 * std::log1p(std::exp(-a));
}

double bgmm_log_pdf(double p1, double mu1, double s1, double mu2, double s2, double x) {
    const double l1 = std::log(p1) + gaussian_log_pdf(mu1, s1, x);
    const double l2 = std::log(1.0 - p1) + gaussian_log_pdf(mu2, s2, x);
    const double hi = std::max(l1, l2);
    return hi + std::log1p(std::exp(std::min(l1, l2) - hi));
}

double student_t_log_pdf(double c, double lambda, double nu, double x) {
    const double z = (x - c) / lambda;
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
           0.5 * std::log(nu * M_PI) - std::log(lambda) -
           0.5 * (nu + 1.0) * std::log1p(z * z / nu);
}

}  // namespace oracle
