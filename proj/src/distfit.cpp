#include "rspp/distfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace rspp {

namespace {

void check_samples(std::span<const double> samples, std::size_t min_n, const char* fit) {
    if (samples.size() < min_n) {
        throw InsufficientSamples(std::string(fit) + ": need at least " +
                                  std::to_string(min_n) + " samples, got " +
                                  std::to_string(samples.size()));
    }
    for (double x : samples) {
        if (!std::isfinite(x)) throw NonFiniteSample(std::string(fit) + ": non-finite sample");
    }
    const double first = samples[0];
    bool spread = false;
    for (double x : samples) {
        if (x != first) {
            spread = true;
            break;
        }
    }
    if (!spread) throw DegenerateSample(std::string(fit) + ": all samples identical");
}

double sample_mean(std::span<const double> samples) {
    double total = 0.0;
    for (double x : samples) total += x;
    return total / static_cast<double>(samples.size());
}

// population convention (divisor n), the MLE
double sample_std(std::span<const double> samples) {
    const double mu = sample_mean(samples);
    double ss = 0.0;
    for (double x : samples) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(samples.size()));
}

double sample_median(std::span<const double> samples) {
    std::vector<double> v(samples.begin(), samples.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid) - 1, v.end());
    return 0.5 * (v[mid - 1] + hi);
}

}  // namespace

double digamma(double x) {
    // recurrence up into the asymptotic regime, then the Stirling series
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    const double series =
        inv2 * (1.0 / 12.0 -
                inv2 * (1.0 / 120.0 -
                        inv2 * (1.0 / 252.0 -
                                inv2 * (1.0 / 240.0 -
                                        inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    return acc + std::log(x) - 0.5 / x - series;
}

FitReport fit_gaussian(std::span<const double> samples) {
    check_samples(samples, 2, "fit_gaussian");
    GaussianModel model{sample_mean(samples), sample_std(samples)};
    FitReport report;
    report.model = model;
    report.log_likelihood = log_likelihood(report.model, samples);
    report.iterations = 1;
    report.converged = true;
    report.sample_count = samples.size();
    return report;
}

FitReport fit_logistic(std::span<const double> samples) {
    check_samples(samples, 2, "fit_logistic");
    const double n = static_cast<double>(samples.size());

    double m = sample_median(samples);
    double s = sample_std(samples) * std::sqrt(3.0) / M_PI;

    const auto loglik = [&](double mm, double ss) {
        return log_likelihood(LogisticModel{mm, ss}, samples);
    };

    double ll = loglik(m, s);
    FitReport report;
    constexpr int kMaxIter = 100;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        report.iterations = iter;
        // gradient and Hessian of the total log-likelihood
        double gm = 0.0, gs = 0.0, hmm = 0.0, hms = 0.0, hss = 0.0;
        for (double x : samples) {
            const double z = (x - m) / s;
            const double u = std::tanh(0.5 * z);
            const double usq = 1.0 - u * u;
            gm += u / s;
            gs += (z * u - 1.0) / s;
            hmm += -0.5 * usq / (s * s);
            hms += -(u + 0.5 * z * usq) / (s * s);
            hss += (1.0 - 2.0 * z * u - 0.5 * z * z * usq) / (s * s);
        }

        if (std::max(std::abs(gm), std::abs(gs)) < 1e-8) {
            report.converged = true;
            break;
        }

        // Newton step; fall back to scaled gradient ascent if the Hessian
        // is not negative definite
        double dm, ds;
        const double det = hmm * hss - hms * hms;
        if (hmm < 0.0 && det > 0.0) {
            dm = -(hss * gm - hms * gs) / det;
            ds = -(-hms * gm + hmm * gs) / det;
        } else {
            dm = gm * s * s / n;
            ds = gs * s * s / n;
        }

        double step = 1.0;
        while (s + step * ds <= 0.0) step *= 0.5;
        double m_next = m, s_next = s, ll_next = ll;
        for (int halving = 0; halving < 60; ++halving) {
            m_next = m + step * dm;
            s_next = s + step * ds;
            ll_next = loglik(m_next, s_next);
            if (std::isfinite(ll_next) && ll_next >= ll - 1e-12 * (1.0 + std::abs(ll))) break;
            step *= 0.5;
        }
        m = m_next;
        s = s_next;
        ll = ll_next;
    }
    if (!report.converged) {
        throw NoConvergence("fit_logistic: Newton did not converge in 100 iterations");
    }

    report.model = LogisticModel{m, s};
    report.log_likelihood = log_likelihood(report.model, samples);
    report.sample_count = samples.size();
    return report;
}

namespace {

constexpr double kNuLo = 0.3;
constexpr double kNuHi = 1000.0;

// d/dnu of the total t log-likelihood at fixed (c, lambda)
double t_profile_score(double nu, std::span<const double> delta_sq, double n) {
    double score =
        n * (0.5 * (digamma(0.5 * (nu + 1.0)) - digamma(0.5 * nu)) - 0.5 / nu);
    for (double d2 : delta_sq) {
        score += -0.5 * std::log1p(d2 / nu) + 0.5 * (nu + 1.0) * d2 / (nu * (nu + d2));
    }
    return score;
}

double maximize_nu(std::span<const double> delta_sq, double n) {
    double lo = kNuLo, hi = kNuHi;
    double g_lo = t_profile_score(lo, delta_sq, n);
    double g_hi = t_profile_score(hi, delta_sq, n);
    if (g_lo <= 0.0) return kNuLo;  // likelihood decreasing from the left edge
    if (g_hi >= 0.0) return kNuHi;  // still increasing at the cap
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);  // bisect in log space
        const double g_mid = t_profile_score(mid, delta_sq, n);
        if (g_mid > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-10 * lo) break;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

FitReport fit_student_t(std::span<const double> samples) {
    check_samples(samples, 3, "fit_student_t");
    const double n = static_cast<double>(samples.size());

    double c = sample_median(samples);
    double lambda = sample_std(samples) * 0.7;
    double nu = 4.0;

    FitReport report;
    std::vector<double> delta_sq(samples.size());
    double ll_prev = -std::numeric_limits<double>::infinity();
    constexpr int kMaxIter = 1000;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        report.iterations = iter;
        const double c_old = c, lambda_old = lambda, nu_old = nu;

        // E-step weights at current parameters
        double sw = 0.0, swx = 0.0;
        for (double x : samples) {
            const double d = (x - c) / lambda;
            const double w = (nu + 1.0) / (nu + d * d);
            sw += w;
            swx += w * x;
        }
        c = swx / sw;  // CM-step: location

        double sws = 0.0;  // CM-step: scale, weights still from old parameters
        for (double x : samples) {
            const double d = (x - c_old) / lambda_old;
            const double w = (nu + 1.0) / (nu + d * d);
            sws += w * (x - c) * (x - c);
        }
        lambda = std::sqrt(sws / n);

        // CML-step: dof maximizes the actual likelihood at the new (c, lambda)
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double d = (samples[i] - c) / lambda;
            delta_sq[i] = d * d;
        }
        nu = maximize_nu(delta_sq, n);

        const double ll = log_likelihood(StudentTModel{c, lambda, nu}, samples);
        const bool params_settled = std::abs(c - c_old) <= 1e-10 * (lambda + std::abs(c)) &&
                                    std::abs(lambda - lambda_old) <= 1e-10 * lambda_old &&
                                    std::abs(nu - nu_old) <= 1e-8 * nu_old;
        const bool ll_settled = std::abs(ll - ll_prev) <= 1e-11 * (1.0 + std::abs(ll));
        ll_prev = ll;
        if (params_settled || ll_settled) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) {
        throw NoConvergence("fit_student_t: ECME did not converge in 1000 iterations");
    }

    report.model = StudentTModel{c, lambda, nu};
    report.log_likelihood = log_likelihood(report.model, samples);
    report.sample_count = samples.size();
    return report;
}

std::pair<FitReport, EmTrace> fit_bgmm_em(std::span<const double> samples,
                                          const std::optional<BgmmModel>& init, double tol,
                                          int max_iterations) {
    check_samples(samples, 5, "fit_bgmm_em");
    const auto n = samples.size();
    const double overall_std = sample_std(samples);

    BgmmModel model;
    if (init) {
        model = *init;
        validate(DistributionModel{model});
    } else {
        // split the sorted sample at the median, one component per half
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end());
        const std::size_t half = n / 2;
        const auto half_stats = [&](std::size_t lo, std::size_t hi, double& mu, double& sig) {
            double total = 0.0;
            for (std::size_t i = lo; i < hi; ++i) total += sorted[i];
            mu = total / static_cast<double>(hi - lo);
            double ss = 0.0;
            for (std::size_t i = lo; i < hi; ++i) ss += (sorted[i] - mu) * (sorted[i] - mu);
            sig = std::sqrt(ss / static_cast<double>(hi - lo));
            if (sig < 1e-3 * overall_std) sig = overall_std;  // degenerate half
        };
        model.p1 = 0.5;
        half_stats(0, half, model.mu1, model.sigma1);
        half_stats(half, n, model.mu2, model.sigma2);
    }

    FitReport report;
    EmTrace trace;
    std::vector<double> resp(n);  // responsibility of component 1
    bool converged = false;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        report.iterations = iter;

        // E-step in log space
        const GaussianModel g1{model.mu1, model.sigma1};
        const GaussianModel g2{model.mu2, model.sigma2};
        const double lp1 = std::log(model.p1), lp2 = std::log(1.0 - model.p1);
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = lp1 + log_pdf(samples[i], g1);
            const double b = lp2 + log_pdf(samples[i], g2);
            const double hi = std::max(a, b);
            const double lse = hi + std::log1p(std::exp(std::min(a, b) - hi));
            resp[i] = std::exp(a - lse);
            ll += lse;
        }
        trace.log_likelihood_per_iteration.push_back(ll);

        const std::size_t t = trace.log_likelihood_per_iteration.size();
        if (t >= 2 && ll - trace.log_likelihood_per_iteration[t - 2] < tol) {
            converged = true;
            break;
        }

        // M-step
        double n1 = 0.0, sx1 = 0.0, sx2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            n1 += resp[i];
            sx1 += resp[i] * samples[i];
            sx2 += (1.0 - resp[i]) * samples[i];
        }
        const double n2 = static_cast<double>(n) - n1;
        if (n1 < 1e-10 * static_cast<double>(n) || n2 < 1e-10 * static_cast<double>(n)) {
            throw ComponentCollapse("fit_bgmm_em: a component weight vanished");
        }
        model.p1 = n1 / static_cast<double>(n);
        model.mu1 = sx1 / n1;
        model.mu2 = sx2 / n2;
        double ss1 = 0.0, ss2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ss1 += resp[i] * (samples[i] - model.mu1) * (samples[i] - model.mu1);
            ss2 += (1.0 - resp[i]) * (samples[i] - model.mu2) * (samples[i] - model.mu2);
        }
        model.sigma1 = std::sqrt(ss1 / n1);
        model.sigma2 = std::sqrt(ss2 / n2);
        if (model.sigma1 < 1e-6 * overall_std || model.sigma2 < 1e-6 * overall_std) {
            throw ComponentCollapse("fit_bgmm_em: component sigma collapsed below 1e-6 * std");
        }
    }
    if (!converged) {
        throw NoConvergence("fit_bgmm_em: EM gain never dropped below tolerance");
    }

    if (model.p1 < 1.0 - model.p1) {
        std::swap(model.mu1, model.mu2);
        std::swap(model.sigma1, model.sigma2);
        model.p1 = 1.0 - model.p1;
    }

    report.model = model;
    report.converged = true;
    report.log_likelihood = log_likelihood(report.model, samples);
    report.sample_count = n;
    return {report, trace};
}

}  // namespace rspp
