#include "rspp/solver.hpp"

#include <chrono>
#include <cmath>

namespace rspp {

namespace {

constexpr double kEarthShellRadius = 6371000.0;  // [m]
constexpr double kShellHalfWidth = 1.0e6;        // [m] sanity envelope
constexpr double kHardPositionCap = 5.0e7;       // [m] blow-up guard

bool inside_shell(const EcefPosition& p) {
    return std::abs(norm(p) - kEarthShellRadius) <= kShellHalfWidth;
}

void check_sane(const StateEstimate& state, bool& entered_shell) {
    const double r = norm(state.position);
    if (!std::isfinite(r)) throw DivergedSolution("state became non-finite");
    for (const auto& [c, b] : state.clock_bias) {
        if (!std::isfinite(b)) throw DivergedSolution("clock bias became non-finite");
    }
    if (inside_shell(state.position)) {
        entered_shell = true;
    } else if (entered_shell) {
        throw DivergedSolution("position left the Earth-surface shell (+-1000 km)");
    } else if (r > kHardPositionCap) {
        throw DivergedSolution("position norm exceeded 5e7 m before reaching the shell");
    }
}

Eigen::VectorXd irls_weights(EstimatorKind kind, const Eigen::VectorXd& normalized,
                             const Eigen::VectorXd& scales, const SolverConfig& config,
                             bool first_pass) {
    const Eigen::Index n = normalized.size();
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double base =
            first_pass ? 1.0
                       : std::max(weight(kind, normalized(i)), config.min_weight_floor);
        w(i) = base / (scales(i) * scales(i));
    }
    return w;
}

}  // namespace

Eigen::VectorXd wls_step(const Eigen::MatrixXd& H, const Eigen::VectorXd& w,
                         const Eigen::VectorXd& y) {
    const Eigen::Index n = H.rows(), d = H.cols();
    if (w.size() != n || y.size() != n) {
        throw ValidationError("wls_step: weight/residual length mismatch");
    }
    if (n < d) throw ValidationError("wls_step: fewer rows than unknowns");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(w(i) > 0.0) || !std::isfinite(w(i))) {
            throw ValidationError("wls_step: weights must be positive and finite");
        }
    }

    const Eigen::VectorXd sqrt_w = w.cwiseSqrt();
    const Eigen::MatrixXd A = sqrt_w.asDiagonal() * H;
    const Eigen::VectorXd b = sqrt_w.cwiseProduct(y);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(d - 1);
    // cond(H^T W H) = (smax/smin)^2
    if (!(smin > 0.0) || (smax / smin) * (smax / smin) > 1e12) {
        throw SingularNormalMatrix("normal matrix singular or condition number > 1e12");
    }
    return svd.solve(b);
}

double objective_value(EstimatorKind kind, std::span<const double> normalized_residuals) {
    double total = 0.0;
    for (double r : normalized_residuals) total += cost(kind, r);
    return total;
}

double objective_value(EstimatorKind kind, const Eigen::VectorXd& normalized_residuals) {
    return objective_value(
        kind, std::span<const double>(normalized_residuals.data(),
                                      static_cast<std::size_t>(normalized_residuals.size())));
}

LinearSolveReport irls_solve_linear(const Eigen::VectorXd& y, const Eigen::MatrixXd& H,
                                    const Eigen::VectorXd& scales, EstimatorKind kind,
                                    const SolverConfig& config) {
    const Eigen::Index n = H.rows(), d = H.cols();
    if (y.size() != n || scales.size() != n) {
        throw ValidationError("irls_solve_linear: shape mismatch");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(scales(i) > 0.0)) throw ValidationError("irls_solve_linear: scales must be > 0");
    }

    LinearSolveReport report;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const Eigen::VectorXd normalized = (y - H * x).cwiseQuotient(scales);
        const Eigen::VectorXd w = irls_weights(kind, normalized, scales, config, iter == 1);
        const Eigen::VectorXd x_next = wls_step(H, w, y);
        report.objective_trace.push_back(
            objective_value(kind, (y - H * x_next).cwiseQuotient(scales)));
        const double step = (x_next - x).norm();
        x = x_next;
        report.iterations = iter;
        if (step < config.step_tolerance) {
            report.converged = true;
            break;
        }
    }
    report.x = x;
    return report;
}

StateEstimate cold_start(const EpochObservations& epoch) {
    StateEstimate state;
    for (Constellation c : epoch.constellations()) state.clock_bias[c] = 0.0;
    return state;
}

SolveReport irls_solve(const EpochObservations& epoch, EstimatorKind kind,
                       const StateEstimate& initial, const SolverConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    validate(epoch);

    SolveReport report;
    StateEstimate state = initial;
    bool entered_shell = inside_shell(state.position);

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        const LinearizedSystem sys = build_linear_system(epoch, state);
        const Eigen::VectorXd normalized = sys.y.cwiseQuotient(sys.scales);
        const Eigen::VectorXd w =
            irls_weights(kind, normalized, sys.scales, config, iter == 1);
        const Eigen::VectorXd dx = wls_step(sys.H, w, sys.y);
        apply_increment(state, dx, sys.clock_order);
        check_sane(state, entered_shell);
        report.iterations = iter;
        if (dx.norm() < config.step_tolerance) {
            report.converged = true;
            break;
        }
    }

    // report residuals/weights/objective at the final state
    const LinearizedSystem sys = build_linear_system(epoch, state);
    const Eigen::VectorXd normalized = sys.y.cwiseQuotient(sys.scales);
    report.state = state;
    report.clock_order = sys.clock_order;
    report.residuals.assign(sys.y.data(), sys.y.data() + sys.y.size());
    report.normalized_residuals.assign(normalized.data(), normalized.data() + normalized.size());
    report.weights.resize(static_cast<std::size_t>(normalized.size()));
    for (Eigen::Index i = 0; i < normalized.size(); ++i) {
        report.weights[static_cast<std::size_t>(i)] = weight(kind, normalized(i));
    }
    report.objective = objective_value(kind, normalized);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::vector<EpochSolveResult> solve_epochs(std::span<const EpochObservations> epochs,
                                           EstimatorKind kind, const SolverConfig& config,
                                           Execution exec,
                                           const std::optional<StateEstimate>& initial) {
    std::vector<EpochSolveResult> results(epochs.size());
    parallel_for(epochs.size(), exec, [&](std::size_t i) {
        const EpochObservations& epoch = epochs[i];
        EpochSolveResult& slot = results[i];
        slot.epoch_index = epoch.epoch_index;
        try {
            const StateEstimate start = initial ? *initial : cold_start(epoch);
            slot.report = irls_solve(epoch, kind, start, config);
            slot.ok = true;
        } catch (const Error& e) {
            slot.ok = false;
            slot.error = e.what();
        }
    });
    return results;
}

}  // namespace rspp
