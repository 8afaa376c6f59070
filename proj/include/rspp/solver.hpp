#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rspp/estimators.hpp"
#include "rspp/model.hpp"
#include "rspp/parallel.hpp"

namespace rspp {

struct SolverConfig {
    int max_iterations = 100;
    double step_tolerance = 1e-4;   // [m] on the state increment norm
    double min_weight_floor = 0.0;  // lower clamp on IRLS weights (before /s^2)
};

/// Result of a nonlinear epoch solve.
struct SolveReport {
    StateEstimate state;
    std::vector<Constellation> clock_order;
    std::vector<double> residuals;             // y at the final state [m]
    std::vector<double> normalized_residuals;  // residual / scale
    std::vector<double> weights;               // weight(kind, normalized residual)
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;    // sum of cost over normalized residuals
    double wall_time_s = 0.0;  // around the solve only
};

/// Result of an IRLS solve on a fixed linear model.
struct LinearSolveReport {
    Eigen::VectorXd x;
    std::vector<double> objective_trace;  // objective after each solve
    int iterations = 0;
    bool converged = false;
};

/// Single weighted least-squares solve: argmin ||W^{1/2}(y - Hx)||^2 with
/// W = diag(w). Throws SingularNormalMatrix when cond(H^T W H) > 1e12 (or the
/// matrix is rank-deficient), ValidationError on shape/positivity misuse.
Eigen::VectorXd wls_step(const Eigen::MatrixXd& H, const Eigen::VectorXd& w,
                         const Eigen::VectorXd& y);

/// Sum of cost(kind, r) over normalized residuals.
double objective_value(EstimatorKind kind, std::span<const double> normalized_residuals);
double objective_value(EstimatorKind kind, const Eigen::VectorXd& normalized_residuals);

/// IRLS on a fixed linear model y ~ Hx with per-row scales. First pass uses
/// unit weights; afterwards W_ii = weight((y - Hx)_i / s_i) / s_i^2. Stops
/// when the iterate moves less than step_tolerance.
LinearSolveReport irls_solve_linear(const Eigen::VectorXd& y, const Eigen::MatrixXd& H,
                                    const Eigen::VectorXd& scales, EstimatorKind kind,
                                    const SolverConfig& config = {});

/// Zero position, zero clock bias per constellation present in the epoch.
StateEstimate cold_start(const EpochObservations& epoch);

/// Nonlinear epoch solve: relinearize + one weighted solve per iteration
/// (unit weights on the first). Throws ValidationError on a malformed epoch,
/// then InsufficientObservations, DegenerateGeometry, SingularNormalMatrix,
/// or DivergedSolution.
SolveReport irls_solve(const EpochObservations& epoch, EstimatorKind kind,
                       const StateEstimate& initial, const SolverConfig& config = {});

/// Per-epoch outcome of a batch solve; failures carry the error text instead
/// of aborting the batch.
struct EpochSolveResult {
    int epoch_index = 0;
    bool ok = false;
    SolveReport report;
    std::string error;
};

/// Solves each epoch independently (cold start unless `initial` is given).
/// Execution::OpenMp distributes epochs across threads; results are
/// identical to Execution::Serial.
std::vector<EpochSolveResult> solve_epochs(std::span<const EpochObservations> epochs,
                                           EstimatorKind kind, const SolverConfig& config,
                                           Execution exec,
                                           const std::optional<StateEstimate>& initial = {});

}  // namespace rspp
