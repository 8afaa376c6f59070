#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rspp/errmodels.hpp"
#include "rspp/model.hpp"
#include "rspp/parallel.hpp"
#include "rspp/solver.hpp"

namespace rspp {

struct ScenarioSatellite {
    std::string id;
    Constellation constellation = Constellation::Gps;
    EcefPosition pos;
};

/// Fixed geometry used to synthesize epochs: a true receiver location plus
/// satellite positions and true clock biases.
struct GeometryScenario {
    EcefPosition receiver_truth;
    std::map<Constellation, double> clock_biases;  // [m]
    std::vector<ScenarioSatellite> satellites;
};

/// Throws ValidationError unless every constellation present has a bias,
/// there are at least state_dimension + 1 satellites, and all sit at least
/// 5 degrees above the receiver's horizon.
void validate(const GeometryScenario& scenario);

// -- deterministic seed derivation ------------------------------------------

std::uint64_t splitmix64(std::uint64_t x);

/// Stream/index mix so that every (trial, alpha, epoch, ...) slot owns an
/// independent seed regardless of evaluation order.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform draw strictly inside (0, 1), identical across platforms for a
/// given engine state.
double uniform01(std::mt19937_64& rng);

// -- samplers ---------------------------------------------------------------

double sample(const GaussianModel& model, std::mt19937_64& rng);   // Box-Muller
double sample(const LogisticModel& model, std::mt19937_64& rng);   // inverse CDF
double sample(const BgmmModel& model, std::mt19937_64& rng);       // component pick
double sample(const StudentTModel& model, std::mt19937_64& rng);   // normal/chi2 ratio
double sample(const DistributionModel& model, std::mt19937_64& rng);

// -- epoch synthesis ----------------------------------------------------------

/// Pseudoranges = true range + constellation clock bias + one error draw per
/// satellite (in listed order) from `error_model`; the scale column is
/// model_scale(error_model). Byte-deterministic in (scenario, model, seed).
EpochObservations generate_epoch(const GeometryScenario& scenario,
                                 const DistributionModel& error_model, std::uint64_t seed,
                                 int epoch_index = 0);

// -- scale-mismatch Monte Carlo ------------------------------------------------

struct MismatchSweepConfig {
    double s_true = 1.0;                 // generating logistic scale [m]
    std::vector<double> alphas;          // assumed/true scale ratios; default grid if empty
    int trials_per_alpha = 2000;
    std::uint64_t seed = 0;
    SolverConfig solver;
};

struct AlphaRecord {
    double alpha = 0.0;
    double rmse_3d = 0.0;          // over successful trials
    double std_3d = 0.0;
    double mean_iterations = 0.0;
    int failed_trials = 0;         // solver exceptions
};

struct SweepResult {
    std::vector<AlphaRecord> records;
};

/// 21 log-spaced points over [0.1, 10].
std::vector<double> default_alpha_grid();

/// For each alpha: trials with logistic(0, s_true) errors, solved with the
/// logistic-cost estimator under assumed scale alpha * s_true from cold
/// start. Per-trial seeds come from mix_seed(seed, alpha_index, trial), so
/// Serial and OpenMp execution give identical results.
SweepResult scale_mismatch_sweep(const GeometryScenario& scenario,
                                 const MismatchSweepConfig& config,
                                 Execution exec = Execution::Serial);

}  // namespace rspp
