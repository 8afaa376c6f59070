#include "rspp/simulate.hpp"

#include <cmath>

#include "rspp/geodesy.hpp"

namespace rspp {

void validate(const GeometryScenario& scenario) {
    EpochObservations probe;
    for (const auto& sat : scenario.satellites) {
        if (!scenario.clock_biases.count(sat.constellation)) {
            throw ValidationError("scenario: no clock bias for " +
                                  to_string(sat.constellation));
        }
        probe.observations.push_back({sat.id, sat.constellation, sat.pos, 0.0, 1.0});
    }
    const int d = probe.state_dimension();
    if (static_cast<int>(scenario.satellites.size()) < d + 1) {
        throw ValidationError("scenario: need at least " + std::to_string(d + 1) +
                              " satellites, got " +
                              std::to_string(scenario.satellites.size()));
    }
    for (const auto& sat : scenario.satellites) {
        const double el = elevation_deg(scenario.receiver_truth, sat.pos);
        if (el < 5.0) {
            throw ValidationError("scenario: satellite " + sat.id + " at " +
                                  std::to_string(el) + " deg elevation (< 5)");
        }
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (stream + 0x9E3779B97F4A7C15ULL));
    h = splitmix64(h ^ (index + 0xD1B54A32D192ED03ULL));
    return h;
}

double uniform01(std::mt19937_64& rng) {
    // 53 random bits, offset by half an ulp: lands strictly inside (0, 1)
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

double standard_normal(std::mt19937_64& rng) {
    const double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Marsaglia-Tsang squeeze; shape k > 0, unit scale
double gamma_sample(double k, std::mt19937_64& rng) {
    if (k < 1.0) {
        const double g = gamma_sample(k + 1.0, rng);
        return g * std::pow(uniform01(rng), 1.0 / k);
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample(const GaussianModel& model, std::mt19937_64& rng) {
    return model.mu + model.sigma * standard_normal(rng);
}

double sample(const LogisticModel& model, std::mt19937_64& rng) {
    return logistic_sample(uniform01(rng), model);
}

double sample(const BgmmModel& model, std::mt19937_64& rng) {
    const bool first = uniform01(rng) < model.p1;
    const GaussianModel g = first ? GaussianModel{model.mu1, model.sigma1}
                                  : GaussianModel{model.mu2, model.sigma2};
    return sample(g, rng);
}

double sample(const StudentTModel& model, std::mt19937_64& rng) {
    const double z = standard_normal(rng);
    const double chi2 = 2.0 * gamma_sample(0.5 * model.nu, rng);
    return model.c + model.lambda * z / std::sqrt(chi2 / model.nu);
}

double sample(const DistributionModel& model, std::mt19937_64& rng) {
    return std::visit([&rng](const auto& m) { return sample(m, rng); }, model);
}

EpochObservations generate_epoch(const GeometryScenario& scenario,
                                 const DistributionModel& error_model, std::uint64_t seed,
                                 int epoch_index) {
    validate(scenario);
    validate(error_model);
    const double scale = model_scale(error_model);

    std::mt19937_64 rng(seed);
    EpochObservations epoch;
    epoch.epoch_index = epoch_index;
    epoch.observations.reserve(scenario.satellites.size());
    for (const auto& sat : scenario.satellites) {
        const double range = norm(sat.pos - scenario.receiver_truth);
        const double bias = scenario.clock_biases.at(sat.constellation);
        const double err = sample(error_model, rng);
        epoch.observations.push_back({sat.id, sat.constellation, sat.pos,
                                      range + bias + err, scale});
    }
    return epoch;
}

std::vector<double> default_alpha_grid() {
    std::vector<double> grid;
    grid.reserve(21);
    for (int i = 0; i <= 20; ++i) grid.push_back(std::pow(10.0, -1.0 + i / 10.0));
    return grid;
}

SweepResult scale_mismatch_sweep(const GeometryScenario& scenario,
                                 const MismatchSweepConfig& config, Execution exec) {
    validate(scenario);
    if (!(config.s_true > 0.0)) throw ValidationError("sweep: s_true must be > 0");
    if (config.trials_per_alpha < 1) throw ValidationError("sweep: trials_per_alpha < 1");
    const std::vector<double> alphas =
        config.alphas.empty() ? default_alpha_grid() : config.alphas;
    for (double a : alphas) {
        if (!(a > 0.0)) throw ValidationError("sweep: alpha values must be > 0");
    }

    const DistributionModel gen_model = LogisticModel{0.0, config.s_true};
    const auto trials = static_cast<std::size_t>(config.trials_per_alpha);

    SweepResult result;
    result.records.reserve(alphas.size());
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const double alpha = alphas[ai];
        std::vector<double> err(trials, 0.0);
        std::vector<int> iters(trials, 0);
        std::vector<char> failed(trials, 0);

        parallel_for(trials, exec, [&](std::size_t trial) {
            EpochObservations epoch = generate_epoch(
                scenario, gen_model, mix_seed(config.seed, ai, trial),
                static_cast<int>(trial));
            for (auto& obs : epoch.observations) obs.scale = alpha * config.s_true;
            try {
                const SolveReport rep = irls_solve(epoch, EstimatorKind::Lqlc,
                                                   cold_start(epoch), config.solver);
                err[trial] = norm(rep.state.position - scenario.receiver_truth);
                iters[trial] = rep.iterations;
            } catch (const Error&) {
                failed[trial] = 1;
            }
        });

        // serial reduction keeps Serial/OpenMp results identical
        AlphaRecord rec;
        rec.alpha = alpha;
        std::size_t ok = 0;
        double sum_sq = 0.0, sum = 0.0, sum_iters = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            if (failed[t]) {
                ++rec.failed_trials;
                continue;
            }
            ++ok;
            sum_sq += err[t] * err[t];
            sum += err[t];
            sum_iters += iters[t];
        }
        if (ok == 0) throw NoConvergence("sweep: every trial failed at alpha = " +
                                         std::to_string(alpha));
        const double n = static_cast<double>(ok);
        rec.rmse_3d = std::sqrt(sum_sq / n);
        const double mean = sum / n;
        rec.std_3d = std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
        rec.mean_iterations = sum_iters / n;
        result.records.push_back(rec);
    }
    return result;
}

}  // namespace rspp
