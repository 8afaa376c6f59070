#include "rspp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "rspp/geodesy.hpp"

namespace rspp {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_double(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(where + ": bad number '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& text, const std::string& where) {
    const double v = parse_double(text, where);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ParseError(where + ": expected integer, got '" + text + "'");
    return i;
}

std::string ctx(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no);
}

std::string fmt_f6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_g(double v, int prec) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

std::string fmt_e6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", v);
    return buf;
}

void expect_header(const std::string& got, const std::string& want, const std::string& path) {
    if (got != want) {
        throw ParseError(path + ": expected header '" + want + "', got '" + got + "'");
    }
}

double get_num(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ParseError(where + ": missing numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

constexpr const char* kEpochHeader =
    "epoch,sat_id,constellation,sat_x,sat_y,sat_z,pseudorange,scale";
constexpr const char* kSolutionHeader =
    "epoch,x,y,z,bias_gps,bias_bds,iterations,converged,objective,wall_time_s";
constexpr const char* kSweepHeader = "alpha,rmse_3d,std_3d,mean_iterations,failed_trials";
constexpr const char* kResidualHeader = "epoch,sat_id,residual,normalized_residual,weight";

}  // namespace

std::vector<EpochObservations> read_epochs(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    expect_header(chomp(line), kEpochHeader, path);

    std::vector<EpochObservations> epochs;
    std::unordered_map<int, std::size_t> slot;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 8) {
            throw ParseError(ctx(path, line_no) + ": expected 8 fields, got " +
                             std::to_string(f.size()));
        }
        const std::string where = ctx(path, line_no);
        const int epoch_index = parse_int(f[0], where);
        SatelliteObservation obs;
        obs.sat_id = f[1];
        obs.constellation = constellation_from_string(f[2]);
        obs.sat_pos = {parse_double(f[3], where), parse_double(f[4], where),
                       parse_double(f[5], where)};
        obs.pseudorange = parse_double(f[6], where);
        obs.scale = parse_double(f[7], where);

        auto it = slot.find(epoch_index);
        if (it == slot.end()) {
            it = slot.emplace(epoch_index, epochs.size()).first;
            epochs.push_back(EpochObservations{epoch_index, {}});
        }
        epochs[it->second].observations.push_back(std::move(obs));
    }
    for (const auto& epoch : epochs) validate(epoch);
    return epochs;
}

void write_epochs(const std::string& path, std::span<const EpochObservations> epochs) {
    std::ofstream out = open_out(path);
    out << kEpochHeader << "\n";
    for (const auto& epoch : epochs) {
        for (const auto& obs : epoch.observations) {
            out << epoch.epoch_index << ',' << obs.sat_id << ','
                << to_string(obs.constellation) << ',' << fmt_f6(obs.sat_pos.x) << ','
                << fmt_f6(obs.sat_pos.y) << ',' << fmt_f6(obs.sat_pos.z) << ','
                << fmt_f6(obs.pseudorange) << ',' << fmt_f6(obs.scale) << "\n";
        }
    }
}

std::vector<SolutionRow> solution_rows(std::span<const EpochSolveResult> results) {
    const double nan = std::nan("");
    std::vector<SolutionRow> rows;
    rows.reserve(results.size());
    for (const auto& res : results) {
        SolutionRow row;
        row.epoch = res.epoch_index;
        if (res.ok) {
            const auto& st = res.report.state;
            row.x = st.position.x;
            row.y = st.position.y;
            row.z = st.position.z;
            const auto gps = st.clock_bias.find(Constellation::Gps);
            const auto bds = st.clock_bias.find(Constellation::Bds);
            row.bias_gps = gps == st.clock_bias.end() ? nan : gps->second;
            row.bias_bds = bds == st.clock_bias.end() ? nan : bds->second;
            row.iterations = res.report.iterations;
            row.converged = res.report.converged ? 1 : 0;
            row.objective = res.report.objective;
            row.wall_time_s = res.report.wall_time_s;
        } else {
            row.x = row.y = row.z = row.bias_gps = row.bias_bds = nan;
            row.objective = nan;
            row.wall_time_s = nan;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_solutions(const std::string& path, std::span<const SolutionRow> rows) {
    std::ofstream out = open_out(path);
    out << kSolutionHeader << "\n";
    for (const auto& r : rows) {
        out << r.epoch << ',' << fmt_f6(r.x) << ',' << fmt_f6(r.y) << ',' << fmt_f6(r.z)
            << ',' << fmt_f6(r.bias_gps) << ',' << fmt_f6(r.bias_bds) << ','
            << r.iterations << ',' << r.converged << ',' << fmt_g(r.objective, 9) << ','
            << fmt_e6(r.wall_time_s) << "\n";
    }
}

std::vector<SolutionRow> read_solutions(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    expect_header(chomp(line), kSolutionHeader, path);

    std::vector<SolutionRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 10) {
            throw ParseError(ctx(path, line_no) + ": expected 10 fields, got " +
                             std::to_string(f.size()));
        }
        const std::string where = ctx(path, line_no);
        SolutionRow r;
        r.epoch = parse_int(f[0], where);
        r.x = parse_double(f[1], where);
        r.y = parse_double(f[2], where);
        r.z = parse_double(f[3], where);
        r.bias_gps = parse_double(f[4], where);
        r.bias_bds = parse_double(f[5], where);
        r.iterations = parse_int(f[6], where);
        r.converged = parse_int(f[7], where);
        r.objective = parse_double(f[8], where);
        r.wall_time_s = parse_double(f[9], where);
        rows.push_back(r);
    }
    return rows;
}

void write_residuals(const std::string& path, std::span<const EpochSolveResult> results,
                     std::span<const EpochObservations> epochs) {
    if (results.size() != epochs.size()) {
        throw ValidationError("write_residuals: results/epochs length mismatch");
    }
    std::ofstream out = open_out(path);
    out << kResidualHeader << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& res = results[i];
        if (!res.ok) continue;
        const auto& obs = epochs[i].observations;
        for (std::size_t k = 0; k < obs.size(); ++k) {
            out << res.epoch_index << ',' << obs[k].sat_id << ','
                << fmt_f6(res.report.residuals[k]) << ','
                << fmt_f6(res.report.normalized_residuals[k]) << ','
                << fmt_g(res.report.weights[k], 9) << "\n";
        }
    }
}

void write_sweep(const std::string& path, const SweepResult& sweep) {
    std::ofstream out = open_out(path);
    out << kSweepHeader << "\n";
    for (const auto& rec : sweep.records) {
        out << fmt_g(rec.alpha, 6) << ',' << fmt_f6(rec.rmse_3d) << ','
            << fmt_f6(rec.std_3d) << ',' << fmt_f6(rec.mean_iterations) << ','
            << rec.failed_trials << "\n";
    }
}

SweepResult read_sweep(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    expect_header(chomp(line), kSweepHeader, path);

    SweepResult sweep;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = chomp(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 5) {
            throw ParseError(ctx(path, line_no) + ": expected 5 fields, got " +
                             std::to_string(f.size()));
        }
        const std::string where = ctx(path, line_no);
        AlphaRecord rec;
        rec.alpha = parse_double(f[0], where);
        rec.rmse_3d = parse_double(f[1], where);
        rec.std_3d = parse_double(f[2], where);
        rec.mean_iterations = parse_double(f[3], where);
        rec.failed_trials = parse_int(f[4], where);
        sweep.records.push_back(rec);
    }
    return sweep;
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        line = chomp(line);
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) return {};

    // headerless single column?
    std::size_t column = 0, first_row = 0;
    {
        const char* begin = lines[0].c_str();
        char* end = nullptr;
        std::strtod(begin, &end);
        const bool headerless = end != begin && *end == '\0';
        if (!headerless) {
            const auto header = split(lines[0]);
            first_row = 1;
            if (header.size() == 1) {
                column = 0;
            } else {
                bool found = false;
                for (std::size_t i = 0; i < header.size(); ++i) {
                    if (header[i] == "residual") {
                        column = i;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw ParseError(path +
                                     ": multi-column input needs a 'residual' column");
                }
            }
        }
    }

    std::vector<double> samples;
    samples.reserve(lines.size());
    for (std::size_t i = first_row; i < lines.size(); ++i) {
        const auto f = split(lines[i]);
        if (column >= f.size()) {
            throw ParseError(ctx(path, i + 1) + ": missing column " + std::to_string(column));
        }
        samples.push_back(parse_double(f[column], ctx(path, i + 1)));
    }
    return samples;
}

std::string model_to_json(const DistributionModel& model) {
    json j;
    j["type"] = model_type_name(model);
    std::visit(
        [&j](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) {
                j["mu"] = m.mu;
                j["sigma"] = m.sigma;
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                j["m"] = m.m;
                j["s"] = m.s;
            } else if constexpr (std::is_same_v<T, BgmmModel>) {
                j["p1"] = m.p1;
                j["mu1"] = m.mu1;
                j["sigma1"] = m.sigma1;
                j["mu2"] = m.mu2;
                j["sigma2"] = m.sigma2;
            } else {
                j["c"] = m.c;
                j["lambda"] = m.lambda;
                j["nu"] = m.nu;
            }
        },
        model);
    return j.dump(2) + "\n";
}

namespace {

DistributionModel model_from_json_obj(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ParseError(where + ": model JSON needs a string 'type' field");
    }
    const std::string type = j.at("type").get<std::string>();
    DistributionModel model;
    if (type == "gaussian") {
        model = GaussianModel{get_num(j, "mu", where), get_num(j, "sigma", where)};
    } else if (type == "logistic") {
        model = LogisticModel{get_num(j, "m", where), get_num(j, "s", where)};
    } else if (type == "bgmm") {
        model = BgmmModel{get_num(j, "p1", where), get_num(j, "mu1", where),
                          get_num(j, "sigma1", where), get_num(j, "mu2", where),
                          get_num(j, "sigma2", where)};
    } else if (type == "student_t") {
        model = StudentTModel{get_num(j, "c", where), get_num(j, "lambda", where),
                              get_num(j, "nu", where)};
    } else {
        throw ParseError(where + ": unknown model type '" + type + "'");
    }
    validate(model);
    return model;
}

json parse_json_text(const std::string& text, const std::string& where) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": malformed JSON");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

DistributionModel model_from_json_text(const std::string& text) {
    return model_from_json_obj(parse_json_text(text, "<json>"), "<json>");
}

DistributionModel read_model(const std::string& path) {
    return model_from_json_obj(parse_json_text(slurp(path), path), path);
}

void write_model(const std::string& path, const DistributionModel& model) {
    open_out(path) << model_to_json(model);
}

std::string fit_report_to_json(const FitReport& report) {
    json j = parse_json_text(model_to_json(report.model), "<fit report>");
    j["log_likelihood"] = report.log_likelihood;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["sample_count"] = report.sample_count;
    return j.dump(2) + "\n";
}

void write_fit_report(const std::string& path, const FitReport& report) {
    open_out(path) << fit_report_to_json(report);
}

void write_histogram(const std::string& path, std::span<const double> samples,
                     const std::vector<std::pair<std::string, DistributionModel>>& models,
                     int bins) {
    if (samples.empty()) throw ValidationError("write_histogram: no samples");
    if (bins < 1) throw ValidationError("write_histogram: bins must be >= 1");
    double lo = samples[0], hi = samples[0];
    for (double x : samples) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi <= lo) hi = lo + 1.0;
    const double width = (hi - lo) / bins;

    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (double x : samples) {
        auto b = static_cast<std::size_t>((x - lo) / width);
        if (b >= counts.size()) b = counts.size() - 1;  // x == hi lands in the last bin
        ++counts[b];
    }

    std::ofstream out = open_out(path);
    out << "bin_center,empirical";
    for (const auto& [name, model] : models) out << ',' << name;
    out << "\n";
    const double n = static_cast<double>(samples.size());
    for (int b = 0; b < bins; ++b) {
        const double center = lo + (b + 0.5) * width;
        out << fmt_f6(center) << ','
            << fmt_g(counts[static_cast<std::size_t>(b)] / (n * width), 9);
        for (const auto& [name, model] : models) out << ',' << fmt_g(pdf(center, model), 9);
        out << "\n";
    }
}

void write_metrics(const std::string& path, const RunMetrics& metrics) {
    json j;
    j["estimator"] = metrics.estimator;
    j["rmse_3d"] = metrics.rmse_3d;
    j["std_3d"] = metrics.std_3d;
    j["epochs"] = metrics.epochs;
    if (metrics.reduction_vs_baseline_pct) {
        j["reduction_vs_baseline_pct"] = *metrics.reduction_vs_baseline_pct;
    } else {
        j["reduction_vs_baseline_pct"] = nullptr;
    }
    open_out(path) << j.dump(2) << "\n";
}

GeometryScenario read_scenario(const std::string& path) {
    const json j = parse_json_text(slurp(path), path);
    if (!j.contains("receiver_llh") || !j.contains("satellites") ||
        !j.contains("clock_biases_m")) {
        throw ParseError(path +
                         ": scenario needs receiver_llh, clock_biases_m, satellites");
    }
    const json& r = j.at("receiver_llh");
    LlhPosition llh{get_num(r, "latitude_deg", path), get_num(r, "longitude_deg", path),
                    get_num(r, "height_m", path)};
    validate(llh);

    GeometryScenario scenario;
    scenario.receiver_truth = llh_to_ecef(llh);
    for (const auto& [key, value] : j.at("clock_biases_m").items()) {
        if (!value.is_number()) throw ParseError(path + ": clock bias for " + key);
        scenario.clock_biases[constellation_from_string(key)] = value.get<double>();
    }
    for (const json& s : j.at("satellites")) {
        if (!s.contains("id") || !s.at("id").is_string() || !s.contains("constellation") ||
            !s.contains("ecef_m") || !s.at("ecef_m").is_array() ||
            s.at("ecef_m").size() != 3) {
            throw ParseError(path + ": satellite needs id, constellation, ecef_m[3]");
        }
        ScenarioSatellite sat;
        sat.id = s.at("id").get<std::string>();
        sat.constellation =
            constellation_from_string(s.at("constellation").get<std::string>());
        sat.pos = {s.at("ecef_m")[0].get<double>(), s.at("ecef_m")[1].get<double>(),
                   s.at("ecef_m")[2].get<double>()};
        scenario.satellites.push_back(std::move(sat));
    }
    validate(scenario);
    return scenario;
}

void write_scenario(const std::string& path, const LlhPosition& receiver_llh,
                    const std::map<Constellation, double>& clock_biases,
                    std::span<const ScenarioSatellite> satellites) {
    json j;
    j["receiver_llh"] = {{"latitude_deg", receiver_llh.latitude_deg},
                         {"longitude_deg", receiver_llh.longitude_deg},
                         {"height_m", receiver_llh.height_m}};
    json biases = json::object();
    for (const auto& [c, b] : clock_biases) biases[to_string(c)] = b;
    j["clock_biases_m"] = biases;
    json sats = json::array();
    for (const auto& sat : satellites) {
        sats.push_back({{"id", sat.id},
                        {"constellation", to_string(sat.constellation)},
                        {"ecef_m", {sat.pos.x, sat.pos.y, sat.pos.z}}});
    }
    j["satellites"] = sats;
    open_out(path) << j.dump(2) << "\n";
}

void write_truth(const std::string& path, const LlhPosition& llh) {
    const EcefPosition ecef = llh_to_ecef(llh);
    json j;
    j["truth_llh"] = {{"latitude_deg", llh.latitude_deg},
                      {"longitude_deg", llh.longitude_deg},
                      {"height_m", llh.height_m}};
    j["truth_ecef_m"] = {ecef.x, ecef.y, ecef.z};
    open_out(path) << j.dump(2) << "\n";
}

LlhPosition read_truth(const std::string& path) {
    const json j = parse_json_text(slurp(path), path);
    if (!j.contains("truth_llh")) throw ParseError(path + ": missing truth_llh");
    const json& t = j.at("truth_llh");
    LlhPosition llh{get_num(t, "latitude_deg", path), get_num(t, "longitude_deg", path),
                    get_num(t, "height_m", path)};
    validate(llh);
    return llh;
}

namespace {

json summary_to_json(const SummaryStats& s) {
    return {{"mean", s.mean},         {"stddev", s.stddev},
            {"median", s.median},     {"q1", s.q1},
            {"q3", s.q3},             {"whisker_low", s.whisker_low},
            {"whisker_high", s.whisker_high}};
}

}  // namespace

std::string bench_to_json(const BenchReport& report) {
    json j;
    j["estimator"] = to_string(report.estimator);
    j["runs"] = report.runs;
    j["warmup"] = report.warmup;
    j["time_summary_s"] = summary_to_json(report.time_summary);
    j["iteration_summary"] = summary_to_json(report.iteration_summary);
    return j.dump(2) + "\n";
}

void write_bench(const std::string& path, std::span<const BenchReport> reports) {
    json arr = json::array();
    for (const auto& report : reports) {
        arr.push_back(parse_json_text(bench_to_json(report), "<bench>"));
    }
    open_out(path) << arr.dump(2) << "\n";
}

void write_bench_runs(const std::string& path, const BenchReport& report) {
    std::ofstream out = open_out(path);
    out << "run,iterations,time_s\n";
    for (std::size_t i = 0; i < report.times_s.size(); ++i) {
        out << i << ',' << report.iteration_counts[i] << ',' << fmt_e6(report.times_s[i])
            << '\n';
    }
}

}  // namespace rspp
