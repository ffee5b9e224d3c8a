#include "risop/surrogate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "risop/analytic.hpp"
#include "risop/montecarlo.hpp"
#include "risop/parallel.hpp"
#include "risop/rng.hpp"

namespace risop {

namespace {

constexpr double kLogFloor = 1e-12; // for the optional log10-target mode

const char* kDatasetHeader =
    "gamma_th_db,gamma_bar_db,sigma_sr,sigma_rd,sigma_ir,sigma_id,n_elements,p_out";

} // namespace

SystemParams params_from_input(const std::array<double, 7>& in, double gamma_th_db_override) {
    int n = static_cast<int>(std::llround(in[kInNElements]));
    return SystemParams(n, in[kInSigmaSr], in[kInSigmaRd], in[kInSigmaIr], in[kInSigmaId],
                        in[kInGammaBarDb], 0.0, gamma_th_db_override);
}

SystemParams params_from_input(const std::array<double, 7>& in) {
    return params_from_input(in, in[kInGammaThDb]);
}

std::string to_string(LabelMethod m) {
    switch (m) {
        case LabelMethod::exact_numeric: return "exact";
        case LabelMethod::gamma_numeric: return "gamma-numeric";
        case LabelMethod::monte_carlo: return "mc";
    }
    return "?";
}

LabelMethod label_method_from_string(const std::string& name) {
    if (name == "exact") return LabelMethod::exact_numeric;
    if (name == "gamma-numeric") return LabelMethod::gamma_numeric;
    if (name == "mc") return LabelMethod::monte_carlo;
    throw ContractError("unknown label method: " + name);
}

Dataset generate_dataset(int n_records, const SamplingRanges& ranges, const GenerateOptions& opt) {
    if (n_records < 100) throw ContractError("generate_dataset: n_records must be >= 100");

    auto uniform = [](Philox4x32& rng, const std::array<double, 2>& r) {
        return r[0] + (r[1] - r[0]) * rng.next_open01();
    };

    std::vector<std::optional<DatasetRecord>> slots(n_records);
    parallel_for(n_records, opt.workers, [&](std::size_t i) {
        Philox4x32 rng(opt.seed, i);
        DatasetRecord rec;
        rec.input[kInGammaThDb] = uniform(rng, ranges.gamma_th_db);
        double snr = uniform(rng, ranges.snr_db);
        double inr = uniform(rng, ranges.inr_db);
        rec.input[kInGammaBarDb] = snr - inr;
        rec.input[kInSigmaSr] = uniform(rng, ranges.sigma);
        rec.input[kInSigmaRd] = uniform(rng, ranges.sigma);
        rec.input[kInSigmaIr] = uniform(rng, ranges.sigma);
        rec.input[kInSigmaId] = uniform(rng, ranges.sigma);
        int n_lo = ranges.n_elements[0], n_hi = ranges.n_elements[1];
        rec.input[kInNElements] =
            static_cast<double>(n_lo + static_cast<int>(rng.next_u64() %
                                                        static_cast<std::uint64_t>(n_hi - n_lo + 1)));
        try {
            SystemParams p = params_from_input(rec.input);
            switch (opt.method) {
                case LabelMethod::exact_numeric: rec.target = op_exact(p).value; break;
                case LabelMethod::gamma_numeric: rec.target = op_approx_numeric(p).value; break;
                case LabelMethod::monte_carlo: {
                    McConfig cfg;
                    cfg.n_samples = opt.mc_samples;
                    cfg.seed = opt.seed ^ (0x9E3779B97F4A7C15ull * (i + 1));
                    cfg.workers = 1;
                    rec.target = estimate_op_mc(p, cfg).value;
                    break;
                }
            }
            slots[i] = rec;
        } catch (const std::exception& e) {
            std::cerr << "generate_dataset: skipping record " << i << ": " << e.what() << "\n";
        }
    });

    Dataset ds;
    ds.reserve(n_records);
    for (auto& s : slots)
        if (s) ds.push_back(*s);
    return ds;
}

void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_dataset: cannot open " + path);
    out << kDatasetHeader << "\n";
    char buf[256];
    for (const auto& r : ds) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.input[0], r.input[1],
                      r.input[2], r.input[3], r.input[4], r.input[5],
                      static_cast<int>(std::llround(r.input[6])), r.target);
        out << buf;
    }
    if (!out) throw IoError("save_dataset: write failed for " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_dataset: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kDatasetHeader)
        throw IoError("load_dataset: bad header in " + path);
    Dataset ds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        if (vals.size() != 8) throw IoError("load_dataset: bad record in " + path);
        DatasetRecord r;
        for (int i = 0; i < 7; ++i) r.input[i] = vals[i];
        r.target = vals[7];
        if (r.target < 0.0 || r.target > 1.0)
            throw IoError("load_dataset: target outside [0,1] in " + path);
        ds.push_back(r);
    }
    return ds;
}

SplitResult split_dataset(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed) {
    double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractError("split_dataset: fractions must sum to 1");
    std::vector<std::size_t> idx(ds.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Philox4x32 rng(seed, 0x5b117);
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_u64() % i]);

    const std::size_t n_train = static_cast<std::size_t>(fractions[0] * ds.size());
    const std::size_t n_test = static_cast<std::size_t>(fractions[1] * ds.size());
    SplitResult out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const DatasetRecord& r = ds[idx[i]];
        if (i < n_train)
            out.train.push_back(r);
        else if (i < n_train + n_test)
            out.test.push_back(r);
        else
            out.validation.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

MlpModel init_model(std::uint64_t seed) {
    MlpModel m;
    m.meta.seed = seed;
    m.norm_min.fill(-1.0);
    m.norm_max.fill(1.0);
    const std::size_t n_layers = m.layer_sizes.size() - 1;
    m.weights.resize(n_layers);
    m.biases.resize(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        int fan_in = m.layer_sizes[l];
        int fan_out = m.layer_sizes[l + 1];
        double a = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Philox4x32 rng(seed, l);
        m.weights[l].resize(static_cast<std::size_t>(fan_in) * fan_out);
        for (double& w : m.weights[l]) w = a * (2.0 * rng.next_open01() - 1.0);
        m.biases[l].assign(fan_out, 0.0);
    }
    return m;
}

namespace {

void normalize_input(const MlpModel& m, const std::array<double, 7>& in, double* out) {
    for (int i = 0; i < 7; ++i) {
        double range = m.norm_max[i] - m.norm_min[i];
        out[i] = 2.0 * (in[i] - m.norm_min[i]) / range - 1.0;
    }
}

// forward pass keeping all activations (for the gradient)
struct ForwardTrace {
    std::vector<std::vector<double>> act; // act[0] = normalized input
};

double forward_trace(const MlpModel& m, const std::array<double, 7>& in, ForwardTrace* trace) {
    const std::size_t n_layers = m.layer_sizes.size() - 1;
    std::vector<double> cur(7);
    normalize_input(m, in, cur.data());
    if (trace) {
        trace->act.clear();
        trace->act.push_back(cur);
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int n_in = m.layer_sizes[l];
        const int n_out = m.layer_sizes[l + 1];
        std::vector<double> next(n_out);
        for (int o = 0; o < n_out; ++o) {
            double acc = m.biases[l][o];
            const double* wrow = m.weights[l].data() + static_cast<std::size_t>(o) * n_in;
            for (int i = 0; i < n_in; ++i) acc += wrow[i] * cur[i];
            next[o] = (l + 1 < n_layers) ? std::tanh(acc) : acc;
        }
        cur = std::move(next);
        if (trace) trace->act.push_back(cur);
    }
    return cur[0];
}

} // namespace

double MlpModel::forward(const std::array<double, 7>& input) const {
    return forward_trace(*this, input, nullptr);
}

std::size_t param_count(const MlpModel& m) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l)
        n += static_cast<std::size_t>(m.layer_sizes[l]) * m.layer_sizes[l + 1] +
             m.layer_sizes[l + 1];
    return n;
}

namespace {

// maps a flat index to (layer, weight-or-bias, offset)
double* param_ptr(MlpModel& m, std::size_t flat) {
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        std::size_t nw = m.weights[l].size();
        if (flat < nw) return &m.weights[l][flat];
        flat -= nw;
        std::size_t nb = m.biases[l].size();
        if (flat < nb) return &m.biases[l][flat];
        flat -= nb;
    }
    throw ContractError("param index out of range");
}

} // namespace

double get_param(const MlpModel& m, std::size_t flat_index) {
    return *param_ptr(const_cast<MlpModel&>(m), flat_index);
}

void set_param(MlpModel& m, std::size_t flat_index, double value) {
    *param_ptr(m, flat_index) = value;
}

void model_gradient(const MlpModel& m, const std::array<double, 7>& input,
                    std::vector<double>& grad) {
    const std::size_t n_layers = m.layer_sizes.size() - 1;
    ForwardTrace tr;
    forward_trace(m, input, &tr);
    grad.assign(param_count(m), 0.0);

    // delta[l] = d(output)/d(pre-activation of layer l output)
    std::vector<std::vector<double>> delta(n_layers);
    delta[n_layers - 1] = {1.0}; // identity output
    for (std::size_t l = n_layers - 1; l-- > 0;) {
        const int n_out = m.layer_sizes[l + 1];
        const int n_next = m.layer_sizes[l + 2];
        delta[l].assign(n_out, 0.0);
        for (int o = 0; o < n_out; ++o) {
            double acc = 0.0;
            for (int k = 0; k < n_next; ++k)
                acc += delta[l + 1][k] * m.weights[l + 1][static_cast<std::size_t>(k) * n_out + o];
            const double a = tr.act[l + 1][o]; // tanh activation value
            delta[l][o] = acc * (1.0 - a * a);
        }
    }

    std::size_t off = 0;
    for (std::size_t l = 0; l < n_layers; ++l) {
        const int n_in = m.layer_sizes[l];
        const int n_out = m.layer_sizes[l + 1];
        for (int o = 0; o < n_out; ++o)
            for (int i = 0; i < n_in; ++i) grad[off++] = delta[l][o] * tr.act[l][i];
        for (int o = 0; o < n_out; ++o) grad[off++] = delta[l][o];
    }
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt trainer
// ---------------------------------------------------------------------------

namespace {

void apply_flat(MlpModel& m, const Eigen::VectorXd& w) {
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        for (double& v : m.weights[l]) v = w[off++];
        for (double& v : m.biases[l]) v = w[off++];
    }
}

Eigen::VectorXd extract_flat(const MlpModel& m) {
    Eigen::VectorXd w(param_count(m));
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        for (double v : m.weights[l]) w[off++] = v;
        for (double v : m.biases[l]) w[off++] = v;
    }
    return w;
}

double target_transform(double t, bool log_targets) {
    return log_targets ? std::log10(std::max(t, kLogFloor)) : t;
}

double batch_mse(const MlpModel& m, const Dataset& ds) {
    double acc = 0.0;
    for (const auto& r : ds) {
        double e = m.forward(r.input) - target_transform(r.target, m.log_targets);
        acc += e * e;
    }
    return acc / static_cast<double>(ds.size());
}

} // namespace

std::pair<MlpModel, TrainReport> train_lm(const Dataset& train, const Dataset& validation,
                                          const LmOptions& opt, std::uint64_t seed) {
    if (train.empty() || validation.empty())
        throw ContractError("train_lm: train and validation splits must be nonempty");

    MlpModel model = init_model(seed);
    model.log_targets = opt.log_targets;

    // normalization bounds from the training split; degenerate features widened
    for (int f = 0; f < 7; ++f) {
        double lo = train[0].input[f], hi = lo;
        for (const auto& r : train) {
            lo = std::min(lo, r.input[f]);
            hi = std::max(hi, r.input[f]);
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
        model.norm_min[f] = lo;
        model.norm_max[f] = hi;
    }

    const std::size_t n = train.size();
    const std::size_t p = param_count(model);
    Eigen::MatrixXd jac(n, p);
    Eigen::VectorXd resid(n);
    Eigen::VectorXd w = extract_flat(model);

    TrainReport report;
    double lambda = opt.lambda0;
    double train_mse = batch_mse(model, train);
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_w = w;

    constexpr std::size_t kRowBlock = 256; // fixed block size: worker-count independent

    for (int epoch = 1; epoch <= opt.max_epochs; ++epoch) {
        // Jacobian and residuals at the current weights
        const std::size_t n_blocks = (n + kRowBlock - 1) / kRowBlock;
        parallel_for(n_blocks, opt.workers, [&](std::size_t blk) {
            std::vector<double> grad;
            MlpModel local = model; // cheap copy, read-only weights
            for (std::size_t r = blk * kRowBlock; r < std::min(n, (blk + 1) * kRowBlock); ++r) {
                model_gradient(local, train[r].input, grad);
                for (std::size_t j = 0; j < p; ++j) jac(r, j) = grad[j];
                resid[r] = target_transform(train[r].target, model.log_targets) -
                           forward_trace(local, train[r].input, nullptr);
            }
        });
        if (!jac.allFinite() || !resid.allFinite())
            throw TrainingError("train_lm: non-finite Jacobian or residuals (data/scale)");

        // single-threaded symmetric products keep the result bit-reproducible
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(p, p);
        jtj.selfadjointView<Eigen::Lower>().rankUpdate(jac.adjoint());
        Eigen::VectorXd g = jac.adjoint() * resid;

        bool accepted = false;
        for (int retry = 0; retry < opt.max_retries; ++retry) {
            if (lambda > 1e12)
                throw TrainingError("train_lm: normal equations singular at lambda > 1e12");
            Eigen::MatrixXd a = jtj;
            a.diagonal().array() += lambda;
            Eigen::LLT<Eigen::MatrixXd> llt(a.selfadjointView<Eigen::Lower>());
            if (llt.info() != Eigen::Success) {
                lambda *= opt.lambda_up;
                continue;
            }
            Eigen::VectorXd delta = llt.solve(g);
            MlpModel cand = model;
            Eigen::VectorXd w_cand = w + delta;
            apply_flat(cand, w_cand);
            double cand_mse = batch_mse(cand, train);
            if (cand_mse < train_mse) {
                model = std::move(cand);
                w = std::move(w_cand);
                train_mse = cand_mse;
                lambda = std::max(lambda * opt.lambda_down, 1e-15);
                accepted = true;
                break;
            }
            lambda *= opt.lambda_up;
        }
        if (!accepted)
            throw TrainingError("train_lm: no acceptable step within retry budget");

        const double val_mse = batch_mse(model, validation);
        report.train_mse.push_back(train_mse);
        report.val_mse.push_back(val_mse);
        report.stop_epoch = epoch;
        if (val_mse < best_val) {
            best_val = val_mse;
            best_w = w;
            report.best_epoch = epoch;
        }
        if (epoch - report.best_epoch >= opt.patience) break;
    }

    apply_flat(model, best_w);
    model.meta.best_epoch = report.best_epoch;
    model.meta.val_mse = best_val;
    return {std::move(model), std::move(report)};
}

// ---------------------------------------------------------------------------
// Inference and metrics
// ---------------------------------------------------------------------------

OutageEstimate predict_op(const MlpModel& m, const std::array<double, 7>& input) {
    OutageEstimate est;
    est.method = OpMethod::surrogate;
    double raw = m.forward(input);
    double value = m.log_targets ? std::pow(10.0, raw) : raw;
    est.value = std::clamp(value, 0.0, 1.0);
    est.clamped = value < 0.0 || value > 1.0;
    est.err = m.meta.val_mse >= 0.0 ? std::sqrt(m.meta.val_mse) : 0.0;
    est.err_kind = ErrKind::model;
    for (int f = 0; f < 7; ++f) {
        double range = m.norm_max[f] - m.norm_min[f];
        if (input[f] < m.norm_min[f] - 0.1 * range || input[f] > m.norm_max[f] + 0.1 * range)
            est.extrapolation = true;
    }
    return est;
}

RegressionMetrics regression_metrics(const MlpModel& m, const Dataset& split) {
    if (split.empty()) throw ContractError("regression_metrics: empty split");
    double sum_t = 0.0, sum_p = 0.0;
    std::vector<double> pred(split.size());
    for (std::size_t i = 0; i < split.size(); ++i) {
        pred[i] = predict_op(m, split[i].input).value;
        sum_p += pred[i];
        sum_t += split[i].target;
    }
    const double n = static_cast<double>(split.size());
    const double mean_p = sum_p / n, mean_t = sum_t / n;
    double spp = 0.0, stt = 0.0, spt = 0.0, mse = 0.0;
    for (std::size_t i = 0; i < split.size(); ++i) {
        double dp = pred[i] - mean_p;
        double dt = split[i].target - mean_t;
        spp += dp * dp;
        stt += dt * dt;
        spt += dp * dt;
        double e = pred[i] - split[i].target;
        mse += e * e;
    }
    if (stt <= 0.0) throw DomainError("regression_metrics: zero-variance targets, R undefined");
    RegressionMetrics out;
    out.mse = mse / n;
    out.r = spp > 0.0 ? spt / std::sqrt(spp * stt) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

void save_model(const MlpModel& m, const std::string& path) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["layer_sizes"] = m.layer_sizes;
    doc["activation"] = "tanh";
    doc["norm_min"] = m.norm_min;
    doc["norm_max"] = m.norm_max;
    doc["log_targets"] = m.log_targets;
    doc["weights"] = m.weights;
    doc["biases"] = m.biases;
    doc["metadata"] = {{"seed", m.meta.seed},
                       {"best_epoch", m.meta.best_epoch},
                       {"val_mse", m.meta.val_mse}};
    std::ofstream out(path);
    if (!out) throw IoError("save_model: cannot open " + path);
    out << doc.dump(1) << "\n";
    if (!out) throw IoError("save_model: write failed for " + path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_model: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw IoError("load_model: parse error in " + path + ": " + e.what());
    }
    if (!doc.contains("version") || doc["version"].get<int>() > 1)
        throw IoError("load_model: unsupported model version in " + path);
    if (doc.value("activation", "tanh") != std::string("tanh"))
        throw IoError("load_model: unsupported activation in " + path);
    MlpModel m;
    m.layer_sizes = doc["layer_sizes"].get<std::vector<int>>();
    m.weights = doc["weights"].get<std::vector<std::vector<double>>>();
    m.biases = doc["biases"].get<std::vector<std::vector<double>>>();
    auto nmin = doc["norm_min"].get<std::vector<double>>();
    auto nmax = doc["norm_max"].get<std::vector<double>>();
    if (nmin.size() != 7 || nmax.size() != 7)
        throw IoError("load_model: normalization bounds must have 7 entries");
    std::copy(nmin.begin(), nmin.end(), m.norm_min.begin());
    std::copy(nmax.begin(), nmax.end(), m.norm_max.begin());
    for (int f = 0; f < 7; ++f)
        if (!(m.norm_min[f] < m.norm_max[f]))
            throw IoError("load_model: normalization bounds not strictly ordered");
    m.log_targets = doc.value("log_targets", false);
    if (doc.contains("metadata")) {
        const auto& meta = doc["metadata"];
        m.meta.seed = meta.value("seed", std::uint64_t{0});
        m.meta.best_epoch = meta.value("best_epoch", -1);
        m.meta.val_mse = meta.value("val_mse", -1.0);
    }
    return m;
}

} // namespace risop
