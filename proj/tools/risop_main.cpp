// risop: outage-probability toolkit for RIS-assisted D2D links under
// co-channel interference.  Subcommands reproduce the analytical densities,
// outage curves, diversity figures and the surrogate training pipeline as
// plot-ready CSV.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "risop/analytic.hpp"
#include "risop/montecarlo.hpp"
#include "risop/parallel.hpp"
#include "risop/specfun.hpp"
#include "risop/surrogate.hpp"

using namespace risop;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitIo = 4;

struct ScenarioOpts {
    int n = 4;
    double sigma_sr = 1.0, sigma_rd = 1.0, sigma_ir = 1.0, sigma_id = 1.0;
    double snr_db = 10.0, inr_db = 0.0, gamma_th_db = 0.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--n", n, "number of reflecting elements");
        cmd->add_option("--sigma-sr", sigma_sr, "S->R amplitude std-dev");
        cmd->add_option("--sigma-rd", sigma_rd, "R->D amplitude std-dev");
        cmd->add_option("--sigma-ir", sigma_ir, "I->R amplitude std-dev");
        cmd->add_option("--sigma-id", sigma_id, "I->D amplitude std-dev");
        cmd->add_option("--snr-db", snr_db, "average SNR [dB]");
        cmd->add_option("--inr-db", inr_db, "average INR [dB]");
        cmd->add_option("--gamma-th-db", gamma_th_db, "SIR threshold [dB]");
    }

    SystemParams params() const {
        SystemParams p(n, sigma_sr, sigma_rd, sigma_ir, sigma_id, snr_db, inr_db, gamma_th_db);
        // dB -> linear happens exactly once, here; log the linear values
        std::cerr << "info: linear snr=" << p.snr_lin << " inr=" << p.inr_lin
                  << " gamma_bar=" << p.gamma_bar_lin << " gamma_th=" << p.gamma_th_lin << "\n";
        return p;
    }
};

// Flat key=value config support: the file supplies defaults for any long
// flag of the invoked subcommand; explicitly passed flags always win.
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open config file " + config_path);

    auto has_flag = [&](const std::string& key) {
        for (const auto& a : args)
            if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
        return false;
    };

    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("config file " + config_path + ": expected key=value, got: " + line);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!has_flag(key)) extra.push_back("--" + key + "=" + value);
    }
    // insert after the subcommand token(s) so they bind to it
    std::size_t insert_at = args.empty() ? 0 : 1;
    if (!args.empty() && args[0] == "reproduce" && args.size() > 1) insert_at = 2;
    args.insert(args.begin() + static_cast<long>(insert_at), extra.begin(), extra.end());
    return args;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void write_lines(const std::string& path, const std::string& header,
                 const std::vector<std::string>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file " + path);
    out << header << "\n";
    for (const auto& r : rows) out << r << "\n";
    if (!out) throw IoError("write failed for " + path);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --------------------------------------------------------------------------
// pdf-x / pdf-y
// --------------------------------------------------------------------------

PdfGrid gamma_fit_pdf_x(const SystemParams& p, double x_max, int points) {
    GammaFit fit = gamma_fit_x(p);
    PdfGrid g;
    g.method = PdfMethod::gamma_fit;
    const double ln_norm = -ln_gamma(fit.shape) - fit.shape * std::log(fit.scale);
    for (int i = 0; i <= points; ++i) {
        double x = x_max * i / points;
        g.support.push_back(x);
        g.density.push_back(
            x > 0.0 ? std::exp(ln_norm + (fit.shape - 1.0) * std::log(x) - x / fit.scale) : 0.0);
    }
    return g;
}

PdfGrid gamma_fit_pdf_y(const SystemParams& p, double y_max, int points) {
    GammaFit fit = gamma_fit_y2(p);
    PdfGrid g;
    g.method = PdfMethod::gamma_fit;
    const double ln_norm = -ln_gamma(fit.shape) - fit.shape * std::log(fit.scale);
    for (int i = 0; i <= points; ++i) {
        double y = y_max * i / points;
        // density of Y from the fit of Y' = Y^2: f_Y(y) = 2 y f_{Y'}(y^2)
        g.support.push_back(y);
        g.density.push_back(y > 0.0 ? 2.0 * y *
                                          std::exp(ln_norm +
                                                   (fit.shape - 1.0) * std::log(y * y) -
                                                   y * y / fit.scale)
                                    : 0.0);
    }
    return g;
}

int run_pdf(bool is_x, const ScenarioOpts& sc, const std::string& methods_csv,
            std::uint64_t samples, std::uint64_t seed, int bins, int workers,
            const std::string& out_path) {
    SystemParams p = sc.params();
    std::vector<std::string> rows;
    double support_max = 0.0;

    for (const std::string& method : split_list(methods_csv)) {
        PdfGrid grid;
        if (method == "exact") {
            grid = is_x ? pdf_x_exact(p) : pdf_y_exact(p);
        } else if (method == "mc") {
            McConfig cfg;
            cfg.n_samples = samples;
            cfg.seed = seed;
            cfg.workers = workers;
            grid = empirical_pdf(is_x ? McVariable::X : McVariable::Y, p, cfg, bins);
        } else if (method == "gamma_fit") {
            if (support_max == 0.0) {
                GammaFit fx = gamma_fit_x(p);
                support_max = is_x ? fx.mean() + 8.0 * std::sqrt(fx.variance())
                                   : std::sqrt(ey2_moment(p) +
                                               8.0 * std::sqrt(ey4_corrected(p) -
                                                               ey2_moment(p) * ey2_moment(p)));
            }
            grid = is_x ? gamma_fit_pdf_x(p, support_max, 400)
                        : gamma_fit_pdf_y(p, support_max, 400);
        } else {
            throw ContractError("unknown pdf method: " + method + " (exact|gamma_fit|mc)");
        }
        if (!grid.support.empty()) support_max = std::max(support_max, grid.support.back());
        // thin the dense exact grids for plot-sized output
        std::size_t stride = std::max<std::size_t>(1, grid.support.size() / 1024);
        for (std::size_t i = 0; i < grid.support.size(); i += stride)
            rows.push_back(fmt(grid.support[i]) + "," + fmt(grid.density[i]) + "," + method);
    }
    write_lines(out_path, "value,density,method", rows);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// outage / sweep
// --------------------------------------------------------------------------

OutageEstimate estimate_for(const std::string& method, const SystemParams& p,
                            std::uint64_t mc_samples, std::uint64_t seed, int workers,
                            const std::optional<MlpModel>& model) {
    OpMethod m = op_method_from_string(method);
    switch (m) {
        case OpMethod::exact_numeric: return op_exact(p);
        case OpMethod::gamma_closed: return op_approx_closed(p);
        case OpMethod::gamma_numeric: return op_approx_numeric(p);
        case OpMethod::asymptotic: return op_asymptotic(p);
        case OpMethod::monte_carlo: {
            McConfig cfg;
            cfg.n_samples = mc_samples;
            cfg.seed = seed;
            cfg.workers = workers;
            return estimate_op_mc(p, cfg);
        }
        case OpMethod::surrogate: {
            if (!model) throw ContractError("surrogate method requires --model");
            std::array<double, 7> in{p.gamma_th_db, p.snr_db - p.inr_db, p.sigma_sr,
                                     p.sigma_rd,    p.sigma_ir,          p.sigma_id,
                                     static_cast<double>(p.n_elements)};
            return predict_op(*model, in);
        }
    }
    throw ContractError("unreachable method");
}

int run_outage(const ScenarioOpts& sc, const std::string& methods_csv, std::uint64_t mc_samples,
               std::uint64_t seed, int workers, const std::string& model_path,
               const std::string& out_path, bool as_json) {
    auto methods = split_list(methods_csv);
    if (methods.empty()) throw ContractError("methods list must be nonempty");
    std::optional<MlpModel> model;
    if (!model_path.empty()) model = load_model(model_path);
    SystemParams p = sc.params();

    nlohmann::json jout = nlohmann::json::array();
    std::vector<std::string> rows;
    if (!as_json)
        std::cout << std::left << std::setw(16) << "method" << std::setw(16) << "p_out"
                  << "err\n";
    for (const auto& method : methods) {
        OutageEstimate est = estimate_for(method, p, mc_samples, seed, workers, model);
        rows.push_back(method + "," + fmt(est.value) + "," + fmt(est.err));
        if (as_json) {
            jout.push_back({{"method", method},
                            {"p_out", est.value},
                            {"err", est.err},
                            {"degraded", est.degraded_accuracy},
                            {"extrapolation", est.extrapolation}});
        } else {
            char line[96];
            std::snprintf(line, sizeof line, "%-16s%-16.6e%.3e", method.c_str(), est.value,
                          est.err);
            std::cout << line << (est.degraded_accuracy ? "  [degraded]" : "")
                      << (est.extrapolation ? "  [extrapolation]" : "") << "\n";
        }
    }
    if (as_json) std::cout << jout.dump(1) << "\n";
    if (!out_path.empty()) {
        write_lines(out_path, "method,p_out,err", rows);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int run_sweep(const ScenarioOpts& sc, const std::string& axis, double start, double stop,
              int steps, const std::string& methods_csv, std::uint64_t mc_samples,
              std::uint64_t seed, int workers, const std::string& model_path,
              const std::string& out_path) {
    if (steps < 2) throw ContractError("sweep requires steps >= 2");
    auto methods = split_list(methods_csv);
    if (methods.empty()) throw ContractError("methods list must be nonempty");
    std::optional<MlpModel> model;
    if (!model_path.empty()) model = load_model(model_path);

    std::vector<double> axis_values(steps);
    for (int i = 0; i < steps; ++i)
        axis_values[i] = start + (stop - start) * i / (steps - 1);

    std::vector<std::vector<std::string>> slots(steps);
    parallel_for(steps, workers, [&](std::size_t i) {
        ScenarioOpts local = sc;
        double v = axis_values[i];
        if (axis == "snr_db")
            local.snr_db = v;
        else if (axis == "inr_db")
            local.inr_db = v;
        else if (axis == "gamma_th_db")
            local.gamma_th_db = v;
        else if (axis == "n_elements")
            local.n = std::max(1, static_cast<int>(std::llround(v)));
        else
            throw ContractError("unknown axis: " + axis +
                                " (snr_db|inr_db|n_elements|gamma_th_db)");
        SystemParams p(local.n, local.sigma_sr, local.sigma_rd, local.sigma_ir, local.sigma_id,
                       local.snr_db, local.inr_db, local.gamma_th_db);
        double axis_out = axis == "n_elements" ? static_cast<double>(local.n) : v;
        for (const auto& method : methods) {
            OutageEstimate est = estimate_for(method, p, mc_samples, seed + i, 1, model);
            slots[i].push_back(fmt(axis_out) + "," + method + "," + fmt(est.value) + "," +
                               fmt(est.err));
        }
    });

    std::vector<std::string> rows;
    for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
    write_lines(out_path, "axis_value,method,p_out,err", rows);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int run_diversity(const ScenarioOpts& sc, bool as_json) {
    SystemParams p = sc.params();
    GammaFit fx = gamma_fit_x(p);
    GammaFit fy = gamma_fit_y2(p);
    DiversityReport rep = diversity_and_coding(fx, fy, p.gamma_th_lin);
    double p50 = op_approx_numeric(fx, fy, p.gamma_th_lin, 1e5).value;
    double p60 = op_approx_numeric(fx, fy, p.gamma_th_lin, 1e6).value;
    double slope = std::log10(p60) - std::log10(p50);
    if (as_json) {
        nlohmann::json j{{"diversity_order", rep.diversity_order},
                         {"coding_gain", rep.coding_gain},
                         {"fitted_slope", slope}};
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "diversity_order " << fmt(rep.diversity_order) << "\n"
                  << "coding_gain     " << fmt(rep.coding_gain) << "\n"
                  << "fitted_slope    " << fmt(slope) << " (log10 OP per decade, 50->60 dB)\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// surrogate lifecycle
// --------------------------------------------------------------------------

int run_dataset(int count, const std::string& label, std::uint64_t seed, int workers,
                std::uint64_t mc_samples, const SamplingRanges& ranges,
                const std::string& out_path) {
    GenerateOptions opt;
    opt.method = label_method_from_string(label);
    opt.seed = seed;
    opt.workers = workers;
    opt.mc_samples = mc_samples;
    Dataset ds = generate_dataset(count, ranges, opt);
    save_dataset(ds, out_path);
    std::cout << "wrote " << out_path << " (" << ds.size() << " records, "
              << count - static_cast<int>(ds.size()) << " skipped)\n";
    return 0;
}

int run_train(const std::string& dataset_path, const std::string& model_out,
              const std::string& report_out, const LmOptions& opt, std::uint64_t seed,
              bool as_json) {
    Dataset ds = load_dataset(dataset_path);
    SplitResult split = split_dataset(ds, {0.7, 0.1, 0.2}, seed);
    auto [model, report] = train_lm(split.train, split.validation, opt, seed);
    RegressionMetrics val = regression_metrics(model, split.validation);
    RegressionMetrics test = regression_metrics(model, split.test);
    save_model(model, model_out);
    if (!report_out.empty()) {
        std::vector<std::string> rows;
        for (std::size_t e = 0; e < report.train_mse.size(); ++e)
            rows.push_back(std::to_string(e + 1) + "," + fmt(report.train_mse[e]) + "," +
                           fmt(report.val_mse[e]));
        write_lines(report_out, "epoch,train_mse,val_mse", rows);
    }
    if (as_json) {
        nlohmann::json j{{"best_epoch", report.best_epoch}, {"stop_epoch", report.stop_epoch},
                         {"val_mse", model.meta.val_mse},   {"val_r", val.r},
                         {"test_mse", test.mse},            {"test_r", test.r},
                         {"model", model_out}};
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "trained " << split.train.size() << " records: best epoch "
                  << report.best_epoch << ", stop epoch " << report.stop_epoch << ", val mse "
                  << fmt(model.meta.val_mse) << ", val R " << fmt(val.r) << ", test mse "
                  << fmt(test.mse) << "\n"
                  << "wrote " << model_out << "\n";
    }
    return 0;
}

int run_predict(const std::string& model_path, const std::string& input_csv,
                const std::string& dataset_path, const std::string& out_path, bool as_json) {
    MlpModel model = load_model(model_path);
    if (!input_csv.empty()) {
        auto fields = split_list(input_csv);
        if (fields.size() != 7)
            throw ContractError("--input needs 7 comma-separated values "
                                "(gamma_th_db,gamma_bar_db,sigma_sr,sigma_rd,sigma_ir,sigma_id,n)");
        std::array<double, 7> in{};
        for (int i = 0; i < 7; ++i) in[static_cast<std::size_t>(i)] = std::stod(fields[i]);
        OutageEstimate est = predict_op(model, in);
        if (as_json) {
            nlohmann::json j{{"p_out", est.value},
                             {"err", est.err},
                             {"extrapolation", est.extrapolation}};
            std::cout << j.dump(1) << "\n";
        } else {
            std::cout << "p_out " << fmt(est.value) << " (model rmse " << fmt(est.err) << ")"
                      << (est.extrapolation ? " [extrapolation]" : "") << "\n";
        }
        return 0;
    }
    if (dataset_path.empty())
        throw ContractError("predict needs --input or --dataset");
    Dataset ds = load_dataset(dataset_path);
    Dataset out = ds;
    for (auto& r : out) r.target = predict_op(model, r.input).value;
    if (out_path.empty()) throw ContractError("predict --dataset requires -o output path");
    save_dataset(out, out_path);
    std::cout << "wrote " << out_path << " (" << out.size() << " predictions)\n";
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& dataset_path,
                 const std::string& check_path, bool as_json) {
    if (!check_path.empty()) {
        // schema validation for any CSV this tool emits
        std::ifstream in(check_path);
        if (!in) throw IoError("cannot open " + check_path);
        std::string header;
        std::getline(in, header);
        static const std::map<std::string, int> schemas = {
            {"value,density,method", 3},
            {"method,p_out,err", 3},
            {"axis_value,method,p_out,err", 4},
            {"epoch,train_mse,val_mse", 3},
            {"p_out_true,p_out_pred,split", 3},
            {"method,n_points,seconds,mse_vs_exact", 4},
            {"gamma_th_db,gamma_bar_db,sigma_sr,sigma_rd,sigma_ir,sigma_id,n_elements,p_out", 8},
        };
        auto it = schemas.find(header);
        if (it == schemas.end()) throw IoError("unknown CSV schema in " + check_path);
        std::size_t rows = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (static_cast<int>(split_list(line).size()) != it->second)
                throw IoError("row " + std::to_string(rows + 2) + " of " + check_path +
                              " does not match its schema");
            ++rows;
        }
        std::cout << "ok: " << check_path << " (" << rows << " rows)\n";
        return 0;
    }
    if (model_path.empty() || dataset_path.empty())
        throw ContractError("evaluate needs --model and --dataset (or --check)");
    MlpModel model = load_model(model_path);
    Dataset ds = load_dataset(dataset_path);
    RegressionMetrics m = regression_metrics(model, ds);
    if (as_json) {
        nlohmann::json j{{"mse", m.mse}, {"r", m.r}, {"records", ds.size()}};
        std::cout << j.dump(1) << "\n";
    } else {
        std::cout << "records " << ds.size() << "\nmse " << fmt(m.mse) << "\nr " << fmt(m.r)
                  << "\n";
    }
    return 0;
}

// --------------------------------------------------------------------------
// reproduce
// --------------------------------------------------------------------------

struct ReproduceOpts {
    std::string target;
    std::string out_dir = "reproduce-out";
    std::uint64_t seed = 1;
    int workers = 0;
    std::uint64_t mc_samples = 0;   // 0 = per-target default
    int dataset_size = 2000;        // desk-scale surrogate dataset
    int max_epochs = 80;
    std::string label = "gamma-numeric";
    std::string model_path;         // reuse an existing model for fig8/table1
};

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void reproduce_pdf_figure(const ReproduceOpts& o, bool is_x, const std::vector<int>& ns,
                          const char* stem) {
    for (int n : ns) {
        ScenarioOpts sc;
        sc.n = n;
        char name[64];
        std::snprintf(name, sizeof name, "%s_n%d.csv", stem, n);
        run_pdf(is_x, sc, "exact,gamma_fit,mc", o.mc_samples ? o.mc_samples : 1000000, o.seed,
                150, o.workers, join_path(o.out_dir, name));
    }
}

void reproduce_fig5(const ReproduceOpts& o) {
    for (int n : {4, 8}) {
        for (double inr : {0.0, 15.0}) {
            ScenarioOpts sc;
            sc.n = n;
            sc.inr_db = inr;
            char name[64];
            std::snprintf(name, sizeof name, "fig5_n%d_inr%g.csv", n, inr);
            run_sweep(sc, "snr_db", 0.0, 40.0, 21, "exact,gamma-numeric,asymptotic,mc",
                      o.mc_samples ? o.mc_samples : 100000, o.seed, o.workers, "",
                      join_path(o.out_dir, name));
        }
    }
}

void reproduce_fig6(const ReproduceOpts& o) {
    for (int n : {4, 8, 16}) {
        ScenarioOpts sc;
        sc.n = n;
        sc.snr_db = 15.0;
        char name[64];
        std::snprintf(name, sizeof name, "fig6_n%d.csv", n);
        run_sweep(sc, "inr_db", -10.0, 15.0, 26, "exact,gamma-numeric,mc",
                  o.mc_samples ? o.mc_samples : 100000, o.seed, o.workers, "",
                  join_path(o.out_dir, name));
    }
}

std::pair<MlpModel, SplitResult> reproduce_training(const ReproduceOpts& o, TrainReport* report) {
    SamplingRanges ranges;
    GenerateOptions gen;
    gen.method = label_method_from_string(o.label);
    gen.seed = o.seed;
    gen.workers = o.workers;
    Dataset ds = generate_dataset(o.dataset_size, ranges, gen);
    SplitResult split = split_dataset(ds, {0.7, 0.1, 0.2}, o.seed);
    LmOptions lm;
    lm.max_epochs = o.max_epochs;
    lm.workers = o.workers;
    auto [model, rep] = train_lm(split.train, split.validation, lm, o.seed);
    if (report) *report = rep;
    return {std::move(model), std::move(split)};
}

void reproduce_fig7(const ReproduceOpts& o) {
    TrainReport report;
    auto [model, split] = reproduce_training(o, &report);
    std::vector<std::string> rows;
    for (std::size_t e = 0; e < report.train_mse.size(); ++e)
        rows.push_back(std::to_string(e + 1) + "," + fmt(report.train_mse[e]) + "," +
                       fmt(report.val_mse[e]));
    write_lines(join_path(o.out_dir, "fig7_training.csv"), "epoch,train_mse,val_mse", rows);
    save_model(model, join_path(o.out_dir, "fig7_model.json"));
    std::cout << "best epoch " << report.best_epoch << " (val mse " << fmt(model.meta.val_mse)
              << "), stopped at " << report.stop_epoch << "\n";
}

void reproduce_fig8(const ReproduceOpts& o) {
    MlpModel model;
    SplitResult split;
    if (!o.model_path.empty()) {
        model = load_model(o.model_path);
        SamplingRanges ranges;
        GenerateOptions gen;
        gen.method = label_method_from_string(o.label);
        gen.seed = o.seed;
        gen.workers = o.workers;
        split = split_dataset(generate_dataset(o.dataset_size, ranges, gen), {0.7, 0.1, 0.2},
                              o.seed);
    } else {
        auto trained = reproduce_training(o, nullptr);
        model = std::move(trained.first);
        split = std::move(trained.second);
    }
    std::vector<std::string> rows;
    auto emit = [&](const Dataset& part, const char* tag) {
        for (const auto& r : part)
            rows.push_back(fmt(r.target) + "," + fmt(predict_op(model, r.input).value) + "," +
                           tag);
    };
    emit(split.validation, "validation");
    emit(split.test, "test");
    write_lines(join_path(o.out_dir, "fig8_regression.csv"), "p_out_true,p_out_pred,split", rows);
    RegressionMetrics rm = regression_metrics(model, split.validation);
    std::cout << "validation R " << fmt(rm.r) << ", mse " << fmt(rm.mse) << "\n";
}

void reproduce_table1(const ReproduceOpts& o) {
    MlpModel model;
    if (!o.model_path.empty()) {
        model = load_model(o.model_path);
    } else {
        model = reproduce_training(o, nullptr).first;
    }
    // 1000 fresh scenarios labeled by every route, timed
    SamplingRanges ranges;
    GenerateOptions gen;
    gen.method = LabelMethod::exact_numeric;
    gen.seed = o.seed + 99;
    gen.workers = o.workers;
    auto t0 = std::chrono::steady_clock::now();
    Dataset exact = generate_dataset(1000, ranges, gen);
    auto t1 = std::chrono::steady_clock::now();
    gen.method = LabelMethod::gamma_numeric;
    Dataset gamma = generate_dataset(1000, ranges, gen);
    auto t2 = std::chrono::steady_clock::now();
    std::vector<double> pred(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        pred[i] = predict_op(model, exact[i].input).value;
    auto t3 = std::chrono::steady_clock::now();

    auto mse_vs_exact = [&](auto get) {
        double acc = 0.0;
        for (std::size_t i = 0; i < exact.size(); ++i) {
            double e = get(i) - exact[i].target;
            acc += e * e;
        }
        return acc / static_cast<double>(exact.size());
    };
    double mse_gamma = mse_vs_exact([&](std::size_t i) { return gamma[i].target; });
    double mse_dnn = mse_vs_exact([&](std::size_t i) { return pred[i]; });
    double sec_exact = std::chrono::duration<double>(t1 - t0).count();
    double sec_gamma = std::chrono::duration<double>(t2 - t1).count();
    double sec_dnn = std::chrono::duration<double>(t3 - t2).count();

    std::vector<std::string> rows = {
        "exact,1000," + fmt(sec_exact) + ",0",
        "gamma-numeric,1000," + fmt(sec_gamma) + "," + fmt(mse_gamma),
        "surrogate,1000," + fmt(sec_dnn) + "," + fmt(mse_dnn),
    };
    write_lines(join_path(o.out_dir, "table1.csv"), "method,n_points,seconds,mse_vs_exact", rows);
    std::cout << "exact " << fmt(sec_exact) << " s, gamma " << fmt(sec_gamma) << " s, surrogate "
              << fmt(sec_dnn) << " s (speedup vs exact: " << fmt(sec_exact / sec_dnn) << "x)\n";
}

int run_reproduce(const ReproduceOpts& o) {
    std::filesystem::create_directories(o.out_dir);
    if (o.target == "fig3")
        reproduce_pdf_figure(o, true, {4, 16, 64}, "fig3");
    else if (o.target == "fig4")
        reproduce_pdf_figure(o, false, {4, 8, 16}, "fig4");
    else if (o.target == "fig5")
        reproduce_fig5(o);
    else if (o.target == "fig6")
        reproduce_fig6(o);
    else if (o.target == "fig7")
        reproduce_fig7(o);
    else if (o.target == "fig8")
        reproduce_fig8(o);
    else if (o.target == "table1")
        reproduce_table1(o);
    else
        throw ContractError("unknown reproduce target: " + o.target +
                            " (fig3|fig4|fig5|fig6|fig7|fig8|table1)");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"outage probability toolkit for RIS-assisted D2D links under interference"};
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    int workers = 0;
    bool as_json = false;
    std::string config_dummy;

    // ---- pdf-x / pdf-y ----
    ScenarioOpts pdf_sc;
    std::string pdf_methods = "exact,gamma_fit,mc";
    std::uint64_t pdf_samples = 1000000;
    int pdf_bins = 150;
    std::string pdf_out = "pdf.csv";
    CLI::App* pdf_x = app.add_subcommand("pdf-x", "density of the desired cascaded sum X");
    CLI::App* pdf_y = app.add_subcommand("pdf-y", "density of the interference envelope Y");
    for (CLI::App* cmd : {pdf_x, pdf_y}) {
        pdf_sc.attach(cmd);
        cmd->add_option("--methods", pdf_methods, "comma list of exact,gamma_fit,mc");
        cmd->add_option("--samples", pdf_samples, "Monte Carlo sample count");
        cmd->add_option("--bins", pdf_bins, "histogram bins");
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--workers", workers, "worker threads (0 = auto)");
        cmd->add_option("-o,--out", pdf_out, "output CSV path");
        cmd->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");
    }

    // ---- outage ----
    ScenarioOpts out_sc;
    std::string out_methods = "exact,gamma-numeric";
    std::uint64_t out_mc_samples = 10000;
    std::string out_model, out_csv;
    CLI::App* outage = app.add_subcommand("outage", "single-point outage probability");
    out_sc.attach(outage);
    outage->add_option("--methods", out_methods,
                       "comma list of exact,gamma-closed,gamma-numeric,asymptotic,mc,surrogate");
    outage->add_option("--mc-samples", out_mc_samples, "Monte Carlo sample count");
    outage->add_option("--model", out_model, "surrogate model file");
    outage->add_option("--seed", seed, "RNG seed");
    outage->add_option("--workers", workers, "worker threads (0 = auto)");
    outage->add_option("-o,--out", out_csv, "also write CSV here");
    outage->add_flag("--json", as_json, "JSON output");
    outage->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- sweep ----
    ScenarioOpts sweep_sc;
    std::string sweep_axis = "snr_db", sweep_methods = "exact,gamma-numeric";
    double sweep_start = 0.0, sweep_stop = 30.0;
    int sweep_steps = 16;
    std::uint64_t sweep_mc_samples = 10000;
    std::string sweep_model, sweep_out = "sweep.csv";
    CLI::App* sweep = app.add_subcommand("sweep", "outage probability along one axis");
    sweep_sc.attach(sweep);
    sweep->add_option("--axis", sweep_axis, "snr_db|inr_db|n_elements|gamma_th_db");
    sweep->add_option("--start", sweep_start, "axis start");
    sweep->add_option("--stop", sweep_stop, "axis stop");
    sweep->add_option("--steps", sweep_steps, "number of points (>= 2)");
    sweep->add_option("--methods", sweep_methods, "methods list");
    sweep->add_option("--mc-samples", sweep_mc_samples, "Monte Carlo sample count");
    sweep->add_option("--model", sweep_model, "surrogate model file");
    sweep->add_option("--seed", seed, "RNG seed");
    sweep->add_option("--workers", workers, "worker threads (0 = auto)");
    sweep->add_option("-o,--out", sweep_out, "output CSV path");
    sweep->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- diversity ----
    ScenarioOpts div_sc;
    CLI::App* diversity = app.add_subcommand("diversity", "diversity order and coding gain");
    div_sc.attach(diversity);
    diversity->add_flag("--json", as_json, "JSON output");
    diversity->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- dataset ----
    int ds_count = 10000;
    std::string ds_label = "exact";
    std::uint64_t ds_mc_samples = 1000000;
    std::string ds_out = "dataset.csv";
    SamplingRanges ds_ranges;
    CLI::App* dataset = app.add_subcommand("dataset", "generate a labeled dataset");
    dataset->add_option("--count", ds_count, "number of records");
    dataset->add_option("--label-method", ds_label, "exact|gamma-numeric|mc");
    dataset->add_option("--mc-samples", ds_mc_samples, "samples for mc labels");
    dataset->add_option("--seed", seed, "RNG seed");
    dataset->add_option("--workers", workers, "worker threads (0 = auto)");
    dataset->add_option("--gamma-th-range", ds_ranges.gamma_th_db, "gamma_th range [dB]");
    dataset->add_option("--snr-range", ds_ranges.snr_db, "SNR range [dB]");
    dataset->add_option("--inr-range", ds_ranges.inr_db, "INR range [dB]");
    dataset->add_option("--sigma-range", ds_ranges.sigma, "sigma range");
    dataset->add_option("--n-range", ds_ranges.n_elements, "N range");
    dataset->add_option("-o,--out", ds_out, "output CSV path");
    dataset->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- train ----
    std::string train_dataset, train_model_out = "model.json", train_report;
    LmOptions train_opt;
    CLI::App* train = app.add_subcommand("train", "train the surrogate with Levenberg-Marquardt");
    train->add_option("--dataset", train_dataset, "dataset CSV")->required();
    train->add_option("--max-epochs", train_opt.max_epochs, "epoch budget");
    train->add_option("--patience", train_opt.patience, "early-stopping patience");
    train->add_option("--lambda0", train_opt.lambda0, "initial damping");
    train->add_flag("--log-targets", train_opt.log_targets, "train on log10 OP");
    train->add_option("--seed", seed, "init/split seed");
    train->add_option("--workers", workers, "worker threads (0 = auto)");
    train->add_option("-o,--out", train_model_out, "model output path");
    train->add_option("--report", train_report, "training-curve CSV path");
    train->add_flag("--json", as_json, "JSON output");
    train->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- predict ----
    std::string pred_model, pred_input, pred_dataset, pred_out;
    CLI::App* predict = app.add_subcommand("predict", "surrogate prediction");
    predict->add_option("--model", pred_model, "model file")->required();
    predict->add_option("--input", pred_input,
                        "gamma_th_db,gamma_bar_db,sigma_sr,sigma_rd,sigma_ir,sigma_id,n");
    predict->add_option("--dataset", pred_dataset, "predict every record of this dataset");
    predict->add_option("-o,--out", pred_out, "output CSV for --dataset");
    predict->add_flag("--json", as_json, "JSON output");
    predict->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- evaluate ----
    std::string eval_model, eval_dataset, eval_check;
    CLI::App* evaluate = app.add_subcommand("evaluate", "metrics of a model on a dataset");
    evaluate->add_option("--model", eval_model, "model file");
    evaluate->add_option("--dataset", eval_dataset, "dataset CSV");
    evaluate->add_option("--check", eval_check, "validate any CSV emitted by this tool");
    evaluate->add_flag("--json", as_json, "JSON output");
    evaluate->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    // ---- reproduce ----
    ReproduceOpts rep;
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "canned desk-scale figure/table pipelines");
    reproduce->add_option("target", rep.target, "fig3|fig4|fig5|fig6|fig7|fig8|table1")
        ->required();
    reproduce->add_option("--out-dir", rep.out_dir, "output directory");
    reproduce->add_option("--seed", rep.seed, "RNG seed");
    reproduce->add_option("--workers", rep.workers, "worker threads (0 = auto)");
    reproduce->add_option("--mc-samples", rep.mc_samples, "Monte Carlo samples (0 = default)");
    reproduce->add_option("--dataset-size", rep.dataset_size, "surrogate dataset size");
    reproduce->add_option("--max-epochs", rep.max_epochs, "surrogate epoch budget");
    reproduce->add_option("--label-method", rep.label, "surrogate label method");
    reproduce->add_option("--model", rep.model_path, "reuse an existing model (fig8, table1)");
    reproduce->add_option("--config", config_dummy, "flat key=value config file; explicit flags override");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(std::move(args));
        // CLI11 parses the vector form in reverse order
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (pdf_x->parsed())
            return run_pdf(true, pdf_sc, pdf_methods, pdf_samples, seed, pdf_bins, workers,
                           pdf_out);
        if (pdf_y->parsed())
            return run_pdf(false, pdf_sc, pdf_methods, pdf_samples, seed, pdf_bins, workers,
                           pdf_out);
        if (outage->parsed())
            return run_outage(out_sc, out_methods, out_mc_samples, seed, workers, out_model,
                              out_csv, as_json);
        if (sweep->parsed())
            return run_sweep(sweep_sc, sweep_axis, sweep_start, sweep_stop, sweep_steps,
                             sweep_methods, sweep_mc_samples, seed, workers, sweep_model,
                             sweep_out);
        if (diversity->parsed()) return run_diversity(div_sc, as_json);
        if (dataset->parsed())
            return run_dataset(ds_count, ds_label, seed, workers, ds_mc_samples, ds_ranges,
                               ds_out);
        if (train->parsed())
            return run_train(train_dataset, train_model_out, train_report, train_opt, seed,
                             as_json);
        if (predict->parsed())
            return run_predict(pred_model, pred_input, pred_dataset, pred_out, as_json);
        if (evaluate->parsed()) return run_evaluate(eval_model, eval_dataset, eval_check, as_json);
        if (reproduce->parsed()) return run_reproduce(rep);
        throw ContractError("no subcommand given");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ContractError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return kExitIo;
    } catch (const GridError& e) {
        std::cerr << "error[precision]: " << e.what() << " (suggested max "
                  << e.suggested_x_max << ")\n";
        return kExitPrecision;
    } catch (const std::exception& e) {
        std::cerr << "error[precision]: " << e.what() << "\n";
        return kExitPrecision;
    }
}
