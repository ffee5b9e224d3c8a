#ifndef RISOP_SURROGATE_HPP
#define RISOP_SURROGATE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "risop/estimates.hpp"
#include "risop/params.hpp"

namespace risop {

/// Feature order of the surrogate input vector.
enum InputIndex : int {
    kInGammaThDb = 0,
    kInGammaBarDb,
    kInSigmaSr,
    kInSigmaRd,
    kInSigmaIr,
    kInSigmaId,
    kInNElements,
};

struct DatasetRecord {
    std::array<double, 7> input{};
    double target = 0.0; // outage probability in [0, 1]
};

using Dataset = std::vector<DatasetRecord>;

/// Scenario reconstructed from a record; only the average SIR matters, so the
/// INR slot is pinned at 0 dB.
SystemParams params_from_input(const std::array<double, 7>& input, double gamma_th_db_override);
SystemParams params_from_input(const std::array<double, 7>& input);

struct SamplingRanges {
    std::array<double, 2> gamma_th_db{-10.0, 10.0};
    std::array<double, 2> snr_db{0.0, 30.0};
    std::array<double, 2> inr_db{-10.0, 15.0};
    std::array<double, 2> sigma{0.5, 2.0};
    std::array<int, 2> n_elements{2, 64};
};

enum class LabelMethod { exact_numeric, gamma_numeric, monte_carlo };

std::string to_string(LabelMethod m);
LabelMethod label_method_from_string(const std::string& name);

struct GenerateOptions {
    LabelMethod method = LabelMethod::exact_numeric;
    std::uint64_t seed = 1;
    int workers = 0;
    std::uint64_t mc_samples = 1000000; // for the monte_carlo label method
};

/// i.i.d. uniform sampling of scenarios over the ranges; records whose label
/// computation fails are skipped and logged to stderr, never zero-filled.
Dataset generate_dataset(int n_records, const SamplingRanges& ranges, const GenerateOptions& opt);

/// Delimited text, header
/// gamma_th_db,gamma_bar_db,sigma_sr,sigma_rd,sigma_ir,sigma_id,n_elements,p_out
void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

struct SplitResult {
    Dataset train, test, validation;
};

/// Seeded shuffle-split into train/test/validation (fractions in that order).
SplitResult split_dataset(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed);

/// 7-20-30-20-1 multilayer perceptron, tanh hidden activations, identity
/// output; inputs min-max normalized to [-1, 1] per feature.
struct MlpModel {
    std::vector<int> layer_sizes{7, 20, 30, 20, 1};
    std::vector<std::vector<double>> weights; // per layer, row-major [out][in]
    std::vector<std::vector<double>> biases;  // per layer
    std::array<double, 7> norm_min{};
    std::array<double, 7> norm_max{};
    bool log_targets = false; // train on log10(OP) instead of raw OP

    struct Meta {
        std::uint64_t seed = 0;
        int best_epoch = -1;
        double val_mse = -1.0;
    } meta;

    /// Raw network output (before clamping / log-target inversion).
    double forward(const std::array<double, 7>& input) const;
};

/// Freshly initialized model: seeded scaled-uniform weights (fan-in based),
/// zero biases, unit normalization.
MlpModel init_model(std::uint64_t seed);

std::size_t param_count(const MlpModel& m);
double get_param(const MlpModel& m, std::size_t flat_index);
void set_param(MlpModel& m, std::size_t flat_index, double value);

/// Derivative of the raw output with respect to every parameter (flattened in
/// the get_param order); shared by the trainer and the finite-difference test.
void model_gradient(const MlpModel& m, const std::array<double, 7>& input,
                    std::vector<double>& grad_out);

struct LmOptions {
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 0.1;
    int max_epochs = 1000;
    int patience = 6;
    int max_retries = 60;
    bool log_targets = false;
    int workers = 0;
};

struct TrainReport {
    std::vector<double> train_mse; // per epoch, after the accepted step
    std::vector<double> val_mse;
    int best_epoch = -1; // 1-based
    int stop_epoch = -1;
};

/// Full-batch Levenberg-Marquardt: solves (J^T J + lambda I) delta = J^T r
/// each epoch, accepts the step only if the train MSE decreases, and stops
/// when the validation MSE has not improved for `patience` epochs.  Returns
/// the weights of the best validation epoch.
std::pair<MlpModel, TrainReport> train_lm(const Dataset& train, const Dataset& validation,
                                          const LmOptions& opt = {}, std::uint64_t seed = 1);

/// Forward pass clamped to [0, 1]; err carries the model's validation RMSE.
/// Inputs more than 10% of the training range outside it set the
/// extrapolation flag.
OutageEstimate predict_op(const MlpModel& m, const std::array<double, 7>& input);

struct RegressionMetrics {
    double mse = 0.0;
    double r = 0.0; // Pearson correlation predicted vs true
};

RegressionMetrics regression_metrics(const MlpModel& m, const Dataset& split);

/// Structured text (JSON) model document, round-trip exact.
void save_model(const MlpModel& m, const std::string& path);
MlpModel load_model(const std::string& path);

} // namespace risop

#endif
