#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risop/analytic.hpp"
#include "risop/montecarlo.hpp"
#include "risop/specfun.hpp"
#include "risop/surrogate.hpp"

namespace py = pybind11;
using namespace risop;

namespace {

McConfig make_mc_config(std::uint64_t n_samples, std::uint64_t seed, double confidence,
                        int workers) {
    McConfig cfg;
    cfg.n_samples = n_samples;
    cfg.seed = seed;
    cfg.confidence = confidence;
    cfg.workers = workers;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_risop, m) {
    m.doc() = "outage probability of RIS-assisted D2D links under co-channel interference";

    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);
    py::register_exception<TrainingError>(m, "TrainingError", PyExc_RuntimeError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init<int, double, double, double, double, double, double, double>(),
             py::arg("n_elements"), py::arg("sigma_sr") = 1.0, py::arg("sigma_rd") = 1.0,
             py::arg("sigma_ir") = 1.0, py::arg("sigma_id") = 1.0, py::arg("snr_db") = 10.0,
             py::arg("inr_db") = 0.0, py::arg("gamma_th_db") = 0.0)
        .def_readonly("n_elements", &SystemParams::n_elements)
        .def_readonly("sigma_sr", &SystemParams::sigma_sr)
        .def_readonly("sigma_rd", &SystemParams::sigma_rd)
        .def_readonly("sigma_ir", &SystemParams::sigma_ir)
        .def_readonly("sigma_id", &SystemParams::sigma_id)
        .def_readonly("snr_db", &SystemParams::snr_db)
        .def_readonly("inr_db", &SystemParams::inr_db)
        .def_readonly("gamma_th_db", &SystemParams::gamma_th_db)
        .def_readonly("gamma_bar_lin", &SystemParams::gamma_bar_lin)
        .def_readonly("gamma_th_lin", &SystemParams::gamma_th_lin);

    py::class_<GammaFit>(m, "GammaFit")
        .def(py::init([](double shape, double scale) { return GammaFit{shape, scale}; }),
             py::arg("shape"), py::arg("scale"))
        .def_readonly("shape", &GammaFit::shape)
        .def_readonly("scale", &GammaFit::scale)
        .def("mean", &GammaFit::mean)
        .def("variance", &GammaFit::variance);

    py::class_<PdfGrid>(m, "PdfGrid")
        .def_readonly("support", &PdfGrid::support)
        .def_readonly("density", &PdfGrid::density)
        .def_property_readonly("method", [](const PdfGrid& g) { return to_string(g.method); })
        .def("integral", &PdfGrid::integral)
        .def("at", &PdfGrid::at);

    py::class_<OutageEstimate>(m, "OutageEstimate")
        .def_readonly("value", &OutageEstimate::value)
        .def_readonly("err", &OutageEstimate::err)
        .def_property_readonly("method",
                               [](const OutageEstimate& e) { return to_string(e.method); })
        .def_readonly("degraded_accuracy", &OutageEstimate::degraded_accuracy)
        .def_readonly("clamped", &OutageEstimate::clamped)
        .def_readonly("extrapolation", &OutageEstimate::extrapolation)
        .def("__repr__", [](const OutageEstimate& e) {
            return "<OutageEstimate " + std::to_string(e.value) + " (" + to_string(e.method) +
                   ")>";
        });

    py::class_<DiversityReport>(m, "DiversityReport")
        .def_readonly("diversity_order", &DiversityReport::diversity_order)
        .def_readonly("coding_gain", &DiversityReport::coding_gain);

    // analytic chain
    m.def("gamma_fit_x", &gamma_fit_x, py::arg("params"));
    m.def("gamma_fit_y2", &gamma_fit_y2, py::arg("params"));
    m.def("ey2_moment", &ey2_moment, py::arg("params"));
    m.def("ey4_corrected", &ey4_corrected, py::arg("params"));
    m.def("pdf_x_single_term", &pdf_x_single_term, py::arg("params"), py::arg("h"));
    m.def(
        "pdf_x_exact",
        [](const SystemParams& p, int n_points, double x_max) {
            GridSpec spec;
            spec.n_points = n_points;
            spec.x_max = x_max;
            return pdf_x_exact(p, spec);
        },
        py::arg("params"), py::arg("n_points") = 0, py::arg("x_max") = 0.0);
    m.def(
        "pdf_y_exact",
        [](const SystemParams& p, int n_points, double y_max) {
            GridSpec spec;
            spec.n_points = n_points;
            spec.x_max = y_max;
            return pdf_y_exact(p, spec);
        },
        py::arg("params"), py::arg("n_points") = 0, py::arg("y_max") = 0.0);
    m.def("pdf_y_point", &pdf_y_point, py::arg("params"), py::arg("y"),
          py::arg("rel_tol") = 1e-8);
    m.def("pdf_y_series", &pdf_y_series, py::arg("params"), py::arg("y"), py::arg("m_max") = 40);
    m.def("op_exact", &op_exact, py::arg("params"));
    m.def("op_approx_closed",
          py::overload_cast<const GammaFit&, const GammaFit&, double, double>(&op_approx_closed),
          py::arg("fit_x"), py::arg("fit_y"), py::arg("gamma_th_lin"), py::arg("gamma_bar_lin"));
    m.def("op_approx_closed", py::overload_cast<const SystemParams&>(&op_approx_closed),
          py::arg("params"));
    m.def("op_approx_numeric",
          py::overload_cast<const GammaFit&, const GammaFit&, double, double>(&op_approx_numeric),
          py::arg("fit_x"), py::arg("fit_y"), py::arg("gamma_th_lin"), py::arg("gamma_bar_lin"));
    m.def("op_approx_numeric", py::overload_cast<const SystemParams&>(&op_approx_numeric),
          py::arg("params"));
    m.def("op_asymptotic",
          py::overload_cast<const GammaFit&, const GammaFit&, double, double>(&op_asymptotic),
          py::arg("fit_x"), py::arg("fit_y"), py::arg("gamma_th_lin"), py::arg("gamma_bar_lin"));
    m.def("op_asymptotic", py::overload_cast<const SystemParams&>(&op_asymptotic),
          py::arg("params"));
    m.def("diversity_and_coding", &diversity_and_coding, py::arg("fit_x"), py::arg("fit_y"),
          py::arg("gamma_th_lin") = 1.0);

    // Monte Carlo oracle
    m.def(
        "estimate_op_mc",
        [](const SystemParams& p, std::uint64_t n_samples, std::uint64_t seed, double confidence,
           int workers) {
            return estimate_op_mc(p, make_mc_config(n_samples, seed, confidence, workers));
        },
        py::arg("params"), py::arg("n_samples") = 10000, py::arg("seed") = 1,
        py::arg("confidence") = 0.99, py::arg("workers") = 0);
    m.def(
        "empirical_pdf",
        [](const SystemParams& p, const std::string& variable, std::uint64_t n_samples,
           std::uint64_t seed, int bins, int workers) {
            McVariable v = variable == "x" ? McVariable::X : McVariable::Y;
            return empirical_pdf(v, p, make_mc_config(n_samples, seed, 0.99, workers), bins);
        },
        py::arg("params"), py::arg("variable"), py::arg("n_samples") = 100000,
        py::arg("seed") = 1, py::arg("bins") = 100, py::arg("workers") = 0);

    // surrogate
    py::class_<DatasetRecord>(m, "DatasetRecord")
        .def(py::init([](std::array<double, 7> input, double target) {
                 DatasetRecord r;
                 r.input = input;
                 r.target = target;
                 return r;
             }),
             py::arg("input"), py::arg("target"))
        .def_readonly("input", &DatasetRecord::input)
        .def_readonly("target", &DatasetRecord::target);

    py::class_<MlpModel>(m, "MlpModel")
        .def_readonly("layer_sizes", &MlpModel::layer_sizes)
        .def_readonly("log_targets", &MlpModel::log_targets)
        .def_property_readonly("best_epoch", [](const MlpModel& m) { return m.meta.best_epoch; })
        .def_property_readonly("val_mse", [](const MlpModel& m) { return m.meta.val_mse; });

    m.def(
        "generate_dataset",
        [](int n_records, const std::string& label_method, std::uint64_t seed, int workers,
           std::uint64_t mc_samples) {
            GenerateOptions opt;
            opt.method = label_method_from_string(label_method);
            opt.seed = seed;
            opt.workers = workers;
            opt.mc_samples = mc_samples;
            return generate_dataset(n_records, SamplingRanges{}, opt);
        },
        py::arg("n_records"), py::arg("label_method") = "exact", py::arg("seed") = 1,
        py::arg("workers") = 0, py::arg("mc_samples") = 1000000);
    m.def("save_dataset", &save_dataset, py::arg("dataset"), py::arg("path"));
    m.def("load_dataset", &load_dataset, py::arg("path"));
    m.def(
        "split_dataset",
        [](const Dataset& ds, double train, double test, double validation, std::uint64_t seed) {
            SplitResult s = split_dataset(ds, {train, test, validation}, seed);
            return py::make_tuple(s.train, s.test, s.validation);
        },
        py::arg("dataset"), py::arg("train") = 0.7, py::arg("test") = 0.1,
        py::arg("validation") = 0.2, py::arg("seed") = 1);
    m.def(
        "train_lm",
        [](const Dataset& train, const Dataset& validation, int max_epochs, int patience,
           std::uint64_t seed, bool log_targets, int workers) {
            LmOptions opt;
            opt.max_epochs = max_epochs;
            opt.patience = patience;
            opt.log_targets = log_targets;
            opt.workers = workers;
            auto [model, report] = train_lm(train, validation, opt, seed);
            py::dict rep;
            rep["train_mse"] = report.train_mse;
            rep["val_mse"] = report.val_mse;
            rep["best_epoch"] = report.best_epoch;
            rep["stop_epoch"] = report.stop_epoch;
            return py::make_tuple(model, rep);
        },
        py::arg("train"), py::arg("validation"), py::arg("max_epochs") = 1000,
        py::arg("patience") = 6, py::arg("seed") = 1, py::arg("log_targets") = false,
        py::arg("workers") = 0);
    m.def("predict_op", &predict_op, py::arg("model"), py::arg("input"));
    m.def(
        "regression_metrics",
        [](const MlpModel& m, const Dataset& split) {
            RegressionMetrics rm = regression_metrics(m, split);
            return py::make_tuple(rm.mse, rm.r);
        },
        py::arg("model"), py::arg("split"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));

    // special-function kernels
    auto sf = m.def_submodule("specfun", "special-function kernels");
    sf.def("ln_gamma", &ln_gamma);
    sf.def("reg_lower_gamma", &reg_lower_gamma);
    sf.def("bessel_j0", &bessel_j0);
    sf.def("bessel_i0", &bessel_i0);
    sf.def("bessel_k0", &bessel_k0);
    sf.def("kummer_1f1", [](double a, double b, double x) { return kummer_1f1(a, b, x); });
    sf.def("hyp_1f2",
           [](double a, double b1, double b2, double x) { return hyp_1f2(a, b1, b2, x); });
    sf.def("pcf_d", [](double nu, double z) { return pcf_d(nu, z); });
    sf.def("ln_pcf_d_neg", &ln_pcf_d_neg);

    m.attr("__version__") = "0.1.0";
}
