#ifndef RISOP_PARAMS_HPP
#define RISOP_PARAMS_HPP

#include <cmath>
#include <string>

#include "risop/errors.hpp"

namespace risop {

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Physical parameters of one scenario: RIS size, the four channel amplitude
/// std-dev parameters, average SNR/INR and the SIR threshold.  dB values are
/// converted to linear exactly once, here.
struct SystemParams {
    int n_elements = 1;
    double sigma_sr = 1.0;
    double sigma_rd = 1.0;
    double sigma_ir = 1.0;
    double sigma_id = 1.0;
    double snr_db = 0.0;
    double inr_db = 0.0;
    double gamma_th_db = 0.0;

    // derived linear values
    double snr_lin = 1.0;
    double inr_lin = 1.0;
    double gamma_bar_lin = 1.0; // average SIR, snr/inr
    double gamma_th_lin = 1.0;

    SystemParams() = default;

    SystemParams(int n, double s_sr, double s_rd, double s_ir, double s_id,
                 double snr_decibel, double inr_decibel, double gamma_th_decibel)
        : n_elements(n),
          sigma_sr(s_sr),
          sigma_rd(s_rd),
          sigma_ir(s_ir),
          sigma_id(s_id),
          snr_db(snr_decibel),
          inr_db(inr_decibel),
          gamma_th_db(gamma_th_decibel) {
        if (n_elements < 1)
            throw ContractError("SystemParams: n_elements must be >= 1");
        for (double s : {sigma_sr, sigma_rd, sigma_ir, sigma_id})
            if (!(s > 0.0) || !std::isfinite(s))
                throw ContractError("SystemParams: all sigma parameters must be > 0");
        for (double d : {snr_db, inr_db, gamma_th_db})
            if (!std::isfinite(d))
                throw ContractError("SystemParams: dB parameters must be finite");
        snr_lin = db_to_lin(snr_db);
        inr_lin = db_to_lin(inr_db);
        gamma_bar_lin = snr_lin / inr_lin;
        gamma_th_lin = db_to_lin(gamma_th_db);
    }
};

} // namespace risop

#endif
