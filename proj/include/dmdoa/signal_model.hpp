#ifndef DMDOA_SIGNAL_MODEL_HPP
#define DMDOA_SIGNAL_MODEL_HPP

#include <complex>
#include <string>

namespace dmdoa {

enum class SignalKind { MP, LFM, SFM };

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

/// Analytic non-stationary waveform with unit envelope. The phase law is
/// closed-form on all of R, so delayed arguments can be evaluated exactly;
/// pulse_width_s sets the nominal pulse support [0, T_p].
///
///   MP:  phi(t) = w_c t
///   LFM: phi(t) = w_c t + 0.5 k t^2,  k = 2 pi B / T_p
///   SFM: phi(t) = w_c t + beta sin(2 pi f_m t)
struct SignalModel {
    SignalKind kind = SignalKind::MP;
    double carrier_freq_hz = 0.0;
    double pulse_width_s = 0.0;
    double lfm_bandwidth_hz = 0.0; // LFM only; 0 degenerates to MP
    double sfm_mod_freq_hz = 0.0;  // SFM only
    double sfm_mod_index = 0.0;    // SFM only (beta)

    void validate() const;

    double omega_c() const;    // 2 pi f_c, rad/s
    double chirp_rate() const; // 2 pi B / T_p, rad/s^2

    double phase(double t) const;             // phi(t), radians
    double omega(double t) const;             // d phi / dt, rad/s
    double omega_derivative(double t, int order) const; // order 1 or 2
    std::complex<double> sample(double t) const;        // e^{j phi(t)}

    /// Largest |omega| over [t0, t1]; drives the default sample-rate choice.
    double max_abs_omega(double t0, double t1) const;
};

SignalModel make_mp(double carrier_freq_hz, double pulse_width_s);
SignalModel make_lfm(double carrier_freq_hz, double pulse_width_s, double bandwidth_hz);
SignalModel make_sfm(double carrier_freq_hz, double pulse_width_s, double mod_freq_hz, double mod_index);

} // namespace dmdoa

#endif
