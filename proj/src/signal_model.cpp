#include "dmdoa/signal_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmdoa {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::MP: return "mp";
        case SignalKind::LFM: return "lfm";
        case SignalKind::SFM: return "sfm";
    }
    return "?";
}

SignalKind signal_kind_from_string(const std::string& name) {
    if (name == "mp") return SignalKind::MP;
    if (name == "lfm") return SignalKind::LFM;
    if (name == "sfm") return SignalKind::SFM;
    throw std::invalid_argument("unknown signal kind: " + name);
}

void SignalModel::validate() const {
    if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("signal: carrier_freq_hz must be > 0");
    if (!(pulse_width_s > 0.0)) throw std::invalid_argument("signal: pulse_width_s must be > 0");
    if (kind == SignalKind::LFM && !std::isfinite(chirp_rate()))
        throw std::invalid_argument("signal: LFM chirp rate not finite");
    if (kind == SignalKind::SFM) {
        if (!(sfm_mod_freq_hz > 0.0)) throw std::invalid_argument("signal: sfm_mod_freq_hz must be > 0");
    }
}

double SignalModel::omega_c() const { return kTwoPi * carrier_freq_hz; }

double SignalModel::chirp_rate() const {
    return kTwoPi * lfm_bandwidth_hz / pulse_width_s;
}

double SignalModel::phase(double t) const {
    switch (kind) {
        case SignalKind::MP:
            return omega_c() * t;
        case SignalKind::LFM:
            return omega_c() * t + 0.5 * chirp_rate() * t * t;
        case SignalKind::SFM:
            return omega_c() * t + sfm_mod_index * std::sin(kTwoPi * sfm_mod_freq_hz * t);
    }
    return 0.0;
}

double SignalModel::omega(double t) const {
    switch (kind) {
        case SignalKind::MP:
            return omega_c();
        case SignalKind::LFM:
            return omega_c() + chirp_rate() * t;
        case SignalKind::SFM:
            return omega_c() + sfm_mod_index * kTwoPi * sfm_mod_freq_hz * std::cos(kTwoPi * sfm_mod_freq_hz * t);
    }
    return 0.0;
}

double SignalModel::omega_derivative(double t, int order) const {
    if (order != 1 && order != 2) throw std::invalid_argument("omega_derivative: order must be 1 or 2");
    switch (kind) {
        case SignalKind::MP:
            return 0.0;
        case SignalKind::LFM:
            return order == 1 ? chirp_rate() : 0.0;
        case SignalKind::SFM: {
            const double wm = kTwoPi * sfm_mod_freq_hz;
            if (order == 1) return -sfm_mod_index * wm * wm * std::sin(wm * t);
            return -sfm_mod_index * wm * wm * wm * std::cos(wm * t);
        }
    }
    return 0.0;
}

std::complex<double> SignalModel::sample(double t) const {
    return std::polar(1.0, phase(t));
}

double SignalModel::max_abs_omega(double t0, double t1) const {
    switch (kind) {
        case SignalKind::MP:
            return omega_c();
        case SignalKind::LFM:
            return std::max(std::abs(omega(t0)), std::abs(omega(t1)));
        case SignalKind::SFM:
            // |cos| <= 1 bound; tight whenever the interval spans a modulation peak
            return omega_c() + std::abs(sfm_mod_index) * kTwoPi * sfm_mod_freq_hz;
    }
    return 0.0;
}

SignalModel make_mp(double carrier_freq_hz, double pulse_width_s) {
    SignalModel m{SignalKind::MP, carrier_freq_hz, pulse_width_s, 0.0, 0.0, 0.0};
    m.validate();
    return m;
}

SignalModel make_lfm(double carrier_freq_hz, double pulse_width_s, double bandwidth_hz) {
    SignalModel m{SignalKind::LFM, carrier_freq_hz, pulse_width_s, bandwidth_hz, 0.0, 0.0};
    m.validate();
    return m;
}

SignalModel make_sfm(double carrier_freq_hz, double pulse_width_s, double mod_freq_hz, double mod_index) {
    SignalModel m{SignalKind::SFM, carrier_freq_hz, pulse_width_s, 0.0, mod_freq_hz, mod_index};
    m.validate();
    return m;
}

} // namespace dmdoa
