#include "weakmeas/core_model.hpp"

#include <algorithm>
#include <limits>

namespace weakmeas {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

/// Channel norm N = |A|^2 + |B|^2 + 2 Re(A conj(B)) exp(-eta^2/2), clamped to [0, 1].
double channel_norm(const ChannelAmplitudes& amps, double eta) {
    const double n = std::norm(amps.up) + std::norm(amps.down) +
                     2.0 * amps.cross().real() * std::exp(-0.5 * eta * eta);
    return std::clamp(n, 0.0, 1.0);
}

double checked_channel_norm(const ChannelAmplitudes& amps, double eta) {
    const double n = channel_norm(amps, eta);
    if (n <= tau_prob) {
        throw ZeroPostselection("post-selection probability vanishes for this channel");
    }
    return n;
}

void require_nondegenerate_pre(const SpinState& pre) {
    if (std::abs(pre.a()) < tau_orth || std::abs(pre.b()) < tau_orth) {
        throw AmplitudeVanishes("pre-state amplitude vanishes; detuning phases are undefined");
    }
}

}  // namespace

ChannelAmplitudes channel_amplitudes(const SpinState& pre, const SpinState& post, Channel ch) {
    if (ch == Channel::Retained) {
        return {pre.a() * std::conj(post.a()), pre.b() * std::conj(post.b())};
    }
    // complement band: (gamma, delta) -> (conj(delta), -conj(gamma))
    return {pre.a() * post.b(), -pre.b() * post.a()};
}

double gaussian_envelope(double z, const BeamGeometry& beam) {
    const double u = z / beam.w;
    return std::exp(-0.25 * u * u) / std::sqrt(beam.w * std::sqrt(2.0 * M_PI));
}

Complex weak_value(const SpinState& pre, const SpinState& post) {
    const ChannelAmplitudes amps = channel_amplitudes(pre, post, Channel::Retained);
    const Complex overlap = amps.up + amps.down;  // <f|i>
    if (std::abs(overlap) <= tau_orth) {
        throw OrthogonalPostselection("orthogonal post-selection: <f|i> vanishes");
    }
    return (amps.up - amps.down) / overlap;
}

double preselected_pdf(double z, const MeasurementSetup& setup) {
    const double phi_up = gaussian_envelope(z - setup.d, setup.beam);
    const double phi_down = gaussian_envelope(z + setup.d, setup.beam);
    return std::norm(setup.pre.a()) * phi_up * phi_up +
           std::norm(setup.pre.b()) * phi_down * phi_down;
}

double preselected_mean(const MeasurementSetup& setup) {
    return (std::norm(setup.pre.a()) - std::norm(setup.pre.b())) * setup.d;
}

double channel_density(double z, Channel ch, const MeasurementSetup& setup) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const Complex amp = amps.up * gaussian_envelope(z - setup.d, setup.beam) +
                        amps.down * gaussian_envelope(z + setup.d, setup.beam);
    return std::norm(amp);
}

double postselection_probability(Channel ch, const MeasurementSetup& setup) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    return channel_norm(amps, setup.eta());
}

double postselected_pdf(double z, Channel ch, const MeasurementSetup& setup) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const double norm = checked_channel_norm(amps, setup.eta());
    return channel_density(z, ch, setup) / norm;
}

double mean_z_exact(const MeasurementSetup& setup, Channel ch) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const double norm = checked_channel_norm(amps, setup.eta());
    return (std::norm(amps.up) - std::norm(amps.down)) * setup.d / norm;
}

double mean_pz_exact(const MeasurementSetup& setup, Channel ch) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const double eta = setup.eta();
    const double norm = checked_channel_norm(amps, eta);
    return amps.cross().imag() * std::exp(-0.5 * eta * eta) * setup.beam.hbar * setup.d /
           (setup.beam.w * setup.beam.w) / norm;
}

double mean_z_small_eta(const MeasurementSetup& setup, Channel ch) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const double eta = setup.eta();
    checked_channel_norm(amps, eta);
    const double den = std::norm(amps.up + amps.down) - amps.cross().real() * eta * eta;
    return (std::norm(amps.up) - std::norm(amps.down)) * eta / den * setup.beam.w;
}

double mean_pz_small_eta(const MeasurementSetup& setup, Channel ch) {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, ch);
    const double eta = setup.eta();
    checked_channel_norm(amps, eta);
    const double den = std::norm(amps.up + amps.down) - amps.cross().real() * eta * eta;
    return 2.0 * amps.cross().imag() * eta / den * setup.beam.wp();
}

double mean_z_weak_limit(const MeasurementSetup& setup) {
    return weak_value(setup.pre, setup.post).real() * setup.d;
}

double mean_pz_weak_limit(const MeasurementSetup& setup) {
    return setup.beam.wp() * weak_value(setup.pre, setup.post).imag() * setup.eta();
}

double aav_validity_margin(const MeasurementSetup& setup) {
    const ChannelAmplitudes amps =
        channel_amplitudes(setup.pre, setup.post, Channel::Retained);
    const double re_cross = std::abs(amps.cross().real());
    const double eta = setup.eta();
    if (re_cross == 0.0 || eta == 0.0) return inf;
    return std::norm(amps.up + amps.down) / re_cross / (eta * eta);
}

SpinState construct_detuned_postselection(const SpinState& pre, const DetuningParams& det) {
    require_nondegenerate_pre(pre);
    const double gamma2 = std::norm(pre.b()) + det.epsilon();
    const double delta2 = std::norm(pre.a()) - det.epsilon();
    if (gamma2 < -tau_orth || delta2 < -tau_orth) {
        throw DetuningOutOfRange("epsilon outside [-|b|^2, |a|^2]");
    }
    const double phase_gamma = M_PI_2 - pre.phase_b() + 2.0 * det.delta();
    const double phase_delta = -M_PI_2 - pre.phase_a();
    return SpinState(std::polar(std::sqrt(std::max(gamma2, 0.0)), phase_gamma),
                     std::polar(std::sqrt(std::max(delta2, 0.0)), phase_delta));
}

DetuningParams extract_detuning(const SpinState& pre, const SpinState& post) {
    if (std::abs(pre.a()) < tau_orth || std::abs(pre.b()) < tau_orth ||
        std::abs(post.a()) < tau_orth || std::abs(post.b()) < tau_orth) {
        throw AmplitudeVanishes("vanishing amplitude: phase angle undefined");
    }
    const double epsilon = std::norm(post.a()) - std::norm(pre.b());
    const double delta =
        0.5 * (M_PI - pre.phase_a() + pre.phase_b() + post.phase_a() - post.phase_b());
    return DetuningParams(epsilon, delta);  // ctor reduces delta mod pi
}

namespace {

/// Shared denominator of the printed detuned expansions:
/// 4 delta^2 + (|a|^-4 + |b|^-4) epsilon^2 / 8 + eta^2.
double expansion_denominator(const SpinState& pre, const DetuningParams& det, double eta) {
    const double a2 = std::norm(pre.a());
    const double b2 = std::norm(pre.b());
    const double coeff = 1.0 / (a2 * a2) + 1.0 / (b2 * b2);
    return 4.0 * det.delta() * det.delta() + coeff * det.epsilon() * det.epsilon() / 8.0 +
           eta * eta;
}

}  // namespace

double mean_z_paper_expansion(const SpinState& pre, const DetuningParams& det, double eta,
                              const BeamGeometry& beam) {
    require_nondegenerate_pre(pre);
    const double a2 = std::norm(pre.a());
    const double b2 = std::norm(pre.b());
    const double num = 2.0 * det.epsilon() * eta;
    if (num == 0.0) return 0.0;
    const double prefactor_den = 2.0 * a2 * b2 + det.epsilon() * (a2 - b2);
    return num / prefactor_den / expansion_denominator(pre, det, eta) * beam.w;
}

double mean_pz_paper_expansion(const SpinState& pre, const DetuningParams& det, double eta,
                               const BeamGeometry& beam) {
    require_nondegenerate_pre(pre);
    const double num = 2.0 * det.delta() * eta;
    if (num == 0.0) return 0.0;
    return num / expansion_denominator(pre, det, eta) * beam.wp();
}

double eta_zero(const SpinState& pre, const DetuningParams& det) {
    require_nondegenerate_pre(pre);
    return std::sqrt(expansion_denominator(pre, det, 0.0));
}

}  // namespace weakmeas
