#pragma once

#include "weakmeas/types.hpp"

namespace weakmeas {

/// Coefficients (A, B) of the displaced envelopes in a post-selection band:
/// the band's amplitude is A*Phi(z-d) + B*Phi(z+d). The retained band has
/// A = alpha*conj(gamma), B = beta*conj(delta); the complement follows by the
/// substitution (gamma, delta) -> (conj(delta), -conj(gamma)).
struct ChannelAmplitudes {
    Complex up;    ///< multiplies Phi(z - d)
    Complex down;  ///< multiplies Phi(z + d)

    /// Interference coefficient up * conj(down).
    Complex cross() const { return up * std::conj(down); }
};

ChannelAmplitudes channel_amplitudes(const SpinState& pre, const SpinState& post, Channel ch);

/// Normalized transverse envelope Phi(z) = exp(-z^2/4w^2) / sqrt(w sqrt(2 pi)).
double gaussian_envelope(double z, const BeamGeometry& beam);

/// Dimensionless weak value of sigma_z, (alpha g* - beta d*)/(alpha g* + beta d*).
/// Throws OrthogonalPostselection when |<f|i>| <= tau_orth.
Complex weak_value(const SpinState& pre, const SpinState& post);

/// Detection density without post-selection: |a|^2 Phi^2(z-d) + |b|^2 Phi^2(z+d).
double preselected_pdf(double z, const MeasurementSetup& setup);

/// Mean displacement without post-selection, (|a|^2 - |b|^2) d.
double preselected_mean(const MeasurementSetup& setup);

/// Unnormalized band density q(z) = |A Phi(z-d) + B Phi(z+d)|^2, per incoming
/// particle. Summed over the two channels it reconstructs preselected_pdf.
double channel_density(double z, Channel ch, const MeasurementSetup& setup);

/// Fraction of all particles post-selected into the channel; in [0, 1].
double postselection_probability(Channel ch, const MeasurementSetup& setup);

/// Normalized detection density within the channel. Throws ZeroPostselection
/// when the channel probability is <= tau_prob.
double postselected_pdf(double z, Channel ch, const MeasurementSetup& setup);

/// Exact post-selected mean displacement, (|A|^2 - |B|^2) d / N.
double mean_z_exact(const MeasurementSetup& setup, Channel ch);

/// Exact post-selected mean transverse momentum,
/// Im(A conj(B)) exp(-d^2/2w^2) (hbar d / w^2) / N.
double mean_pz_exact(const MeasurementSetup& setup, Channel ch);

/// First-order-in-eta^2 displacement expansion, reproduced as printed:
/// (|A|^2 - |B|^2)(d/w) / (|A+B|^2 - Re(A conj(B)) (d/w)^2) * w.
double mean_z_small_eta(const MeasurementSetup& setup, Channel ch);

/// First-order-in-eta^2 momentum expansion, reproduced as printed:
/// 2 Im(A conj(B))(d/w) / (|A+B|^2 - Re(A conj(B)) (d/w)^2) * w_p.
double mean_pz_small_eta(const MeasurementSetup& setup, Channel ch);

/// AAV limit of the mean displacement, Re(A_w) d.
double mean_z_weak_limit(const MeasurementSetup& setup);

/// AAV limit of the mean momentum, w_p Im(A_w) (d/w).
double mean_pz_weak_limit(const MeasurementSetup& setup);

/// Margin of validity of the AAV limit: [ |A+B|^2 / |Re(A conj(B))| ] / (d/w)^2
/// for the retained band. Values >> 1 mean the weak-value limit applies.
/// Returns +infinity (unbounded) when Re(A conj(B)) = 0 or d = 0.
double aav_validity_margin(const MeasurementSetup& setup);

/// Build the post-selected state at amplitude detuning epsilon and phase
/// detuning delta from the orthogonal reference (gamma = i b*, delta = -i a*).
/// The whole phase detuning is assigned to gamma: arg(gamma) = pi/2 - arg(b)
/// + 2 delta, arg(delta) = -pi/2 - arg(a). Throws DetuningOutOfRange when
/// epsilon leaves [-|b|^2, |a|^2], AmplitudeVanishes on degenerate pre-states.
SpinState construct_detuned_postselection(const SpinState& pre, const DetuningParams& det);

/// Inverse of the detuning construction: epsilon = |g|^2 - |b|^2 and
/// delta = (pi - arg(a) + arg(b) + arg(g) - arg(d))/2 reduced into
/// (-pi/2, pi/2]. Throws AmplitudeVanishes when any amplitude magnitude is
/// below tau_orth.
DetuningParams extract_detuning(const SpinState& pre, const SpinState& post);

/// Printed leading-order detuned expansion of the mean displacement
/// (derivative-Lorentzian in the detunings), reproduced verbatim with no
/// correction; disagreements with the exact forms are report-only.
double mean_z_paper_expansion(const SpinState& pre, const DetuningParams& det, double eta,
                              const BeamGeometry& beam);

/// Printed leading-order detuned expansion of the mean momentum, verbatim.
double mean_pz_paper_expansion(const SpinState& pre, const DetuningParams& det, double eta,
                               const BeamGeometry& beam);

/// Saturation scale of the linear amplification:
/// eta_0 = sqrt(4 delta^2 + (|a|^-4 + |b|^-4) epsilon^2 / 8).
double eta_zero(const SpinState& pre, const DetuningParams& det);

}  // namespace weakmeas
