#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weakmeas/core_model.hpp"
#include "weakmeas/types.hpp"

namespace weakmeas {

/// Controls for the adaptive quadrature used by the brute-force checks.
struct QuadratureSpec {
    double half_width_sigmas = 12.0;
    double rel_tol = 1e-10;
    int max_depth = 40;

    QuadratureSpec() = default;
    QuadratureSpec(double half_width, double tolerance, int depth);
};

/// Adaptive-bisection Simpson quadrature of f over [a, b]. The tolerance is
/// rel_tol relative to the integral's total mass, with a 1e-14 absolute floor
/// near zero. Throws MaxDepthExceeded when bisection exhausts max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

/// Momentum-space wave function of a post-selection band, written analytically
/// as the Fourier transform of the band amplitude:
/// psi(p) = PhiTilde(p) [A exp(-i p d / hbar) + B exp(+i p d / hbar)],
/// with PhiTilde the Gaussian envelope of momentum width w_p = hbar/(2w).
struct MomentumWavefunction {
    MeasurementSetup setup;
    Channel channel;

    Complex amplitude(double p) const;
    double density(double p) const;  ///< |psi(p)|^2
};

/// Integral of the channel density; brute-force counterpart of
/// postselection_probability.
double oracle_postselection_probability(const MeasurementSetup& setup, Channel ch,
                                        const QuadratureSpec& spec = {});

/// Position-space quadrature mean, (integral z q dz) / (integral q dz).
double oracle_mean_z(const MeasurementSetup& setup, Channel ch,
                     const QuadratureSpec& spec = {});

/// Momentum-space quadrature mean over |psi(p)|^2.
double oracle_mean_pz(const MeasurementSetup& setup, Channel ch,
                      const QuadratureSpec& spec = {});

/// Grid of detuned configurations to compare exact forms, printed expansions,
/// and quadrature values side by side.
struct VerifyGrid {
    SpinState pre;
    std::vector<double> epsilons;
    std::vector<double> deltas;
    std::vector<double> etas;
    BeamGeometry beam{};
    Channel channel = Channel::Retained;
    QuadratureSpec quad{};
};

/// One comparison row; value fields are empty when the configuration has
/// vanishing post-selection probability.
struct VerifyRow {
    double epsilon = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    Observable observable = Observable::MeanZ;
    std::optional<double> exact;
    std::optional<double> paper_expansion;
    std::optional<double> oracle_value;
    std::optional<double> ratio_expansion_to_exact;
};

/// Evaluate both observables on every grid point, in units of w and w_p.
/// Throws std::invalid_argument on an empty grid axis.
std::vector<VerifyRow> verify_report(const VerifyGrid& grid);

/// CSV serialization with the fixed column set
/// epsilon,delta,eta,observable,exact,paper_expansion,oracle,ratio_expansion_to_exact.
std::string verify_rows_to_csv(const std::vector<VerifyRow>& rows);

}  // namespace weakmeas
