#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "weakmeas/core_model.hpp"
#include "weakmeas/types.hpp"

namespace weakmeas {

/// One measured point of a detuning sweep: the phase detuning of the run, the
/// observable, its measured mean (units of w or w_p), and the statistical
/// error of that mean.
struct SweepPoint {
    double delta = 0.0;
    Observable observable = Observable::MeanPz;
    double measured = 0.0;
    double std_error = 0.0;
    std::int64_t n_events = 0;
};

enum class FitModel { PaperExpansion, ExactClosedForm, DerivativeLorentzian };

const char* to_string(FitModel model);
FitModel fit_model_from_string(const std::string& s);

/// Result of a response-curve fit. `params` carries the recovered weakness
/// ratio under "eta_hat"; the derivative-Lorentzian model additionally
/// reports its raw shape parameters ("amplitude", "eta0" = twice the
/// Lorentzian scale in the sweep variable).
struct FitReport {
    FitModel model = FitModel::ExactClosedForm;
    std::map<std::string, double> params;
    std::map<std::string, double> stderrs;
    double chi2 = 0.0;
    int ndf = 0;
    bool converged = false;
};

struct FitOptions {
    bool fit_amplitude = false;  ///< also fit an overall amplitude factor
    int max_iterations = 200;
    double step_tol = 1e-10;  ///< relative step size declaring convergence
};

/// Invert the AAV linear response for a single point:
/// eta_hat = measured / Re(A_w) for MeanZ, measured / Im(A_w) for MeanPz.
/// No validity-range enforcement; the bias outside the weak regime is the
/// quantity of interest. Throws OrthogonalPostselection or
/// VanishingSensitivity (weak-value component below tau_orth).
double estimate_eta_linear(const SweepPoint& point, const SpinState& pre,
                           const SpinState& post, const BeamGeometry& beam);

/// Weighted least-squares fit of a delta-sweep with weights 1/stderr^2.
/// Free parameters: eta (plus an optional overall amplitude); the
/// derivative-Lorentzian model fits (amplitude, scale) and derives eta_hat.
/// Optimizer: coarse scan of eta over 64 log-spaced points in [1e-4, 1],
/// then damped Gauss-Newton with numeric derivatives. Throws
/// InsufficientPoints for < 3 points or a sweep without a sign change or
/// turning point; non-convergence is reported via converged=false.
FitReport fit_response_curve(std::vector<SweepPoint> points, const SpinState& pre,
                             double epsilon_known, FitModel model,
                             const FitOptions& options = {});

struct AmplificationGain {
    double gain_z = 0.0;  ///< mean_z_exact / d
    double gain_p = 0.0;  ///< mean_pz_exact / (w_p eta)
};

/// Signal amplification of the post-selected means relative to the bare
/// displacement; both components are 0 at d = 0 by convention.
AmplificationGain amplification_gain(const MeasurementSetup& setup, Channel ch);

/// Parse sweep points from CSV with header delta,observable,measured,stderr,
/// n_events. '#' lines are comments; malformed or nonpositive-stderr rows are
/// skipped with a note on the warnings stream when one is given.
std::vector<SweepPoint> read_sweep_csv(std::istream& in, std::ostream* warnings = nullptr);

std::string sweep_points_to_csv(const std::vector<SweepPoint>& points);

/// FitReport as a single JSON object (keys: model, params, stderrs, chi2,
/// ndf, converged).
std::string fit_report_to_json(const FitReport& report);

}  // namespace weakmeas
