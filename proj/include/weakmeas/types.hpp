#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace weakmeas {

using Complex = std::complex<double>;

/// Tolerance below which a post-selection overlap counts as orthogonal.
inline constexpr double tau_orth = 1e-12;
/// Tolerance below which a channel's post-selection probability counts as zero.
inline constexpr double tau_prob = 1e-14;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class OrthogonalPostselection : public Error {
  public:
    using Error::Error;
};

class ZeroPostselection : public Error {
  public:
    using Error::Error;
};

class DetuningOutOfRange : public Error {
  public:
    using Error::Error;
};

class AmplitudeVanishes : public Error {
  public:
    using Error::Error;
};

class VanishingSensitivity : public Error {
  public:
    using Error::Error;
};

class MaxDepthExceeded : public Error {
  public:
    using Error::Error;
};

class RejectionStall : public Error {
  public:
    using Error::Error;
};

class InsufficientPoints : public Error {
  public:
    using Error::Error;
};

/// The two disjoint post-selection outcome bands.
enum class Channel { Retained, Complement };

enum class Space { Position, Momentum };

enum class Observable { MeanZ, MeanPz };

const char* to_string(Channel ch);
const char* to_string(Space sp);
const char* to_string(Observable obs);
Channel channel_from_string(const std::string& s);
Space space_from_string(const std::string& s);
Observable observable_from_string(const std::string& s);

/// Normalized two-level internal state (a, b). The constructor rescales the
/// amplitudes to unit norm and rejects zero or non-finite input.
class SpinState {
  public:
    SpinState(Complex a, Complex b);

    Complex a() const { return a_; }
    Complex b() const { return b_; }

    double phase_a() const { return std::arg(a_); }
    double phase_b() const { return std::arg(b_); }

  private:
    Complex a_;
    Complex b_;
};

/// Transverse beam geometry at the detector plane.
struct BeamGeometry {
    double w = 1.0;
    double hbar = 1.0;

    BeamGeometry() = default;
    BeamGeometry(double width, double action);

    /// Width of the Gaussian momentum distribution, hbar/(2 w).
    double wp() const { return hbar / (2.0 * w); }
};

/// Pre-/post-selected weak measurement configuration: internal states, beam,
/// and the weak Stern-Gerlach displacement d >= 0.
struct MeasurementSetup {
    SpinState pre;
    SpinState post;
    BeamGeometry beam;
    double d = 0.0;

    MeasurementSetup(SpinState pre_state, SpinState post_state, BeamGeometry geometry,
                     double displacement);

    /// Weakness ratio d/w.
    double eta() const { return d / beam.w; }
};

/// Amplitude detuning epsilon and phase detuning delta of the post-selected
/// state relative to exact orthogonality. delta is stored reduced mod pi into
/// (-pi/2, pi/2]; the epsilon range check depends on the pre-state and is
/// enforced where the post-state is built.
class DetuningParams {
  public:
    DetuningParams(double epsilon, double delta);

    double epsilon() const { return epsilon_; }
    double delta() const { return delta_; }

  private:
    double epsilon_;
    double delta_;
};

/// Reduce an angle mod pi into (-pi/2, pi/2].
double reduce_mod_pi(double angle);

}  // namespace weakmeas
