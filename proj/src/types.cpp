#include "weakmeas/types.hpp"

namespace weakmeas {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

const char* to_string(Channel ch) {
    return ch == Channel::Retained ? "retained" : "complement";
}

const char* to_string(Space sp) {
    return sp == Space::Position ? "position" : "momentum";
}

const char* to_string(Observable obs) {
    return obs == Observable::MeanZ ? "mean_z" : "mean_pz";
}

Channel channel_from_string(const std::string& s) {
    if (s == "retained") return Channel::Retained;
    if (s == "complement") return Channel::Complement;
    throw std::invalid_argument("unknown channel: " + s);
}

Space space_from_string(const std::string& s) {
    if (s == "position") return Space::Position;
    if (s == "momentum") return Space::Momentum;
    throw std::invalid_argument("unknown space: " + s);
}

Observable observable_from_string(const std::string& s) {
    if (s == "mean_z") return Observable::MeanZ;
    if (s == "mean_pz") return Observable::MeanPz;
    throw std::invalid_argument("unknown observable: " + s);
}

SpinState::SpinState(Complex a, Complex b) : a_(a), b_(b) {
    if (!finite(a_) || !finite(b_)) {
        throw std::invalid_argument("spin amplitudes must be finite");
    }
    const double norm2 = std::norm(a_) + std::norm(b_);
    if (norm2 <= 0.0) {
        throw std::invalid_argument("spin state must be a nonzero vector");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    a_ *= inv;
    b_ *= inv;
}

BeamGeometry::BeamGeometry(double width, double action) : w(width), hbar(action) {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("beam width must be positive and finite");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("hbar must be positive and finite");
    }
}

MeasurementSetup::MeasurementSetup(SpinState pre_state, SpinState post_state,
                                   BeamGeometry geometry, double displacement)
    : pre(pre_state), post(post_state), beam(geometry), d(displacement) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
        throw std::invalid_argument("displacement d must be nonnegative and finite");
    }
}

double reduce_mod_pi(double angle) {
    double r = std::remainder(angle, M_PI);  // lands in [-pi/2, pi/2]
    if (r <= -M_PI_2) r += M_PI;
    return r;
}

DetuningParams::DetuningParams(double epsilon, double delta)
    : epsilon_(epsilon), delta_(reduce_mod_pi(delta)) {
    if (!std::isfinite(epsilon_) || !std::isfinite(delta)) {
        throw std::invalid_argument("detuning parameters must be finite");
    }
}

}  // namespace weakmeas
