#include "weakmeas/sampler.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace weakmeas {

namespace {

constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;
constexpr double min_acceptance = 1e-6;
constexpr std::int64_t stall_window = 1'000'000;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

}  // namespace

CounterRng::CounterRng(RngSpec spec)
    : key_(mix64(mix64(spec.seed + golden_gamma) ^ (spec.stream + golden_gamma))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + (++counter_) * golden_gamma); }

double CounterRng::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on (0,1] x [0,1)
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

namespace {

struct ChannelSampler {
    ChannelAmplitudes amps;
    double probability;     // Born weight of the channel
    double mix_up;          // probability of proposing from the up-shifted Gaussian
    double norm_up_down;    // |A|^2 + |B|^2
    double coherent_bound;  // (|A| + |B|)^2, momentum envelope factor
};

ChannelSampler make_channel_sampler(const MeasurementSetup& setup, Channel ch) {
    ChannelSampler cs;
    cs.amps = channel_amplitudes(setup.pre, setup.post, ch);
    cs.probability = postselection_probability(ch, setup);
    const double a2 = std::norm(cs.amps.up);
    const double b2 = std::norm(cs.amps.down);
    cs.norm_up_down = a2 + b2;
    cs.mix_up = cs.norm_up_down > 0.0 ? a2 / cs.norm_up_down : 0.0;
    const double coherent = std::abs(cs.amps.up) + std::abs(cs.amps.down);
    cs.coherent_bound = coherent * coherent;
    return cs;
}

double acceptance_rate(const ChannelSampler& cs, Space space) {
    const double envelope_mass =
        space == Space::Position ? 2.0 * cs.norm_up_down : cs.coherent_bound;
    return envelope_mass > 0.0 ? cs.probability / envelope_mass : 0.0;
}

/// Draw one value from the channel's normalized density, in units of w
/// (position) or w_p (momentum). Counts proposals into `rejections` and
/// throws once a full stall window passes without an acceptance.
double draw_value(const ChannelSampler& cs, Space space, double eta, double window,
                  CounterRng& rng, std::int64_t& rejections) {
    while (true) {
        if (space == Space::Position) {
            const bool up = rng.next_uniform() < cs.mix_up;
            const double z = rng.next_normal() + (up ? eta : -eta);
            if (std::abs(z) <= window + eta) {  // keep values inside the documented window
                // target |A phi(z-eta) + B phi(z+eta)|^2 under envelope
                // 2|A|^2 phi^2(z-eta) + 2|B|^2 phi^2(z+eta), phi = exp(-x^2/4)
                const double gu = std::exp(-0.25 * (z - eta) * (z - eta));
                const double gd = std::exp(-0.25 * (z + eta) * (z + eta));
                const double target = std::norm(cs.amps.up * gu + cs.amps.down * gd);
                const double envelope = 2.0 * (std::norm(cs.amps.up) * gu * gu +
                                               std::norm(cs.amps.down) * gd * gd);
                assert(target <= envelope * (1.0 + 1e-12));
                if (rng.next_uniform() * envelope <= target) return z;
            }
        } else {
            const double p = rng.next_normal();
            if (std::abs(p) <= window) {
                // phase p d / hbar = (p/w_p)(d/w)/2 in dimensionless units
                const double target =
                    std::norm(cs.amps.up * std::polar(1.0, -0.5 * p * eta) +
                              cs.amps.down * std::polar(1.0, 0.5 * p * eta));
                assert(target <= cs.coherent_bound * (1.0 + 1e-12));
                if (rng.next_uniform() * cs.coherent_bound <= target) return p;
            }
        }
        if (++rejections >= stall_window) {
            throw RejectionStall("acceptance rate collapsed; near-degenerate setup");
        }
    }
}

}  // namespace

EventBatch sample_events(const MeasurementSetup& setup, std::int64_t n, RngSpec rng,
                         Space space) {
    if (n < 1) {
        throw std::invalid_argument("sample_events: n must be >= 1");
    }
    const ChannelSampler retained = make_channel_sampler(setup, Channel::Retained);
    const ChannelSampler complement = make_channel_sampler(setup, Channel::Complement);
    // Channels below tau_prob are unreachable; a reachable channel whose
    // expected acceptance is under the stall threshold cannot be sampled in a
    // bounded number of proposals, so fail up front instead of spinning.
    for (const ChannelSampler* cs : {&retained, &complement}) {
        if (cs->probability > tau_prob && acceptance_rate(*cs, space) < min_acceptance) {
            throw RejectionStall("expected acceptance below 1e-6; near-degenerate setup");
        }
    }
    const double window = 12.0;
    const double eta = setup.eta();
    CounterRng gen(rng);
    EventBatch batch{{}, setup, rng, n};
    batch.events.reserve(static_cast<std::size_t>(n));
    std::int64_t rejections = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        bool keep;
        if (retained.probability <= tau_prob) {
            keep = false;  // unreachable channel, never selected
        } else if (complement.probability <= tau_prob) {
            keep = true;
        } else {
            keep = gen.next_uniform() < retained.probability;
        }
        const ChannelSampler& cs = keep ? retained : complement;
        const double value = draw_value(cs, space, eta, window, gen, rejections);
        rejections = 0;
        batch.events.push_back(
            {keep ? Channel::Retained : Channel::Complement, value, space});
    }
    return batch;
}

std::map<Channel, ChannelStats> empirical_summary(const EventBatch& batch) {
    if (batch.events.empty()) {
        throw std::invalid_argument("empirical_summary: batch is empty");
    }
    std::map<Channel, ChannelStats> stats;
    std::map<Channel, double> sums;
    for (const Event& ev : batch.events) {
        stats[ev.channel].count += 1;
        sums[ev.channel] += ev.value;
    }
    for (auto& [ch, st] : stats) {
        st.mean = sums[ch] / static_cast<double>(st.count);
    }
    std::map<Channel, double> sq;
    for (const Event& ev : batch.events) {
        const double r = ev.value - stats[ev.channel].mean;
        sq[ev.channel] += r * r;
    }
    for (auto& [ch, st] : stats) {
        if (st.count >= 2) {
            st.variance = sq[ch] / static_cast<double>(st.count - 1);
            st.std_error = std::sqrt(st.variance / static_cast<double>(st.count));
        } else {
            st.variance = std::nan("");
            st.std_error = std::nan("");
        }
    }
    return stats;
}

void write_event_csv(std::ostream& out, const EventBatch& batch) {
    out << "# dimensionless values: position in units of w, momentum in units of w_p\n";
    out << "index,channel,space,value\n";
    char buf[40];
    for (std::size_t i = 0; i < batch.events.size(); ++i) {
        const Event& ev = batch.events[i];
        std::snprintf(buf, sizeof(buf), "%.17g", ev.value);
        out << i << ',' << to_string(ev.channel) << ',' << to_string(ev.space) << ',' << buf
            << '\n';
    }
}

}  // namespace weakmeas
