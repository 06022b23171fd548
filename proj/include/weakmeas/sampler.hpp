#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "weakmeas/core_model.hpp"
#include "weakmeas/types.hpp"

namespace weakmeas {

/// Seed/stream pair selecting one reproducible random sequence. Distinct
/// streams under the same seed are statistically independent, so parallel
/// workers can sample disjoint streams and concatenate in stream order.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Counter-based generator (keyed SplitMix64): the i-th output is a pure
/// function of (seed, stream, i), independent of platform and thread count.
class CounterRng {
  public:
    explicit CounterRng(RngSpec spec);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53-bit resolution.
    double next_uniform();

    /// Standard normal deviate (Box-Muller; the paired deviate is cached).
    double next_normal();

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// One detection: outcome channel plus the measured coordinate (z in units of
/// w) or momentum (p in units of w_p).
struct Event {
    Channel channel;
    double value;
    Space space;
};

struct EventBatch {
    std::vector<Event> events;
    MeasurementSetup setup;
    RngSpec rng;
    std::int64_t n_requested = 0;
};

/// Draw n independent detections by Born's rule: the channel with its
/// post-selection probability, then the value from that channel's normalized
/// density by rejection sampling. Position proposals come from the
/// two-Gaussian mixture under the envelope 2|A|^2 Phi^2(z-d) + 2|B|^2
/// Phi^2(z+d); momentum proposals from the Gaussian |PhiTilde|^2 under the
/// (|A|+|B|)^2 envelope factor. Throws RejectionStall when a reachable
/// channel's acceptance rate collapses below 1e-6 (near-degenerate setup).
EventBatch sample_events(const MeasurementSetup& setup, std::int64_t n, RngSpec rng,
                         Space space);

struct ChannelStats {
    std::int64_t count = 0;
    double mean = 0.0;
    double variance = 0.0;   ///< unbiased; NaN when count < 2
    double std_error = 0.0;  ///< standard error of the mean; NaN when count < 2
};

/// Per-channel count/mean/stderr summary. Channels with no events are absent
/// from the map. Throws std::invalid_argument on an empty batch.
std::map<Channel, ChannelStats> empirical_summary(const EventBatch& batch);

/// Event CSV with columns index,channel,space,value and a '#' units comment.
void write_event_csv(std::ostream& out, const EventBatch& batch);

}  // namespace weakmeas
