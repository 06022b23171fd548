#include "weakmeas/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace weakmeas {

QuadratureSpec::QuadratureSpec(double half_width, double tolerance, int depth)
    : half_width_sigmas(half_width), rel_tol(tolerance), max_depth(depth) {
    if (!(half_width_sigmas >= 8.0)) {
        throw std::invalid_argument("half_width_sigmas must be >= 8");
    }
    if (!(rel_tol > 0.0) || rel_tol > 1e-6) {
        throw std::invalid_argument("rel_tol must lie in (0, 1e-6]");
    }
    if (max_depth < 10) {
        throw std::invalid_argument("max_depth must be >= 10");
    }
}

namespace {

constexpr double abs_floor = 1e-14;
constexpr int seed_panels = 16;  // pre-split so narrow features are not missed

struct Panel {
    double a, fa, m, fm, b, fb, simpson;
};

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, Panel panel, double tol, int depth,
                int max_depth) {
    const double lm = 0.5 * (panel.a + panel.m);
    const double rm = 0.5 * (panel.m + panel.b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(panel.fa, flm, panel.fm, panel.m - panel.a);
    const double right = simpson(panel.fm, frm, panel.fb, panel.b - panel.m);
    const double whole2 = left + right;
    const double err = (whole2 - panel.simpson) / 15.0;
    if (std::abs(err) <= tol) {
        return whole2 + err;
    }
    if (depth >= max_depth) {
        throw MaxDepthExceeded("quadrature bisection exceeded max_depth");
    }
    Panel lp{panel.a, panel.fa, lm, flm, panel.m, panel.fm, left};
    Panel rp{panel.m, panel.fm, rm, frm, panel.b, panel.fb, right};
    return adaptive(f, lp, 0.5 * tol, depth + 1, max_depth) +
           adaptive(f, rp, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    if (!(a < b)) {
        throw std::invalid_argument("integrate: requires a < b");
    }
    const double h = (b - a) / seed_panels;
    Panel panels[seed_panels];
    double mass = 0.0;  // sum of |panel| estimates; scales the relative tolerance
    for (int i = 0; i < seed_panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = x0 + h;
        const double xm = 0.5 * (x0 + x1);
        Panel p{x0, f(x0), xm, f(xm), x1, f(x1), 0.0};
        p.simpson = simpson(p.fa, p.fm, p.fb, h);
        mass += std::abs(p.simpson);
        panels[i] = p;
    }
    const double tol = std::max(spec.rel_tol * mass, abs_floor);
    double total = 0.0;
    for (const Panel& p : panels) {
        total += adaptive(f, p, tol / seed_panels, 0, spec.max_depth);
    }
    return total;
}

Complex MomentumWavefunction::amplitude(double p) const {
    const ChannelAmplitudes amps = channel_amplitudes(setup.pre, setup.post, channel);
    const double wp = setup.beam.wp();
    const double u = p / wp;
    const double envelope = std::exp(-0.25 * u * u) / std::sqrt(wp * std::sqrt(2.0 * M_PI));
    const double phase = p * setup.d / setup.beam.hbar;
    return envelope * (amps.up * std::polar(1.0, -phase) + amps.down * std::polar(1.0, phase));
}

double MomentumWavefunction::density(double p) const { return std::norm(amplitude(p)); }

namespace {

double position_window(const MeasurementSetup& setup, const QuadratureSpec& spec) {
    return spec.half_width_sigmas * setup.beam.w + setup.d;
}

double channel_mass(const MeasurementSetup& setup, Channel ch, const QuadratureSpec& spec) {
    const double half = position_window(setup, spec);
    return integrate([&](double z) { return channel_density(z, ch, setup); }, -half, half,
                     spec);
}

}  // namespace

double oracle_postselection_probability(const MeasurementSetup& setup, Channel ch,
                                        const QuadratureSpec& spec) {
    return channel_mass(setup, ch, spec);
}

double oracle_mean_z(const MeasurementSetup& setup, Channel ch, const QuadratureSpec& spec) {
    const double mass = channel_mass(setup, ch, spec);
    if (mass <= tau_prob) {
        throw ZeroPostselection("post-selection probability vanishes for this channel");
    }
    const double half = position_window(setup, spec);
    const double first =
        integrate([&](double z) { return z * channel_density(z, ch, setup); }, -half, half,
                  spec);
    return first / mass;
}

double oracle_mean_pz(const MeasurementSetup& setup, Channel ch, const QuadratureSpec& spec) {
    const MomentumWavefunction psi{setup, ch};
    const double half = spec.half_width_sigmas * setup.beam.wp();
    const double mass = integrate([&](double p) { return psi.density(p); }, -half, half, spec);
    if (mass <= tau_prob) {
        throw ZeroPostselection("post-selection probability vanishes for this channel");
    }
    const double first =
        integrate([&](double p) { return p * psi.density(p); }, -half, half, spec);
    return first / mass;
}

std::vector<VerifyRow> verify_report(const VerifyGrid& grid) {
    if (grid.epsilons.empty() || grid.deltas.empty() || grid.etas.empty()) {
        throw std::invalid_argument("verify_report: grid axes must be nonempty");
    }
    std::vector<VerifyRow> rows;
    rows.reserve(2 * grid.epsilons.size() * grid.deltas.size() * grid.etas.size());
    for (double eps : grid.epsilons) {
        for (double del : grid.deltas) {
            const DetuningParams det(eps, del);
            const SpinState post = construct_detuned_postselection(grid.pre, det);
            for (double eta : grid.etas) {
                const MeasurementSetup setup(grid.pre, post, grid.beam, eta * grid.beam.w);
                const double wp = grid.beam.wp();
                for (Observable obs : {Observable::MeanZ, Observable::MeanPz}) {
                    VerifyRow row;
                    row.epsilon = eps;
                    row.delta = del;
                    row.eta = eta;
                    row.observable = obs;
                    const bool is_z = obs == Observable::MeanZ;
                    row.paper_expansion =
                        is_z ? mean_z_paper_expansion(grid.pre, det, eta, grid.beam) /
                                   grid.beam.w
                             : mean_pz_paper_expansion(grid.pre, det, eta, grid.beam) / wp;
                    try {
                        row.exact = is_z
                                        ? mean_z_exact(setup, grid.channel) / grid.beam.w
                                        : mean_pz_exact(setup, grid.channel) / wp;
                        row.oracle_value =
                            is_z ? oracle_mean_z(setup, grid.channel, grid.quad) / grid.beam.w
                                 : oracle_mean_pz(setup, grid.channel, grid.quad) / wp;
                        if (*row.exact != 0.0) {
                            row.ratio_expansion_to_exact = *row.paper_expansion / *row.exact;
                        }
                    } catch (const ZeroPostselection&) {
                        // orthogonal point at d -> 0: leave the exact columns blank
                    }
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt17(*v) : std::string(); }

}  // namespace

std::string verify_rows_to_csv(const std::vector<VerifyRow>& rows) {
    std::ostringstream out;
    out << "# exact and oracle columns in units of w (mean_z) or w_p (mean_pz)\n";
    out << "epsilon,delta,eta,observable,exact,paper_expansion,oracle,"
           "ratio_expansion_to_exact\n";
    for (const VerifyRow& row : rows) {
        out << fmt17(row.epsilon) << ',' << fmt17(row.delta) << ',' << fmt17(row.eta) << ','
            << to_string(row.observable) << ',' << fmt_opt(row.exact) << ','
            << fmt_opt(row.paper_expansion) << ',' << fmt_opt(row.oracle_value) << ','
            << fmt_opt(row.ratio_expansion_to_exact) << '\n';
    }
    return out.str();
}

}  // namespace weakmeas
