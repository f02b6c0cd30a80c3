#pragma once

#include <random>
#include <sstream>
#include <vector>

#include "cfsim/lemmas.hpp"

namespace cfsim {

struct LemmaCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

/// Piecewise-constant nonnegative forcing on sub-intervals of width tau/m,
/// rescaled so every sliding window average stays below the requested bound.
struct PiecewiseForcing {
    double piece = 1.0;
    std::vector<double> values;

    double operator()(double t) const {
        if (values.empty()) return 0.0;
        auto idx = static_cast<std::size_t>(t / piece);
        if (idx >= values.size()) idx = values.size() - 1;
        return values[idx];
    }

    double max_window_average(double tau) const {
        // windows starting at sub-interval boundaries dominate
        double worst = 0.0;
        const auto per_window = static_cast<std::size_t>(std::lround(tau / piece));
        for (std::size_t s = 0; s + per_window <= values.size(); ++s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < per_window; ++i) acc += values[s + i] * piece;
            worst = std::max(worst, acc / tau);
        }
        return worst;
    }

    static PiecewiseForcing random(std::mt19937& rng, double t_total, double tau, int pieces_per_tau,
                                   double target_avg) {
        PiecewiseForcing f;
        f.piece = tau / pieces_per_tau;
        const auto count = static_cast<std::size_t>(std::ceil(t_total / f.piece)) + 1;
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        f.values.resize(count);
        for (double& v : f.values) v = dist(rng);
        const double worst = f.max_window_average(tau);
        if (worst > 0.0)
            for (double& v : f.values) v *= target_avg / worst;
        return f;
    }
};

template <class Rhs>
std::vector<double> rk4_trajectory(double y0, double t0, double t_end, double dt, Rhs&& rhs) {
    std::vector<double> out;
    double y = y0;
    double t = t0;
    out.push_back(y);
    while (t < t_end - 1e-12) {
        const double h = std::min(dt, t_end - t);
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        out.push_back(y);
    }
    return out;
}

}  // namespace detail

/// y' = -a y + h(t) with windowed averages of h below b must stay below
/// odi_bound at all sampled times.
inline LemmaCheck check_odi_bound(int instances = 100, unsigned seed = 12345,
                                  double tolerance = 1e-8) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> adist(0.2, 3.0);
    std::uniform_real_distribution<double> bdist(0.0, 2.0);
    std::uniform_real_distribution<double> ydist(0.0, 5.0);
    const double dt = 5e-4;
    double worst = -1e300;
    for (int inst = 0; inst < instances; ++inst) {
        OdiProblem p;
        p.a = adist(rng);
        p.tau = 1.0;
        p.b = bdist(rng);
        p.y0 = ydist(rng);
        p.t0 = 0.0;
        const double t_end = 8.0;
        auto h = detail::PiecewiseForcing::random(rng, t_end, p.tau, 8, p.b);
        auto traj = detail::rk4_trajectory(p.y0, 0.0, t_end, dt,
                                           [&](double t, double y) { return -p.a * y + h(t); });
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double t = std::min(static_cast<double>(i) * dt, t_end);
            worst = std::max(worst, traj[i] - odi_bound(p, t));
        }
    }
    LemmaCheck check;
    check.name = "odi_bound dominates RK4";
    check.pass = worst <= tolerance;
    std::ostringstream ss;
    ss << "max(y - bound) = " << worst;
    check.detail = ss.str();
    return check;
}

/// y' = h y + g with windowed integrals of h, g below L2, L3 and
/// y0 <= L1/tau must stay below odi_prime_bound.
inline LemmaCheck check_odi_prime_bound(int instances = 100, unsigned seed = 54321,
                                        double tolerance = 1e-8) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ldist(0.1, 1.5);
    const double tau = 1.0;
    const double dt = 5e-4;
    const double t_end = 6.0;
    double worst = -1e300;
    for (int inst = 0; inst < instances; ++inst) {
        const double l2_target = ldist(rng);
        const double l3_target = ldist(rng);
        auto h = detail::PiecewiseForcing::random(rng, t_end, tau, 8, l2_target / tau);
        auto g = detail::PiecewiseForcing::random(rng, t_end, tau, 8, l3_target / tau);
        const double L2 = h.max_window_average(tau) * tau;
        const double L3 = g.max_window_average(tau) * tau;
        std::uniform_real_distribution<double> ydist(0.0, 2.0);
        const double y0 = ydist(rng);
        auto traj = detail::rk4_trajectory(y0, 0.0, t_end, dt,
                                           [&](double t, double y) { return h(t) * y + g(t); });
        // L1 covers both the measured window integral of y and tau*y0
        double l1 = tau * y0;
        const auto per_window = static_cast<std::size_t>(std::lround(tau / dt));
        for (std::size_t s = 0; s + per_window < traj.size(); ++s) {
            double acc = 0.0;
            for (std::size_t i = 0; i < per_window; ++i) acc += traj[s + i] * dt;
            l1 = std::max(l1, acc);
        }
        const double bound = odi_prime_bound(l1, L2, L3, tau);
        for (double y : traj) worst = std::max(worst, y - bound);
    }
    LemmaCheck check;
    check.name = "odi_prime_bound dominates RK4";
    check.pass = worst <= tolerance;
    std::ostringstream ss;
    ss << "max(y - bound) = " << worst;
    check.detail = ss.str();
    return check;
}

inline LemmaCheck check_young_log(long samples = 1000000, unsigned seed = 777) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> xdist(1e-12, 1000.0);
    std::uniform_real_distribution<double> ydist(-10.0, 10.0);
    long failures = 0;
    for (long i = 0; i < samples; ++i)
        if (!young_log_check(xdist(rng), ydist(rng))) ++failures;
    LemmaCheck check;
    check.name = "young_log_check random sweep";
    check.pass = failures == 0;
    check.detail = std::to_string(failures) + " failures / " + std::to_string(samples) + " samples";
    return check;
}

inline LemmaCheck check_log_threshold() {
    LemmaCheck check;
    check.name = "log_threshold r=mu=1, eta=1/2";
    try {
        const LogThresholdResult res = log_threshold(1.0, 1.0, 0.5, 1e10);
        const double g8 = detail::damping_g(1e8, 1.0, 1.0, 0.5);
        const double h8 = detail::damping_h(1e8, 1.0, 0.5);
        const double ratio8 = g8 / h8;
        check.pass = std::isfinite(res.threshold) && ratio8 > 0.9 && ratio8 < 1.2;
        std::ostringstream ss;
        ss << "N = " << res.threshold << ", g/h(1e8) = " << ratio8
           << ", tail constant = " << res.tail_constant;
        check.detail = ss.str();
    } catch (const Error& e) {
        check.pass = false;
        check.detail = e.what();
    }
    return check;
}

inline std::vector<LemmaCheck> run_lemma_suite() {
    return {check_odi_bound(), check_odi_prime_bound(), check_young_log(), check_log_threshold()};
}

}  // namespace cfsim
