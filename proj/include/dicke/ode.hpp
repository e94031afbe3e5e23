#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dicke::ode {

struct Options {
    double rtol = 1e-8;
    double atol = 1e-10;
    long max_steps = 200'000'000;
    double first_step = 0.0;  // 0 selects automatically
};

struct Stats {
    long n_steps = 0;
    long n_rejected = 0;
};

// Raised when the error controller drives the step below the resolvable
// scale; carries the time of failure as a stiffness diagnostic.
class StepSizeUnderflow : public std::runtime_error {
public:
    explicit StepSizeUnderflow(double t)
        : std::runtime_error("ode: step size underflow at t = " + std::to_string(t)), t_fail(t) {}
    double t_fail;
};

namespace detail {

inline double error_norm(const Eigen::VectorXcd& e, const Eigen::VectorXcd& y0,
                         const Eigen::VectorXcd& y1, double atol, double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double q = std::abs(e[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(e.size()));
}

}  // namespace detail

// Dormand-Prince 5(4) embedded pair with FSAL. Integrates y' = f(t, y) from
// t0 through every time in t_out (strictly increasing, t_out[0] >= t0),
// invoking observer(t, y) at each output time. Steps are clamped to output
// times, so observer states are exact step endpoints.
template <class RHS>
Stats integrate(RHS&& f, Eigen::VectorXcd& y, double t0, const std::vector<double>& t_out,
                const Options& opt,
                const std::function<void(double, const Eigen::VectorXcd&)>& observer) {
    static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                        b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    if (t_out.empty()) return {};
    for (std::size_t i = 0; i + 1 < t_out.size(); ++i)
        if (!(t_out[i] < t_out[i + 1])) throw std::invalid_argument("ode: t_out must be increasing");
    if (t_out.front() < t0) throw std::invalid_argument("ode: output before t0");

    Stats stats;
    double t = t0;
    std::size_t next = 0;
    if (t_out[next] == t0) {
        if (observer) observer(t0, y);
        ++next;
        if (next == t_out.size()) return stats;
    }

    const double t_end = t_out.back();
    Eigen::VectorXcd k1 = f(t, y), k2, k3, k4, k5, k6, k7, ytmp, ynew, err;

    double h = opt.first_step;
    if (h <= 0.0) {
        // standard two-probe starting-step heuristic
        double d0 = detail::error_norm(y, y, y, opt.atol, opt.rtol);
        double d1 = detail::error_norm(k1, y, y, opt.atol, opt.rtol);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_end - t);
        Eigen::VectorXcd y1 = y + h0 * k1;
        Eigen::VectorXcd f1 = f(t + h0, y1);
        double d2 = detail::error_norm(f1 - k1, y, y, opt.atol, opt.rtol) / h0;
        double dm = std::max(d1, d2);
        double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
        h = std::min({100 * h0, h1, t_end - t});
    }

    while (next < t_out.size()) {
        if (stats.n_steps + stats.n_rejected > opt.max_steps)
            throw std::runtime_error("ode: max step count exceeded at t = " + std::to_string(t));
        bool hit_output = false;
        if (t + h >= t_out[next]) {
            h = t_out[next] - t;
            hit_output = true;
        }
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0) &&
            !hit_output)
            throw StepSizeUnderflow(t);

        ytmp = y + h * (a21 * k1);
        k2 = f(t + c[1] * h, ytmp);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        k3 = f(t + c[2] * h, ytmp);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        k4 = f(t + c[3] * h, ytmp);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        k5 = f(t + c[4] * h, ytmp);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        k6 = f(t + h, ytmp);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        k7 = f(t + h, ynew);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double en = detail::error_norm(err, y, ynew, opt.atol, opt.rtol);
        if (en <= 1.0) {
            t += h;
            y.swap(ynew);
            k1 = k7;  // FSAL
            ++stats.n_steps;
            if (hit_output) {
                if (observer) observer(t_out[next], y);
                ++next;
            }
        } else {
            ++stats.n_rejected;  // k1 = f(t, y) is still valid, no recompute
        }
        double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (t < t_end && h > t_end - t) h = t_end - t;
    }
    return stats;
}

}  // namespace dicke::ode
