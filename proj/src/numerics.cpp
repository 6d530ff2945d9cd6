#include "sap/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "sap/errors.hpp"

namespace sap {

void NumericsConfig::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
        throw ParameterError("numerics: tolerances must be positive");
    if (max_subdivisions < 1) throw ParameterError("numerics: max_subdivisions must be >= 1");
    if (!(infinite_cutoff_multiplier > 1.0))
        throw ParameterError("numerics: infinite_cutoff_multiplier must exceed 1");
    if (!(root_bracket_growth > 1.0)) throw ParameterError("numerics: root_bracket_growth must exceed 1");
}

NumericsConfig NumericsConfig::refined(double factor) const {
    NumericsConfig out = *this;
    out.abs_tol /= factor;
    out.rel_tol /= factor;
    out.max_subdivisions *= 2;
    return out;
}

namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    double l1;
};

Panel eval_panel(const Integrand& f, double a, double b) {
    // Each panel is mapped onto [-1, 1] with the Jacobian folded in, which
    // keeps Boost's error estimate on the same scale as the value.
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto g = [&](double t) { return half * f(mid + half * t); };
    double err = 0.0;
    double l1 = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 0, 0.0, &err, &l1);
    return {a, b, v, err, std::abs(l1)};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const NumericsConfig& cfg) {
    if (a == b) return {};
    if (!std::isfinite(a) || !std::isfinite(b)) throw NumericError("integrate: limits must be finite");
    // Global adaptive subdivision: always split the panel with the largest error.
    auto cmp = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::vector<Panel> heap{eval_panel(f, a, b)};
    double value = heap.front().value;
    double error = heap.front().error;
    double l1 = heap.front().l1;
    while (error > std::max(cfg.abs_tol, cfg.rel_tol * l1) &&
           static_cast<int>(heap.size()) < cfg.max_subdivisions) {
        std::pop_heap(heap.begin(), heap.end(), cmp);
        const Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), cmp);
            break;
        }
        const Panel left = eval_panel(f, worst.a, mid);
        const Panel right = eval_panel(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), cmp);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), cmp);
    }
    // Re-sum to shed the rounding accumulated by the running updates.
    value = 0.0;
    error = 0.0;
    l1 = 0.0;
    for (const Panel& p : heap) {
        value += p.value;
        error += p.error;
        l1 += p.l1;
    }
    if (!std::isfinite(value)) throw NumericError("integrate: non-finite value", error);
    if (error > 10.0 * std::max(cfg.abs_tol, cfg.rel_tol * l1)) {
        std::ostringstream os;
        os << "integrate: no convergence on [" << a << ", " << b << "], estimate " << error;
        throw NumericError(os.str(), error);
    }
    return {value, error};
}

double power_tail_full(double p) {
    const double x = std::numbers::pi / p;
    return x / std::sin(x);
}

namespace {

// ∫_{u1}^{u2} du/(1+u^p) for 0 <= u1 <= u2 <= 1.
QuadResult head_part(double p, double u1, double u2, const NumericsConfig& cfg) {
    return integrate([p](double u) { return 1.0 / (1.0 + std::pow(u, p)); }, u1, u2, cfg);
}

// ∫_{u1}^{u2} du/(1+u^p) for 1 <= u1 <= u2 <= inf, via w = u^(1-p).
QuadResult tail_part(double p, double u1, double u2, const NumericsConfig& cfg) {
    const double q = p / (p - 1.0);
    const double w_lo = std::isinf(u2) ? 0.0 : std::pow(u2, 1.0 - p);
    const double w_hi = std::pow(u1, 1.0 - p);
    QuadResult r = integrate([q](double w) { return 1.0 / (1.0 + std::pow(w, q)); }, w_lo, w_hi, cfg);
    const double scale = 1.0 / (p - 1.0);
    return {r.value * scale, r.error * scale};
}

}  // namespace

QuadResult power_tail_integral(double p, double u1, double u2, const NumericsConfig& cfg) {
    if (!(p > 1.0)) throw DomainError("power_tail_integral: exponent must exceed 1 (alpha > 2)");
    if (u1 < 0.0 || u2 < 0.0 || std::isnan(u1) || std::isnan(u2))
        throw ParameterError("power_tail_integral: limits must be non-negative");
    if (u1 == u2) return {};
    if (u1 > u2) {
        QuadResult r = power_tail_integral(p, u2, u1, cfg);
        return {-r.value, r.error};
    }
    if (u1 == 0.0 && std::isinf(u2)) return {power_tail_full(p), 0.0};
    if (u2 <= 1.0) return head_part(p, u1, u2, cfg);
    if (u1 >= 1.0) return tail_part(p, u1, u2, cfg);
    return head_part(p, u1, 1.0, cfg) + tail_part(p, 1.0, u2, cfg);
}

Bracket find_bracket(const std::function<double(double)>& f, double lo, double hi, double growth,
                     int max_growths) {
    if (!(lo > 0.0) || !(hi > lo)) throw ParameterError("find_bracket: need 0 < lo < hi");
    double flo = f(lo);
    double fhi = f(hi);
    for (int i = 0; i < max_growths; ++i) {
        if (flo == 0.0) return {lo, lo};
        if (fhi == 0.0) return {hi, hi};
        if ((flo < 0.0) != (fhi < 0.0)) return {lo, hi};
        // The functions solved here are negative near zero and positive far
        // out; move whichever end is on the wrong side.
        if (flo > 0.0 && fhi > 0.0) {
            hi = lo;
            fhi = flo;
            lo /= growth;
            flo = f(lo);
        } else {
            lo = hi;
            flo = fhi;
            hi *= growth;
            fhi = f(hi);
        }
    }
    throw NumericError("find_bracket: no sign change after maximum growth");
}

double bisect(const std::function<double(double)>& f, Bracket b, double rel_tol, int max_iter) {
    double lo = b.lo;
    double hi = b.hi;
    if (lo == hi) return lo;
    double flo = f(lo);
    if (flo == 0.0) return lo;
    const double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw NumericError("bisect: interval does not bracket a root");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

double lambert_w_of_exp(double ell) {
    if (std::isnan(ell)) throw ParameterError("lambert_w_of_exp: NaN argument");
    // Initial guess: w ~ e^ell for very negative ell, w ~ ell - ln(ell) for large.
    double w;
    if (ell < -1.0) {
        w = std::exp(ell);
    } else if (ell < 2.0) {
        w = 0.5 + 0.3 * ell;  // W(e^ell) on [-1, 2] lies in [0.28, 1.56]
    } else {
        w = ell - std::log(ell);
    }
    // Newton on g(w) = w + ln w - ell in the variable t = ln w keeps w > 0.
    double t = std::log(w);
    for (int i = 0; i < 100; ++i) {
        const double et = std::exp(t);
        const double g = et + t - ell;
        const double step = g / (et + 1.0);
        t -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(t))) break;
    }
    return std::exp(t);
}

double safe_acos(double x) {
    if (std::isnan(x)) throw NumericError("safe_acos: NaN argument");
    if (x > 1.0) {
        if (x - 1.0 > 1e-12) throw NumericError("safe_acos: argument above 1 beyond clamping tolerance");
        return 0.0;
    }
    if (x < -1.0) {
        if (-1.0 - x > 1e-12) throw NumericError("safe_acos: argument below -1 beyond clamping tolerance");
        return std::numbers::pi;
    }
    return std::acos(x);
}

}  // namespace sap
