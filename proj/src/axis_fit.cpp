#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sap/errors.hpp"
#include "sap/rng.hpp"
#include "sap/simulator.hpp"

namespace sap {

double AxisFit::predict(double xi) const {
    double v = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * xi + *it;
    return v;
}

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (x.size() != y.size()) throw ParameterError("polyfit: x and y differ in length");
    if (degree < 0 || x.size() < static_cast<std::size_t>(degree) + 1)
        throw ParameterError("polyfit: not enough points for the requested degree");
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(n, degree + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double v = 1.0;
        for (int k = 0; k <= degree; ++k) {
            A(i, k) = v;
            v *= x[static_cast<std::size_t>(i)];
        }
        b(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

AxisFit fit_axis_length(const NetworkParams& p, const std::vector<double>& xi_grid, double beta,
                        const std::vector<double>& l_grid, const OracleSpec& spec, std::uint64_t seed,
                        int workers, const NumericsConfig& cfg) {
    if (p.regime != Regime::Blockage) throw ParameterError("fit_axis_length: needs the blockage regime");
    if (!p.blockage) throw ParameterError("fit_axis_length: needs blockage dimensions");
    if (xi_grid.empty() || l_grid.empty()) throw ParameterError("fit_axis_length: empty scan grid");
    for (double L : l_grid)
        if (L < p.d) throw ParameterError("fit_axis_length: every scanned L must be at least the pair distance");
    const double size_sum = p.blockage->d_len + p.blockage->d_wid;
    AxisFit fit;
    fit.l_grid = l_grid;
    for (std::size_t k = 0; k < xi_grid.size(); ++k) {
        AxisScanPoint pt;
        pt.xi = xi_grid[k];
        if (pt.xi < 0.0) throw ParameterError("fit_axis_length: xi must be non-negative");
        pt.lambda_b = pt.xi / size_sum;
        if (pt.lambda_b == 0.0) {
            pt.unbounded = true;
            pt.flat = true;
            fit.points.push_back(pt);
            continue;
        }
        NetworkParams q = p;
        q.blockage->lambda_b = pt.lambda_b;
        // Same seed for every xi: the scans differ only in the blockage density.
        const ConditionalOpReport oracle = conditional_op_oracle(q, beta, spec, seed, workers);
        double total = 0.0;
        for (const auto& b : oracle.bins)
            if (!b.underfilled) total += static_cast<double>(b.count);
        if (total == 0.0) throw NumericError("fit_axis_length: no qualifying interference bin");
        double best = std::numeric_limits<double>::infinity();
        for (double L : l_grid) {
            q.axis_length = L;
            std::vector<InterferenceBin> bins = oracle.bins;
            attach_analytic(bins, oracle.samples, OpTable(q, beta, cfg), q);
            double gap = 0.0;
            for (const auto& b : bins)
                if (!b.underfilled) gap += static_cast<double>(b.count) * std::abs(b.probability - b.analytic);
            gap /= total;
            pt.gaps.push_back(gap);
            if (gap < best) {
                best = gap;
                pt.best_l = L;
            }
        }
        pt.gap = best;
        const auto [lo, hi] = std::minmax_element(pt.gaps.begin(), pt.gaps.end());
        pt.flat = *hi - *lo < 1e-3;
        fit.points.push_back(pt);
    }
    std::vector<double> xs, ys;
    for (const auto& pt : fit.points) {
        if (pt.unbounded) continue;
        xs.push_back(pt.xi);
        ys.push_back(pt.best_l);
    }
    if (!xs.empty()) {
        const int degree = std::min<int>(5, static_cast<int>(xs.size()) - 1);
        fit.coefficients = polyfit(xs, ys, degree);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = fit.predict(xs[i]) - ys[i];
            fit.sse += r * r;
        }
    }
    return fit;
}

}  // namespace sap
