#include "sap/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sap/errors.hpp"
#include "sap/rng.hpp"
#include "sap/scenarios.hpp"
#include "sap/simulator.hpp"

namespace sap {

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int scaled(int n, double s) { return std::max(1, static_cast<int>(std::llround(n * s))); }

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return v;
}

CriterionResult titled(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

MacSpec mac(MacKind kind) {
    MacSpec m;
    m.kind = kind;
    return m;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(double v) { return format_number(v); }

struct Ctx {
    const ValidationOptions& opt;
    std::vector<InfoRow>& info;
    int id;

    void note(const std::string& key, double value, const std::string& text = {}) const {
        info.push_back({id, key, value, text});
    }
    std::uint64_t seed(std::uint64_t tag = 0) const {
        return derive_seed(opt.seed, static_cast<std::uint64_t>(id), tag);
    }
    double tol(double t) const { return t * opt.tolerance_scale; }
    int budget(int n) const { return scaled(n, opt.budget_scale); }
};

double worst_qualifying_gap(const std::vector<InterferenceBin>& bins, int& qualifying) {
    double worst = 0.0;
    qualifying = 0;
    for (const auto& b : bins) {
        if (b.underfilled) continue;
        ++qualifying;
        worst = std::max(worst, std::abs(b.probability - b.analytic));
    }
    return worst;
}

// --- 1: closed forms ------------------------------------------------------------------

CriterionResult closed_forms(const Ctx& c) {
    CriterionResult r = titled(1, "closed-form consistency of the empty-ball radius and rho0");
    const auto t0 = Clock::now();
    const NumericsConfig& cfg = c.opt.numerics;
    const auto grid = log_grid(1e-15, 1e-3, 50);

    const NetworkParams p = scenarios::dense_below6();
    NetworkParams q = scenarios::urban_blockage(0.04);
    q.alpha = 4.0;
    const double r_l = q.los_distance();
    double e13 = 0.0, e26 = 0.0, e25 = 0.0, q26 = 0.0, q25 = 0.0;
    int q25_domain = 0;
    for (double I : grid) {
        e13 = std::max(e13, rel_err(empty_ball_radius_below6(I, p, cfg), closed_form::radius_alpha4(I, p.lambda1, p.p1)));
        const double root4 = empty_ball_radius_blockage(I, q, r_l, cfg);
        e26 = std::max(e26, rel_err(root4, closed_form::radius_alpha4_los(I, q.lambda1, q.p1, r_l)));
        q26 = std::max(q26, rel_err(closed_form::radius_alpha4_los_quoted(I, q.lambda1, q.p1, r_l), root4));
        const double root2 = solve_empty_ball(I, q.p1, 2.0 * kPi * q.lambda1, 2.0, r_l, cfg);
        e25 = std::max(e25, rel_err(root2, closed_form::radius_alpha2_los(I, q.lambda1, q.p1, r_l)));
        try {
            q25 = std::max(q25, rel_err(closed_form::radius_alpha2_los_quoted(I, q.lambda1, q.p1, r_l), root2));
            ++q25_domain;
        } catch (const DomainError&) {
        }
    }
    double e_rho = 0.0;
    for (double beta : log_grid(1e-3, 1e3, 50))
        e_rho = std::max(e_rho, rel_err(rho0(beta, std::numeric_limits<double>::infinity(), 4.0, cfg).value,
                                        0.5 * kPi * std::sqrt(beta)));
    const double secs = seconds_since(t0);

    r.measured = std::max({e13, e26, e25});
    r.tolerance = c.tol(1e-9);
    const bool rho_ok = e_rho <= c.tol(1e-8);
    r.passed = r.measured <= r.tolerance && rho_ok && secs < 1.0;
    r.detail = "alpha4 " + fmt(e13) + ", alpha4+LOS " + fmt(e26) + ", alpha2+LOS " + fmt(e25) + "; rho0 " +
               fmt(e_rho) + " (tol " + fmt(c.tol(1e-8)) + "); runtime " + (secs < 1.0 ? "under" : "over") + " 1 s";
    c.note("alpha4_los_quoted_form_max_rel_diff", q26, "outer exponent 1/4 as usually quoted");
    c.note("alpha2_los_quoted_form_max_rel_diff", q25, "form without the ln R term, inside its domain");
    c.note("alpha2_los_quoted_form_domain_points", q25_domain, "of 50 grid points");
    return r;
}

// --- 2: below-6 oracle ----------------------------------------------------------------

CriterionResult below6_oracle(const Ctx& c) {
    CriterionResult r = titled(2, "below-6 OP against the conditional Monte Carlo oracle");
    const NetworkParams p = scenarios::dense_below6();
    const double beta = 1.0;
    OracleSpec s;
    s.n_topologies = c.budget(400);
    s.probes_per_topology = 250;
    s.region = {100.0, 150.0};
    s.min_bin_count = 1000;
    ConditionalOpReport rep = conditional_op_oracle(p, beta, s, c.seed(), c.opt.workers);
    attach_analytic(rep.bins, rep.samples, OpTable(p, beta, c.opt.numerics), p);
    int qualifying = 0;
    r.measured = worst_qualifying_gap(rep.bins, qualifying);
    r.tolerance = c.tol(0.03);
    const bool enough = rep.samples.size() >= 100000;
    r.passed = enough && qualifying > 0 && r.measured <= r.tolerance;
    r.detail = std::to_string(rep.samples.size()) + " samples, " + std::to_string(qualifying) +
               " qualifying bins" + (enough ? "" : ", below the 1e5 sample floor");
    double naive_worst = 0.0;
    for (const auto& b : rep.bins)
        if (!b.underfilled) naive_worst = std::max(naive_worst, std::abs(b.probability - b.naive));
    c.note("naive_predictor_worst_gap", naive_worst);

    // Coverage conditioned on the nearest visible primary instead of on I:
    // isolates the OP formula from the R_I point estimate.
    std::vector<const ConditionalSample*> finite;
    for (const auto& x : rep.samples)
        if (std::isfinite(x.nearest)) finite.push_back(&x);
    std::sort(finite.begin(), finite.end(), [](auto* a, auto* b) { return a->nearest < b->nearest; });
    constexpr int kBins = 20;
    double worst_r = 0.0;
    for (int k = 0; k < kBins && !finite.empty(); ++k) {
        const std::size_t lo = finite.size() * k / kBins, hi = finite.size() * (k + 1) / kBins;
        double cov = 0.0, an = 0.0;
        int evaluated = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            cov += finite[i]->covered;
            if ((i - lo) % 10 == 0) {
                an += op_below6(finite[i]->nearest, p, beta, c.opt.numerics).value;
                ++evaluated;
            }
        }
        if (hi > lo && evaluated > 0)
            worst_r = std::max(worst_r, std::abs(cov / static_cast<double>(hi - lo) - an / evaluated));
    }
    c.note("nearest_distance_conditioned_worst_gap", worst_r, "20 equal-count bins of the nearest primary distance");
    return r;
}

// --- 3: asymptotic floor --------------------------------------------------------------

CriterionResult floor_limit(const Ctx& c) {
    CriterionResult r = titled(3, "high-interference limit of OP equals the floor");
    const NetworkParams p = scenarios::dense_below6();
    const double beta = 1.0;
    const double floor = op_floor_below6(p, beta);
    const double analytic = op_from_interference(1e6 * p.p1, p, beta, c.opt.numerics).value;
    OracleSpec s;
    s.n_topologies = c.budget(200);
    s.probes_per_topology = 100;
    s.region = {50.0, 150.0};
    s.near_disk_radius = 0.5;
    const ConditionalOpReport rep = conditional_op_oracle(p, beta, s, c.seed(), c.opt.workers);
    std::vector<const ConditionalSample*> v;
    for (const auto& x : rep.samples) v.push_back(&x);
    std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->interference < b->interference; });
    const std::size_t from = v.size() - std::max<std::size_t>(1, v.size() / 20);
    std::uint64_t hit = 0;
    for (std::size_t i = from; i < v.size(); ++i) hit += v[i]->covered;
    const std::uint64_t n = v.size() - from;
    const double mc = static_cast<double>(hit) / static_cast<double>(n);
    r.measured = std::max(std::abs(analytic - floor), std::abs(mc - floor));
    r.tolerance = c.tol(0.02);
    r.passed = r.measured <= r.tolerance;
    r.detail = "floor " + fmt(floor) + ", analytic at 1e6 P1 " + fmt(analytic) + ", MC top 5% " + fmt(mc) + " (n " +
               std::to_string(n) + ")";
    const Interval ci = wilson_interval(hit, n);
    c.note("mc_tail_ci_low", ci.lo);
    c.note("mc_tail_ci_high", ci.hi);
    c.note("mc_tail_min_interference_w", v[from]->interference);
    c.note("analytic_at_1e3_p1", op_from_interference(1e3 * p.p1, p, beta, c.opt.numerics).value);
    return r;
}

// --- 4: blockage ----------------------------------------------------------------------

CriterionResult blockage_regime(const Ctx& c) {
    CriterionResult r = titled(4, "blockage OP with fitted L against Boolean-blockage Monte Carlo");
    const NetworkParams p = scenarios::urban_blockage(0.04);
    const double beta = 1.0;
    OracleSpec s;
    s.n_topologies = c.budget(400);
    s.probes_per_topology = 250;
    s.region = {100.0, 150.0};
    s.min_bin_count = 1000;
    ConditionalOpReport rep = conditional_op_oracle(p, beta, s, c.seed(), c.opt.workers);
    attach_analytic(rep.bins, rep.samples, OpTable(p, beta, c.opt.numerics), p);
    int qualifying = 0;
    const double worst = worst_qualifying_gap(rep.bins, qualifying);

    // Without blockages every primary is jointly visible, so the ellipse axis
    // grows without bound. The published fit stays at 176 m as xi -> 0 and is
    // reported separately.
    const double unbounded = std::numeric_limits<double>::infinity();
    double limit_gap = 0.0;
    for (double xi : {1e-2, 1e-4, 1e-6}) {
        const NetworkParams q = scenarios::urban_blockage(xi);
        const double fitted = q.resolved_axis_length().value;
        double g = 0.0, g_fit = 0.0;
        for (double R : {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0}) {
            const double ref = op_below6(R, q, beta, c.opt.numerics).value;
            g = std::max(g, std::abs(op_blockage(R, unbounded, q, beta, c.opt.numerics).value - ref));
            g_fit = std::max(g_fit, std::abs(op_blockage(R, fitted, q, beta, c.opt.numerics).value - ref));
        }
        c.note("vanishing_blockage_gap_xi_" + fmt(xi), g, "unbounded axis");
        c.note("vanishing_blockage_gap_fitted_axis_xi_" + fmt(xi), g_fit, "published fit, L " + fmt(fitted) + " m");
        limit_gap = g;  // the last, smallest xi is the limit
    }
    r.measured = worst;
    r.tolerance = c.tol(0.05);
    const bool limit_ok = limit_gap <= c.tol(1e-3);
    r.passed = qualifying > 0 && worst <= r.tolerance && limit_ok;
    r.detail = std::to_string(qualifying) + " qualifying bins, L " + fmt(p.resolved_axis_length().value) +
               " m; vanishing-blockage gap " + fmt(limit_gap) + " (tol " + fmt(c.tol(1e-3)) + ")";

    // Diagnostics: the best L for these samples, and the LOS-ball oracle.
    double best_gap = std::numeric_limits<double>::infinity(), best_l = 0.0;
    for (double L : log_grid(10.0, 1000.0, 25)) {
        NetworkParams q = p;
        q.axis_length = L;
        std::vector<InterferenceBin> bins = rep.bins;
        attach_analytic(bins, rep.samples, OpTable(q, beta, c.opt.numerics), q);
        int k = 0;
        const double g = worst_qualifying_gap(bins, k);
        if (g < best_gap) {
            best_gap = g;
            best_l = L;
        }
    }
    c.note("best_scanned_axis_length_m", best_l);
    c.note("worst_gap_at_best_axis_length", best_gap);
    OracleSpec ball = s;
    ball.exact_blocking = false;
    ConditionalOpReport b = conditional_op_oracle(p, beta, ball, c.seed(1), c.opt.workers);
    attach_analytic(b.bins, b.samples, OpTable(p, beta, c.opt.numerics), p);
    c.note("los_ball_oracle_worst_gap", worst_qualifying_gap(b.bins, qualifying));
    return r;
}

// --- 5: mmW monotonicity --------------------------------------------------------------

CriterionResult mmw_monotonicity(const Ctx& c) {
    CriterionResult r = titled(5, "narrower beams raise OP and exposed-node rate");
    const auto grid = log_grid(1e-7, 1e-1, 50);
    const NetworkParams narrow = scenarios::urban_mmw(kPi / 18.0);
    const NetworkParams wide = scenarios::urban_mmw(kPi / 6.0);
    const NetworkParams pencil = scenarios::urban_mmw(1e-4);
    double min_diff = std::numeric_limits<double>::infinity(), min_pencil = 1.0;
    for (double I : grid) {
        min_diff = std::min(min_diff, op_from_interference(I, narrow, 1.0, c.opt.numerics).value -
                                          op_from_interference(I, wide, 1.0, c.opt.numerics).value);
        min_pencil = std::min(min_pencil, op_from_interference(I, pencil, 1.0, c.opt.numerics).value);
    }
    CensusSpec cs;
    cs.n_topologies = c.budget(200);
    double min_step = std::numeric_limits<double>::infinity(), prev = -1.0;
    for (double w : {2.0 * kPi, kPi, kPi / 3.0, kPi / 6.0, kPi / 18.0}) {
        // Same seed at every beamwidth.
        const NodeCensus n = node_problem_census(scenarios::urban_mmw(w), cs, c.seed(), c.opt.workers);
        c.note("exposed_rate_omega_" + fmt(w), n.exposed_rate());
        if (prev >= 0.0) min_step = std::min(min_step, n.exposed_rate() - prev);
        prev = n.exposed_rate();
    }
    const double slack = c.tol(1e-9);
    r.measured = min_diff;
    r.tolerance = -slack;
    r.passed = min_diff >= -slack && min_pencil > 0.99 && min_step > 0.0;
    r.detail = "min OP(pi/18)-OP(pi/6) " + fmt(min_diff) + "; min OP at omega 1e-4 " + fmt(min_pencil) +
               "; min exposed-rate increase " + fmt(min_step);
    return r;
}

// --- 6: protection constraint ---------------------------------------------------------

CriterionResult protection(const Ctx& c) {
    CriterionResult r = titled(6, "primary outage at beta_min");
    const NetworkParams p = scenarios::sparse_below6();
    const double bmin = beta_min(p, c.opt.numerics);
    const double analytic = primary_outage(p, bmin, c.opt.numerics);
    SlotSpec s;
    s.n_topologies = c.budget(10000);
    s.slots_per_topology = 10;
    s.secondary_region = {15.0, 10.0};
    s.tally_secondaries = false;
    const SimReport rep = run_slots(p, policy_at(p, bmin, c.opt.numerics), {mac(MacKind::Sap)}, s, c.seed(),
                                    c.opt.workers);
    const MacTally& t = rep.macs.front();
    const double ph = t.primary_outage();
    const double sigma = std::sqrt(ph * (1.0 - ph) / static_cast<double>(std::max<std::uint64_t>(1, t.primary_samples)));
    const double analytic_err = std::abs(analytic - p.tau);
    r.measured = ph;
    r.tolerance = p.tau + 2.0 * sigma;
    const bool enough = t.primary_samples >= 100000;
    r.passed = analytic_err <= c.tol(1e-8) && enough && ph <= r.tolerance;
    r.detail = "beta_min " + fmt(bmin) + ", |analytic - tau| " + fmt(analytic_err) + ", " +
               std::to_string(t.primary_samples) + " primary samples" + (enough ? "" : " (below the 1e5 floor)");
    c.note("simulated_outage_ci_low", t.primary_outage_ci.lo);
    c.note("simulated_outage_ci_high", t.primary_outage_ci.hi);
    return r;
}

// --- 7: optimizer ---------------------------------------------------------------------

CriterionResult optimizer(const Ctx& c) {
    CriterionResult r = titled(7, "optimal beta against a 200-point ASE sweep");
    int worst_steps = 0;
    bool unimodal = true;
    std::string detail;
    const std::pair<const char*, NetworkParams> cases[] = {{"below6", scenarios::sparse_below6()},
                                                           {"mmw", scenarios::urban_mmw(kPi / 6.0)}};
    for (const auto& [name, p] : cases) {
        const SapPolicy pol = optimal_beta(p, c.opt.numerics);
        const auto grid = log_grid(pol.beta_min, 1e3 * pol.beta_min, 200);
        std::size_t argmax = 0;
        std::vector<double> f;
        for (double b : grid) f.push_back(reduced_ase_objective(b, p.alpha, pol.aggregate_constant));
        argmax = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
        std::size_t expected = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double dist = std::abs(std::log(grid[i] / std::max(pol.beta_unconstrained, pol.beta_min)));
            if (dist < best) {
                best = dist;
                expected = i;
            }
        }
        const int steps = std::abs(static_cast<int>(argmax) - static_cast<int>(expected));
        worst_steps = std::max(worst_steps, steps);
        int turns = 0;
        for (std::size_t i = 2; i < f.size(); ++i)
            turns += ((f[i] - f[i - 1]) > 0.0) != ((f[i - 1] - f[i - 2]) > 0.0);
        unimodal = unimodal && turns <= 1;
        detail += std::string(name) + ": beta* " + fmt(pol.beta) + ", grid argmax " + fmt(grid[argmax]) + "; ";
        c.note(std::string(name) + "_beta_stationary", pol.beta_unconstrained);
        c.note(std::string(name) + "_beta_min", pol.beta_min);
        c.note(std::string(name) + "_grid_argmax", grid[argmax]);
    }
    // Full ASE (OP moments at every beta) on a coarser grid, below 6 GHz.
    {
        const NetworkParams p = scenarios::sparse_below6();
        const SapPolicy pol = optimal_beta(p, c.opt.numerics);
        double best = -1.0, arg = 0.0;
        for (double b : log_grid(pol.beta_min, 1e3 * pol.beta_min, 40)) {
            const double a = ase(p, b, c.opt.numerics).ase;
            if (a > best) {
                best = a;
                arg = b;
            }
        }
        c.note("below6_full_ase_argmax_40pt", arg, "ASE with OP moments recomputed at every beta");
    }
    double limit_err = 0.0;
    for (double alpha : {2.7, 3.0, 4.0, 6.0}) {
        const double b = stationary_beta(alpha, 0.0, c.opt.numerics);
        limit_err = std::max(limit_err, std::abs(b / ((1.0 + b) * std::log1p(b)) - 2.0 / alpha));
    }
    r.measured = worst_steps;
    r.tolerance = 1.0;
    r.passed = worst_steps <= 1 && limit_err <= c.tol(1e-6);
    r.detail = detail + "high-OP limit residual " + fmt(limit_err) + (unimodal ? "" : "; objective not unimodal");
    c.note("objective_unimodal", unimodal ? 1.0 : 0.0);
    return r;
}

// --- 8: MAC ordering ------------------------------------------------------------------

CriterionResult mac_ordering(const Ctx& c) {
    CriterionResult r = titled(8, "SaP against the no-prediction and TX-threshold MACs");
    const NetworkParams p = scenarios::sparse_below6();
    const double bmin = beta_min(p, c.opt.numerics);
    const std::vector<double> factors{1.0, 4.0, 8.0, 16.0};
    std::vector<double> grid;
    for (double f : factors) grid.push_back(f * bmin);
    CompareSpec spec = default_compare_spec();
    spec.slots.n_topologies = c.budget(300);
    spec.pilot.n_topologies = c.budget(40);
    const std::vector<MacSpec> macs{mac(MacKind::Sap), mac(MacKind::NoPrediction), mac(MacKind::TxThreshold)};
    const auto pts = compare_macs(p, grid, macs, spec, c.seed(), c.opt.workers, c.opt.numerics);
    double min_lo = std::numeric_limits<double>::infinity();
    bool ordering = true;
    bool small_beta_match = false;
    std::ostringstream d;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const auto& rep = pts[k].report;
        const MacTally &sap = rep.macs[0], &np = rep.macs[1], &tx = rep.macs[2];
        const MeanCi diff = paired_difference(sap.topology_ase, np.topology_ase);
        const std::string tag = "beta_" + fmt(factors[k]) + "x_min";
        c.note(tag + "_sap_ase", sap.ase.mean);
        c.note(tag + "_no_prediction_ase", np.ase.mean);
        c.note(tag + "_tx_threshold_ase", tx.ase.mean, "threshold " + fmt(tx.mac.threshold));
        c.note(tag + "_sap_minus_no_prediction", diff.mean, "half width " + fmt(diff.half_width));
        if (factors[k] >= 4.0) {
            min_lo = std::min(min_lo, diff.lo());
            ordering = ordering && diff.lo() > 0.0;
        }
        if (k == 0) {
            small_beta_match = tx.ase.lo() <= sap.ase.mean && sap.ase.mean <= tx.ase.hi();
            d << "at beta_min SaP " << fmt(sap.ase.mean) << " vs TX threshold CI [" << fmt(tx.ase.lo()) << ", "
              << fmt(tx.ase.hi()) << "]";
        }
    }
    r.measured = min_lo;
    r.tolerance = 0.0;
    r.passed = ordering && small_beta_match;
    r.detail = "lowest paired-CI bound of SaP minus no-prediction at beta >= 4 beta_min " + fmt(min_lo) + "; " + d.str();
    return r;
}

// --- 9: mapping families --------------------------------------------------------------

CriterionResult mapping_optimality(const Ctx& c) {
    CriterionResult r = titled(9, "linear OP-to-access mapping against step and quadratic");
    const NetworkParams sparse = scenarios::sparse_below6();
    const double bmin = beta_min(sparse, c.opt.numerics);
    NetworkParams dense_far = scenarios::dense_below6();
    dense_far.d = 3.0;
    const std::vector<std::pair<NetworkParams, double>> points{{sparse, 16.0 * bmin},
                                                               {sparse, 64.0 * bmin},
                                                               {scenarios::dense_below6(), 4.0},
                                                               {dense_far, 4.0}};
    int wins = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& [p, beta] = points[k];
        const SapPolicy pol = policy_at(p, beta, c.opt.numerics);
        const OpTable table(p, beta, c.opt.numerics);
        SlotSpec cal;
        cal.n_topologies = c.budget(20);
        cal.slots_per_topology = 5;
        cal.tally_primary = false;
        std::vector<double> ops;
        for (int t = 0; t < cal.n_topologies; ++t) {
            const SlotScenario sc = make_slot_scenario(p, pol, cal, derive_seed(c.seed(k), 0, t));
            for (int s = 0; s < cal.slots_per_topology; ++s)
                for (double v : simulate_slot(sc, table, mac(MacKind::Sap), s).op_estimate) ops.push_back(v);
        }
        double target = 0.0;
        for (double v : ops) target += std::min(1.0, pol.applied_scaling() * v);
        target /= static_cast<double>(ops.size());
        std::vector<MacSpec> macs;
        for (MappingKind kind : {MappingKind::Linear, MappingKind::Step, MappingKind::Quadratic})
            {
            MacSpec m = mac(MacKind::Mapped);
            m.mapping = normalize_mapping(kind, ops, target);
            macs.push_back(m);
        }
        SlotSpec run;
        run.n_topologies = c.budget(200);
        run.slots_per_topology = 10;
        run.tally_primary = false;
        const SimReport rep = run_slots(p, pol, macs, run, derive_seed(c.seed(k), 1), c.opt.workers);
        const MeanCi vs_step = paired_difference(rep.macs[0].topology_ase, rep.macs[1].topology_ase);
        const MeanCi vs_quad = paired_difference(rep.macs[0].topology_ase, rep.macs[2].topology_ase);
        const bool win = vs_step.lo() > 0.0 && vs_quad.lo() > 0.0;
        wins += win;
        const std::string tag = "point_" + std::to_string(k + 1);
        c.note(tag + "_beta", beta, "lambda1 " + fmt(p.lambda1 * 1e6) + " per km2, d " + fmt(p.d) + " m");
        for (const auto& m : rep.macs)
            c.note(tag + "_" + to_string(m.mac.mapping.kind) + "_success_rate", m.success_rate(),
                   "access rate " + fmt(m.access_rate()));
        c.note(tag + "_linear_minus_step", vs_step.mean, "half width " + fmt(vs_step.half_width));
        c.note(tag + "_linear_minus_quadratic", vs_quad.mean, "half width " + fmt(vs_quad.half_width));
    }
    r.measured = wins;
    r.tolerance = 3.0;
    r.passed = wins >= 3;
    r.detail = "linear mapping significantly best at " + std::to_string(wins) + " of " +
               std::to_string(points.size()) + " parameter points";
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const ValidationOptions& opt, std::vector<InfoRow>& info) {
    const Ctx c{opt, info, id};
    switch (id) {
        case 1: return closed_forms(c);
        case 2: return below6_oracle(c);
        case 3: return floor_limit(c);
        case 4: return blockage_regime(c);
        case 5: return mmw_monotonicity(c);
        case 6: return protection(c);
        case 7: return optimizer(c);
        case 8: return mac_ordering(c);
        case 9: return mapping_optimality(c);
        default: throw ParameterError("no criterion " + std::to_string(id) + " (1..9 run directly)");
    }
}

ValidationReport run_validation(const ValidationOptions& opt, const std::vector<int>& ids, const ProgressFn& progress) {
    if (!(opt.budget_scale > 0.0) || !(opt.tolerance_scale > 0.0))
        throw ParameterError("validation: budget and tolerance scales must be positive");
    ValidationReport rep;
    for (int id : ids) {
        const auto t0 = Clock::now();
        rep.criteria.push_back(run_criterion(id, opt, rep.info));
        rep.seconds.push_back(seconds_since(t0));
        if (progress) progress(rep.criteria.back(), rep.seconds.back());
    }
    return rep;
}

CriterionResult determinism_check(const ValidationReport& first, const ValidationReport& second) {
    CriterionResult r = titled(10, "repeated validation gives byte-identical CSV bodies");
    const bool same_criteria = first.criteria_table().csv() == second.criteria_table().csv();
    const bool same_info = first.info_table().csv() == second.info_table().csv();
    r.passed = same_criteria && same_info;
    r.measured = r.passed ? 0.0 : 1.0;
    r.tolerance = 0.0;
    r.detail = std::string("criteria table ") + (same_criteria ? "identical" : "differs") + ", info table " +
               (same_info ? "identical" : "differs");
    return r;
}

bool ValidationReport::all_passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

Table ValidationReport::criteria_table() const {
    Table t({"criterion", "title", "passed", "measured", "tolerance", "detail"});
    for (const auto& c : criteria)
        t.add_row({static_cast<long long>(c.id), c.title, c.passed, c.measured, c.tolerance, c.detail});
    return t;
}

Table ValidationReport::info_table() const {
    Table t({"criterion", "key", "value", "note"});
    for (const auto& i : info) t.add_row({static_cast<long long>(i.criterion), i.key, i.value, i.note});
    return t;
}

std::string summary_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << ": measured " << format_number(r.measured)
       << ", tolerance " << format_number(r.tolerance) << " (" << r.detail << ")";
    return os.str();
}

}  // namespace sap
