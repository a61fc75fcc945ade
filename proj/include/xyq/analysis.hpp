#pragma once

// Field-axis analysis at fixed evolution time: locate the entanglement
// collapse field, scan for higher-field revival, differentiate discord at the
// collapse point, and evaluate the sign predicate that links the two.
//
// Everything here is deterministic: grid cells are assembled by index, never
// by completion order, so re-runs (and worker counts) cannot change output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xyq/correlators.hpp"
#include "xyq/discord.hpp"
#include "xyq/entanglement.hpp"
#include "xyq/errors.hpp"
#include "xyq/qstate.hpp"
#include "xyq/work_deficit.hpp"

namespace xyq {

// Post-collapse LN above this counts as a revival.
inline constexpr double kRevivalThreshold = 1e-4;
// Collapse bisection stops when the bracket is this narrow.
inline constexpr double kCollapseResolution = 1e-4;
// Collapse fields inside this zone around the critical field are flagged:
// the sign rule is inconclusive near the quantum phase transition. At
// gamma = 0.5 the inconclusive records (revival with a flat or slightly
// negative slope, and the reverse) sit at collapse fields down to ~0.82, so
// the zone reaches below the critical field asymmetrically.
inline constexpr double kQptZoneLo = 0.8;
inline constexpr double kQptZoneHi = 1.1;
// Default upper end of the revival scan.
inline constexpr double kDefaultRevivalCeiling = 20.0;

// A module error tagged with the field value it occurred at.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(double a_tilde, double t_tilde, const std::string& what)
        : std::runtime_error(tag(a_tilde, t_tilde, what)), a_tilde_(a_tilde), t_tilde_(t_tilde) {}
    double a_tilde() const { return a_tilde_; }
    double t_tilde() const { return t_tilde_; }

private:
    static std::string tag(double a, double t, const std::string& what) {
        std::ostringstream os;
        os << "at a_tilde=" << a << ", t_tilde=" << t << ": " << what;
        return os.str();
    }
    double a_tilde_, t_tilde_;
};

struct MeasureFlags {
    bool ln = false;
    bool discord = false;
    bool deficit = false;
    bool mi = false;
};

struct FieldProfilePoint {
    double a_tilde = 0.0;
    double t_tilde = 0.0;
    double gamma = 0.0;
    std::optional<double> ln;          // ebits
    std::optional<double> discord;     // bits
    std::optional<double> deficit;     // qubits
    std::optional<double> mutual_info; // bits
    double min_eigenvalue = 0.0;       // diagnostic, of the two-site state
};

// Full pipeline at one parameter point. Throws module errors untagged.
inline FieldProfilePoint evaluate_point(double gamma, double a_tilde, double t_tilde,
                                        const MeasureFlags& flags,
                                        const QuadratureSpec& spec = {},
                                        const BasisOptimizerOptions& opts = {}) {
    FieldProfilePoint out;
    out.a_tilde = a_tilde;
    out.t_tilde = t_tilde;
    out.gamma = gamma;
    const CorrelatorSet cs = correlator_set({gamma, a_tilde, t_tilde}, spec);
    const TwoQubitState s = build_state(cs);
    out.min_eigenvalue = eigenvalues(s)[3];
    if (flags.ln) out.ln = log_negativity(s);
    if (flags.discord) out.discord = xyq::discord(s, Side::B, opts).discord;
    if (flags.deficit) out.deficit = one_way_deficit(s, Side::B, opts).deficit;
    if (flags.mi) out.mutual_info = mutual_information(s);
    return out;
}

struct PointResult {
    FieldProfilePoint point;
    std::optional<std::string> error;
};

namespace detail {

inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t)>& body) {
    workers = std::max(1u, workers);
    if (workers == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

// One point per field value; failures are collected per point, not thrown.
inline std::vector<PointResult> profile_points(double t_tilde, double gamma,
                                               const std::vector<double>& a_values,
                                               const MeasureFlags& flags,
                                               const QuadratureSpec& spec = {},
                                               const BasisOptimizerOptions& opts = {},
                                               unsigned workers = 1) {
    std::vector<PointResult> out(a_values.size());
    detail::parallel_for(a_values.size(), workers, [&](std::size_t i) {
        out[i].point.a_tilde = a_values[i];
        out[i].point.t_tilde = t_tilde;
        out[i].point.gamma = gamma;
        try {
            out[i].point = evaluate_point(gamma, a_values[i], t_tilde, flags, spec, opts);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

// Throwing variant: the first failing field value aborts the profile with a
// tagged error.
inline std::vector<FieldProfilePoint> field_profile(double t_tilde, double gamma,
                                                    const std::vector<double>& a_values,
                                                    const MeasureFlags& flags,
                                                    const QuadratureSpec& spec = {},
                                                    const BasisOptimizerOptions& opts = {},
                                                    unsigned workers = 1) {
    auto cells = profile_points(t_tilde, gamma, a_values, flags, spec, opts, workers);
    std::vector<FieldProfilePoint> out;
    out.reserve(cells.size());
    for (auto& c : cells) {
        if (c.error) throw EvaluationError(c.point.a_tilde, t_tilde, *c.error);
        out.push_back(c.point);
    }
    return out;
}

struct SweepGrid {
    double a_min = 0.0, a_max = 2.0;
    int a_steps = 1;
    double t_min = 0.0, t_max = 5.0;
    int t_steps = 1;
    double gamma = 0.5;
};

inline void validate(const SweepGrid& g) {
    if (!(g.a_min < g.a_max)) throw std::invalid_argument("SweepGrid: a_min must be < a_max");
    if (!(g.t_min <= g.t_max)) throw std::invalid_argument("SweepGrid: t_min must be <= t_max");
    if (g.a_steps < 1 || g.t_steps < 1) throw std::invalid_argument("SweepGrid: steps must be >= 1");
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

struct GridDataset {
    std::vector<double> a_values;
    std::vector<double> t_values;
    std::vector<PointResult> cells; // row-major: index = it * a_values.size() + ia
};

inline GridDataset grid_sweep(const SweepGrid& grid, const MeasureFlags& flags,
                              const QuadratureSpec& spec = {},
                              const BasisOptimizerOptions& opts = {},
                              unsigned workers = 1) {
    validate(grid);
    GridDataset ds;
    ds.a_values = linspace(grid.a_min, grid.a_max, grid.a_steps);
    ds.t_values = linspace(grid.t_min, grid.t_max, grid.t_steps);
    const std::size_t na = ds.a_values.size();
    ds.cells.resize(na * ds.t_values.size());
    detail::parallel_for(ds.cells.size(), workers, [&](std::size_t idx) {
        const double a = ds.a_values[idx % na];
        const double t = ds.t_values[idx / na];
        auto& cell = ds.cells[idx];
        cell.point.a_tilde = a;
        cell.point.t_tilde = t;
        cell.point.gamma = grid.gamma;
        try {
            cell.point = evaluate_point(grid.gamma, a, t, flags, spec, opts);
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
    });
    return ds;
}

// Smallest field in [a_lo, a_hi] where LN drops from positive to zero,
// bisected to kCollapseResolution. Absent when LN is never positive or never
// collapses inside the window.
//
// Zero windows shrink rapidly at early times (width ~3e-3 at t = 0.5,
// hairline at t = 0.25 for gamma = 0.5), so a uniform scan is not enough:
// every interior dip of the coarse samples is polished with a golden-section
// minimization and accepted if it actually touches zero.
inline std::optional<double> find_collapse(double t_tilde, double gamma, double a_lo,
                                           double a_hi, const QuadratureSpec& spec = {},
                                           double scan_step = 0.01) {
    auto ln_at = [&](double a) {
        return log_negativity(build_state(correlator_set({gamma, a, t_tilde}, spec)));
    };
    const int n = static_cast<int>(std::ceil((a_hi - a_lo) / scan_step));
    if (n < 1) return std::nullopt;
    std::vector<double> as(static_cast<std::size_t>(n) + 1), lns(as.size());
    for (int k = 0; k <= n; ++k) {
        as[static_cast<std::size_t>(k)] = std::min(a_lo + k * scan_step, a_hi);
        lns[static_cast<std::size_t>(k)] = ln_at(as[static_cast<std::size_t>(k)]);
    }
    auto first_crossing = [&](double lo, double hi) { // ln(lo) > 0, ln(hi) == 0
        while (hi - lo > kCollapseResolution) {
            const double mid = 0.5 * (lo + hi);
            (ln_at(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    bool seen_positive = lns[0] > 0.0;
    for (int k = 1; k <= n; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        if (seen_positive && lns[i - 1] > 0.0 && lns[i] <= 0.0)
            return first_crossing(as[i - 1], as[i]);
        if (lns[i] > 0.0) seen_positive = true;
        if (seen_positive && k < n && lns[i] > 0.0 && lns[i] <= lns[i - 1] && lns[i] <= lns[i + 1]) {
            // dip between samples; check whether its bottom reaches zero
            constexpr double invphi = 0.6180339887498949;
            double lo = as[i - 1], hi = as[i + 1];
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = ln_at(x1), f2 = ln_at(x2);
            while (hi - lo > 1e-7 && f1 > 0.0 && f2 > 0.0) {
                if (f1 > f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + invphi * (hi - lo);
                    f2 = ln_at(x2);
                } else {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - invphi * (hi - lo);
                    f1 = ln_at(x1);
                }
            }
            if (f1 <= 0.0) return first_crossing(as[i - 1], x1);
            if (f2 <= 0.0) return first_crossing(as[i - 1], x2);
        }
    }
    return std::nullopt;
}

struct RevivalScan {
    double max_ln = 0.0;               // over fields above the collapse
    std::optional<double> a_peak;      // field at the maximum, when positive
    bool revived = false;              // max_ln > kRevivalThreshold
};

// Maximum LN on (a_c, ceiling]: coarse grid plus golden-section polish
// around the best sample.
inline RevivalScan find_revival(double t_tilde, double gamma, double a_c,
                                double ceiling = kDefaultRevivalCeiling,
                                const QuadratureSpec& spec = {}, double scan_step = 0.05) {
    auto ln_at = [&](double a) {
        return log_negativity(build_state(correlator_set({gamma, a, t_tilde}, spec)));
    };
    RevivalScan out;
    const int n = static_cast<int>(std::ceil((ceiling - a_c) / scan_step));
    double best_a = a_c + scan_step;
    for (int k = 1; k <= n; ++k) {
        const double a = std::min(a_c + k * scan_step, ceiling);
        const double v = ln_at(a);
        if (v > out.max_ln) {
            out.max_ln = v;
            best_a = a;
        }
    }
    if (out.max_ln > 0.0) {
        double lo = std::max(a_c, best_a - scan_step);
        double hi = std::min(ceiling, best_a + scan_step);
        constexpr double invphi = 0.6180339887498949;
        double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
        double f1 = ln_at(x1), f2 = ln_at(x2);
        for (int it = 0; it < 50 && hi - lo > 1e-8; ++it) {
            if (f1 < f2) {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = ln_at(x2);
            } else {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = ln_at(x1);
            }
        }
        const double a_star = 0.5 * (lo + hi);
        const double v_star = ln_at(a_star);
        if (v_star > out.max_ln) {
            out.max_ln = v_star;
            best_a = a_star;
        }
        out.a_peak = best_a;
    }
    out.revived = out.max_ln > kRevivalThreshold;
    return out;
}

// dQ/da at the collapse field: central difference with h = 1e-3, checked
// against the half-step estimate; on disagreement the whole computation is
// retried once with tightened quadrature and optimizer tolerances.
inline double discord_slope(double t_tilde, double gamma, double a_c,
                            const QuadratureSpec& spec = {},
                            const BasisOptimizerOptions& opts = {}) {
    auto q_at = [&](double a, const QuadratureSpec& qs, const BasisOptimizerOptions& oo) {
        const auto cs = correlator_set({gamma, a, t_tilde}, qs);
        return xyq::discord(build_state(cs), Side::B, oo).discord;
    };
    constexpr double h = 1e-3;
    constexpr double agreement = 1e-3; // bits per unit field
    auto estimate = [&](const QuadratureSpec& qs, const BasisOptimizerOptions& oo) {
        const double s_full = (q_at(a_c + h, qs, oo) - q_at(a_c - h, qs, oo)) / (2.0 * h);
        const double s_half = (q_at(a_c + 0.5 * h, qs, oo) - q_at(a_c - 0.5 * h, qs, oo)) / h;
        return std::pair<double, double>{s_full, s_half};
    };
    auto [s1, s2] = estimate(spec, opts);
    if (std::abs(s1 - s2) <= agreement) return s1;

    QuadratureSpec tight_q = spec;
    tight_q.abs_tol = std::min(spec.abs_tol, 1e-12);
    tight_q.rel_tol = std::min(spec.rel_tol, 1e-12);
    BasisOptimizerOptions tight_o = opts;
    tight_o.f_tol = std::min(opts.f_tol, 1e-12);
    tight_o.grid_theta = std::max(opts.grid_theta, 64);
    tight_o.grid_phi = std::max(opts.grid_phi, 64);
    tight_o.max_iterations = std::max(opts.max_iterations, 2000);
    auto [r1, r2] = estimate(tight_q, tight_o);
    if (std::abs(r1 - r2) <= agreement) return r1;
    std::ostringstream os;
    os << "discord_slope: step-halving check failed twice at t_tilde=" << t_tilde
       << ", a_c=" << a_c << " (|" << r1 << " - " << r2 << "| > " << agreement << ")";
    throw UnstableDerivative(os.str());
}

struct CollapseRevivalRecord {
    double t_tilde = 0.0;
    std::optional<double> a_c;
    std::optional<double> slope; // dQ/da at a_c
    bool revived = false;
    double max_ln_after_collapse = 0.0;
    std::optional<double> a_revival_peak;
    bool predicate_holds = false;
    bool exceptional_near_qpt = false;
};

// Sign rule on the positive field axis: revival is predicted when
// a_c * dQ/da > 0.
inline bool revival_predicate(double a_c, double slope) { return a_c * slope > 0.0; }

inline bool revival_predicate(const CollapseRevivalRecord& rec) {
    if (!rec.a_c || !rec.slope) throw std::invalid_argument("revival_predicate: record lacks a_c or slope");
    return revival_predicate(*rec.a_c, *rec.slope);
}

struct ScanOptions {
    double window_lo = 0.0;
    double window_hi = 5.0;
    double collapse_step = 0.01;
    double revival_ceiling = kDefaultRevivalCeiling;
};

// One record for a single time; absent when no collapse exists in the window.
inline std::optional<CollapseRevivalRecord> collapse_revival_record(
    double t_tilde, double gamma, const QuadratureSpec& spec = {},
    const BasisOptimizerOptions& opts = {}, const ScanOptions& sopts = {}) {
    const auto a_c = find_collapse(t_tilde, gamma, sopts.window_lo, sopts.window_hi, spec,
                                   sopts.collapse_step);
    if (!a_c) return std::nullopt;
    CollapseRevivalRecord rec;
    rec.t_tilde = t_tilde;
    rec.a_c = a_c;
    rec.slope = discord_slope(t_tilde, gamma, *a_c, spec, opts);
    const auto rev = find_revival(t_tilde, gamma, *a_c, sopts.revival_ceiling, spec);
    rec.revived = rev.revived;
    rec.max_ln_after_collapse = rev.max_ln;
    rec.a_revival_peak = rev.a_peak;
    rec.predicate_holds = revival_predicate(*a_c, *rec.slope);
    rec.exceptional_near_qpt = (*a_c >= kQptZoneLo && *a_c <= kQptZoneHi);
    return rec;
}

struct ScanError {
    double t_tilde;
    std::string message;
};

struct ScanResult {
    std::vector<CollapseRevivalRecord> records; // only times with a collapse
    std::vector<ScanError> errors;
};

inline ScanResult derivative_scan(const std::vector<double>& t_values, double gamma,
                                  const QuadratureSpec& spec = {},
                                  const BasisOptimizerOptions& opts = {},
                                  const ScanOptions& sopts = {}, unsigned workers = 1) {
    std::vector<std::optional<CollapseRevivalRecord>> slots(t_values.size());
    std::vector<std::optional<std::string>> errors(t_values.size());
    detail::parallel_for(t_values.size(), workers, [&](std::size_t i) {
        try {
            slots[i] = collapse_revival_record(t_values[i], gamma, spec, opts, sopts);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    ScanResult out;
    for (std::size_t i = 0; i < t_values.size(); ++i) {
        if (errors[i]) out.errors.push_back({t_values[i], *errors[i]});
        else if (slots[i]) out.records.push_back(*slots[i]);
    }
    return out;
}

} // namespace xyq
