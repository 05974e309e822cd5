#include "nlslab/detector.hpp"

#include <algorithm>
#include <cmath>

namespace nlslab {

namespace {
constexpr double kBand = 1e-6;  // NearThreshold relative band
}

ClassifyResult classify_initial(const RadialField& f, const ThresholdConstants& tc) {
    const NormSet s = norms(f);
    if (s.mass <= 0.0) throw std::invalid_argument("classify_initial: zero field");
    const double em = s.energy * s.mass;
    const double kp = std::sqrt(s.kinetic) * std::sqrt(s.mass);
    ClassifyResult out;
    out.em_margin = 1.0 - em / tc.em_threshold;
    out.k_margin = 1.0 - kp / tc.k_threshold;
    if (out.em_margin > kBand && out.k_margin > kBand)
        out.cls = InitialClass::Below;
    else if (out.k_margin < -kBand)
        out.cls = InitialClass::Above;
    else
        out.cls = InitialClass::NearThreshold;
    return out;
}

TrackResult kinetic_mass_track(const TimeSeries& series, const ThresholdConstants& tc) {
    if (series.rows.empty())
        throw std::invalid_argument("kinetic_mass_track: empty series");
    TrackResult out;
    for (const auto& row : series.rows)
        out.max_product = std::max(out.max_product,
                                   std::sqrt(row.kinetic) * std::sqrt(row.mass));
    out.delta_prime_empirical = 1.0 - out.max_product / tc.k_threshold;
    return out;
}

double coercivity_check(const RadialField& f, const ThresholdConstants& tc) {
    const NormSet s = norms(f);
    const double product = std::sqrt(s.kinetic) * std::sqrt(s.mass);
    if (product > (1.0 - tc.delta_prime) * tc.k_threshold)
        throw std::invalid_argument("coercivity_check: hypothesis violated");
    return (s.kinetic - 0.75 * s.l4_fourth) / (s.kinetic + s.l4_fourth);
}

LocalizedCoercivity localized_coercivity(const RadialField& f, const CutoffFamily& cf,
                                         const ThresholdConstants& tc) {
    const RadialField g = chi_ball(cf, f);
    const NormSet s = norms(g);
    LocalizedCoercivity out;
    if (s.kinetic <= 0.0) {
        out.holds = true;  // vacuous
        out.ratio = 1.0;
        return out;
    }
    out.ratio = (s.kinetic - 0.75 * s.l4_fourth) / s.kinetic;
    out.holds = out.ratio >= tc.delta_prime;
    return out;
}

namespace {

double row_lp_pow(const DiagnosticRow& row, int p) {
    switch (p) {
        case 3: return row.l3;
        case 4: return row.l4;
        case 5: return row.l5;
        case 10: return row.l10;
        default: throw std::invalid_argument("windowed_norm: p must be 3, 4, 5 or 10");
    }
}

}  // namespace

double windowed_norm(const TimeSeries& series, int p, double t1, double t2) {
    const auto& rows = series.rows;
    if (rows.size() < 2 || t1 < rows.front().t - 1e-9 || t2 > rows.back().t + 1e-9)
        throw std::invalid_argument("windowed_norm: window not covered by the series");
    if (!(t2 > t1)) throw std::invalid_argument("windowed_norm: empty window");
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const double a = std::max(t1, rows[k].t);
        const double b = std::min(t2, rows[k + 1].t);
        if (b <= a) continue;
        // linear interpolation of the p-power density inside the cell
        const double span = rows[k + 1].t - rows[k].t;
        const double fa = row_lp_pow(rows[k], p) +
                          (row_lp_pow(rows[k + 1], p) - row_lp_pow(rows[k], p)) *
                              ((a - rows[k].t) / span);
        const double fb = row_lp_pow(rows[k], p) +
                          (row_lp_pow(rows[k + 1], p) - row_lp_pow(rows[k], p)) *
                              ((b - rows[k].t) / span);
        acc += 0.5 * (fa + fb) * (b - a);
    }
    return std::pow(acc, 1.0 / static_cast<double>(p));
}

std::pair<double, double> interpolation_l5(const TimeSeries& series, double t1,
                                           double t2) {
    const double lhs = windowed_norm(series, 5, t1, t2);
    const double l3 = windowed_norm(series, 3, t1, t2);
    const double l10 = windowed_norm(series, 10, t1, t2);
    return {lhs, std::pow(l3, 3.0 / 7.0) * std::pow(l10, 4.0 / 7.0)};
}

const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::ScatteringConsistent: return "ScatteringConsistent";
        case VerdictKind::Blowup: return "Blowup";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Verdict scattering_verdict(const TimeSeries& series, double eps, double window_len) {
    Verdict v;
    v.eps = eps;
    const auto& rows = series.rows;

    double virial_trend = 0.0;
    if (rows.size() >= 3) {
        // mean second difference of V over interior samples
        double acc = 0.0;
        int m = 0;
        for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
            const double dt1 = rows[k].t - rows[k - 1].t;
            const double dt2 = rows[k + 1].t - rows[k].t;
            if (dt1 <= 0 || dt2 <= 0) continue;
            const double d2 = (rows[k + 1].virial - 2.0 * rows[k].virial +
                               rows[k - 1].virial) /
                              (dt1 * dt2);
            acc += d2;
            ++m;
        }
        if (m > 0) virial_trend = acc / m;
    }
    v.evidence["final_l4"] = rows.empty() ? 0.0 : rows.back().l4;
    v.evidence["virial_concavity"] = virial_trend;

    if (series.termination == Termination::Blowup) {
        v.kind = VerdictKind::Blowup;
        v.evidence["blowup_step"] = static_cast<double>(series.blowup_step);
        return v;
    }

    double min_l5 = std::numeric_limits<double>::infinity();
    bool window_found = false;
    if (rows.size() >= 2 && rows.back().t - rows.front().t >= window_len - 1e-9) {
        for (const auto& row : rows) {
            const double a = row.t;
            if (a + window_len > rows.back().t + 1e-9) break;
            const double w5 = windowed_norm(series, 5, a, a + window_len);
            if (w5 < min_l5) min_l5 = w5;
            if (w5 <= eps) {
                v.kind = VerdictKind::ScatteringConsistent;
                v.has_window = true;
                v.window_start = a;
                v.window_end = a + window_len;
                window_found = true;
                break;
            }
        }
    }
    if (std::isfinite(min_l5)) v.evidence["min_window_l5"] = min_l5;
    if (!window_found) v.kind = VerdictKind::Inconclusive;
    return v;
}

VirialResult virial(const TimeSeries& series) {
    if (series.r0 != 0.0)
        throw std::invalid_argument("virial: Euclidean mode only (r0 = 0)");
    const auto& rows = series.rows;
    VirialResult out;
    out.t.reserve(rows.size());
    out.v.reserve(rows.size());
    for (const auto& row : rows) {
        out.t.push_back(row.t);
        out.v.push_back(row.virial);
    }
    for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
        const double dt1 = rows[k].t - rows[k - 1].t;
        const double dt2 = rows[k + 1].t - rows[k].t;
        if (dt1 <= 0 || dt2 <= 0 || std::abs(dt1 - dt2) > 1e-9 * dt1) continue;
        const double d2 = (rows[k + 1].virial - 2.0 * rows[k].virial +
                           rows[k - 1].virial) /
                          (dt1 * dt2);
        const double rhs = 8.0 * rows[k].kinetic - 6.0 * rows[k].l4;
        const double scale = 8.0 * rows[k].kinetic + 6.0 * rows[k].l4;
        if (scale <= 0.0) continue;
        out.residual = std::max(out.residual, std::abs(d2 - rhs) / scale);
    }
    return out;
}

}  // namespace nlslab
