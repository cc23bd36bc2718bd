#include "h3bound/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace h3bound {

namespace {

const double kLn2 = 0.6931471805599453;

// log-stable ln sinh / ln cosh for x > 0
double lnsinh(double x) { return x + std::log1p(-std::exp(-2 * x)) - kLn2; }
double lncosh(double x) { return x + std::log1p(std::exp(-2 * x)) - kLn2; }

// Chord criterion in log form: the gap between the two ray endpoints at
// radius rho = delta + 5 Delta is below Delta iff
//   sinh(rho) * sech((L - delta)/2) < sinh(Delta/2),
// since sin(phi_max/2) = sech((L - delta)/2). Equivalent to comparing
// chord_distance(rho, phi_max(L, delta)) with Delta, but stays exact when
// tanh saturates to 1 in doubles (L - delta > ~38).
bool chord_gap_ok(double L, double delta, double Delta) {
    double rho = delta + 5 * Delta;
    double x = (L - delta) / 2;
    return lnsinh(rho) - lncosh(x) < lnsinh(Delta / 2);
}

} // namespace

double l0() { return 2.0 * std::log(2.0 + std::sqrt(3.0)); }

double phi_max(double L, double delta) {
    if (!(L > delta)) throw std::domain_error("phi_max: requires L > delta");
    return 2.0 * std::acos(std::tanh((L - delta) / 2));
}

double lbar(double delta, double Delta) {
    if (!(delta >= 0)) throw std::domain_error("lbar: delta must be >= 0");
    if (!(Delta > 0)) throw std::domain_error("lbar: Delta must be positive");

    double lo = 2 * (delta + Delta) + 1e-9;
    if (!chord_gap_ok(lo, delta, Delta)) {
        double hi = lo;
        int guard = 0;
        do {
            hi = hi * 2 + 1;
            if (++guard > 4000) throw RangeError("lbar: bracket expansion failed");
        } while (!chord_gap_ok(hi, delta, Delta));
        while (hi - lo > std::max(1e-9, hi * 1e-13)) {
            double mid = lo + (hi - lo) / 2;
            (chord_gap_ok(mid, delta, Delta) ? hi : lo) = mid;
        }
        lo = hi; // minimal satisfying length
    }
    return 3 * std::max(lo, 6 * Delta + 2 * delta);
}

double ConstantSchedule::at(int k) const {
    const ScheduleEntry& e = entries.at(static_cast<size_t>(k));
    if (e.log_domain) throw RangeError("schedule: entry exceeds the double range");
    return e.value;
}

ConstantSchedule schedule(int kmax, double Delta) {
    if (kmax < 0) throw std::domain_error("schedule: kmax must be >= 0");
    if (!(Delta > 0)) throw std::domain_error("schedule: Delta must be positive");

    ConstantSchedule s;
    s.Delta = Delta;
    s.L0 = l0();
    s.entries.push_back({0, s.L0, false, "base escape length 2 ln(2 + sqrt(3))"});
    if (kmax >= 1) s.entries.push_back({1, 2 * s.L0, false, "doubled base length"});

    const double kSwitch = 1e300;
    for (int k = 2; k <= kmax; ++k) {
        const ScheduleEntry& prev = s.entries.back();
        ScheduleEntry e;
        e.k = k;
        if (!prev.log_domain && static_cast<double>(k) * prev.value < kSwitch) {
            double delta = k * prev.value;
            e.value = lbar(delta, Delta);
            e.provenance = "short-cut threshold at reach k L(k-1)";
        } else {
            // ln L(k) = ln 9 + ln k + ln L(k-1); the additive tail of the
            // closed form is below 1e-290 relative here and is dropped
            double prev_log = prev.log_domain ? prev.value : std::log(prev.value);
            e.value = std::log(9.0) + std::log(static_cast<double>(k)) + prev_log;
            e.log_domain = true;
            e.provenance = "log-domain continuation of the short-cut recursion";
        }
        s.entries.push_back(e);
    }
    return s;
}

BoundReport r_n(int n, double Delta) {
    if (n < 2) throw std::domain_error("r_n: requires n >= 2");
    int edges = 3 * (n - 1);
    BoundReport rep;
    rep.n = n;
    rep.sched = schedule(edges, Delta);
    rep.R = static_cast<double>(edges) * edges * rep.sched.at(edges);
    rep.r_n = std::max(rep.R, edges * rep.sched.at(edges - 1));
    if (n == 2) rep.sharp_r2 = 2 * l0();
    return rep;
}

} // namespace h3bound
