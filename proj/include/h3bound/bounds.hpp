#pragma once

#include <string>
#include <vector>

#include "h3bound/geom.hpp"

namespace h3bound {

/// Base escape length 2 ln(2 + sqrt(3)): the exit length of a ray leaving
/// the horoball basepoint direction at the smallest angle (pi/6) compatible
/// with two 120-degree separated edges both starting inside the horoball.
double l0();

/// Upper bound 2 arccos(tanh((L - delta)/2)) on the angle at the origin
/// between rays to any two horoball points at hyperbolic distance >= L -
/// delta. Decreasing in L; errors when L <= delta.
double phi_max(double L, double delta);

/// Short-cut threshold: 3 max(L2, 6 Delta + 2 delta), where L2 is the
/// minimal length (bisection to 1e-9) with L2 > 2(delta + Delta) and a
/// chord gap below Delta at radius delta + 5 Delta. Strictly increasing in
/// delta.
double lbar(double delta, double Delta);

struct ScheduleEntry {
    int k = 0;
    double value = 0;       // L(k), or ln L(k) when log_domain
    bool log_domain = false;
    std::string provenance;
};

struct ConstantSchedule {
    double Delta = 0;
    double L0 = 0;
    std::vector<ScheduleEntry> entries; // k = 0..kmax

    /// Linear-domain value; errors for log-domain entries.
    double at(int k) const;
};

/// Recursive length schedule: L(0) = l0(), L(1) = 2 L(0), and L(k) =
/// lbar(k L(k-1), Delta) for k >= 2. Entries past the double range switch
/// to log-domain values and are flagged.
ConstantSchedule schedule(int kmax, double Delta = default_thin_triangles_constant());

struct BoundReport {
    int n = 0;
    double R = 0;        // [3(n-1)]^2 L(3(n-1))
    double r_n = 0;      // max(R, (3n-3) L(3n-4))
    double sharp_r2 = 0; // 2 l0(), reported for n = 2 only
    ConstantSchedule sched;
};

/// Injectivity-radius threshold for rank n; n = 2 also carries the sharp
/// two-generator value 2 l0().
BoundReport r_n(int n, double Delta = default_thin_triangles_constant());

} // namespace h3bound
