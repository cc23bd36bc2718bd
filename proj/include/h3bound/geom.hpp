#pragma once

#include <limits>
#include <optional>
#include <string>

#include "h3bound/vec.hpp"

namespace h3bound {

// Tolerances used throughout the geometry layer: 1e-12 for construction,
// 1e-10 for geometric identities, 1e-6 against sampling oracles.
inline constexpr double kConstructTol = 1e-12;
inline constexpr double kGeomTol = 1e-10;

// Ball coordinates saturate at double precision once the time component of
// the hyperboloid lift reaches ~1e15 (hyperbolic distance ~35 from the
// origin); past that, ball() signals a RangeError and callers must stay in
// hyperboloid / log-domain form.
inline constexpr double kMaxBallLiftT = 1e15;

inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

/// A point of H^3 carried in dual coordinates: Poincare unit-ball vector and
/// a hyperboloid (Lorentz) lift with <p,p> = -1, t > 0. The lift is the
/// working representation; ball coordinates are derived on demand.
class HPoint {
public:
    HPoint() : lift_{1, 0, 0, 0} {}

    static HPoint origin() { return HPoint(); }
    static HPoint from_ball(const Vec3& b);
    static HPoint from_lift(const Vec4& v);

    const Vec4& lift() const { return lift_; }

    /// Ball-model coordinates; throws RangeError past radius 1 - 1e-15.
    Vec3 ball() const;

    /// True when ball() would succeed.
    bool ball_representable() const { return lift_.t < kMaxBallLiftT; }

    bool approx_equal(const HPoint& o, double tol = kConstructTol) const;

private:
    explicit HPoint(const Vec4& v) : lift_(v) {}
    Vec4 lift_;
};

/// A point of the ideal boundary sphere, as a Euclidean unit direction.
struct IdealPoint {
    Vec3 direction;

    explicit IdealPoint(const Vec3& d);

    /// Basepoint of the canonical horoball: (-1, 0, 0).
    static IdealPoint canonical() { return IdealPoint({-1, 0, 0}); }

    /// Null lift (t, xyz) with t = 1.
    Vec4 null_lift() const { return {1, direction.x, direction.y, direction.z}; }
};

double dist(const HPoint& p, const HPoint& q);

/// Unit tangent at p pointing toward q (Lorentz-orthogonal to p's lift).
/// Throws std::domain_error when q == p.
Vec4 log_direction(const HPoint& p, const HPoint& q);

/// Unit tangent at p pointing toward the ideal point xi.
Vec4 ideal_direction(const HPoint& p, const IdealPoint& xi);

/// Geodesic flow: the point at arclength t from p with initial direction u.
/// u must be a unit tangent at p (|<u,u>| = 1, <p,u> = 0 within tolerance).
HPoint exp_map(const HPoint& p, const Vec4& u, double t);

/// Angle at p between the geodesics [p,q1] and [p,q2], in [0, pi].
double angle(const HPoint& p, const HPoint& q1, const HPoint& q2);

/// Oriented geodesic segment; stored as start + unit tangent + length so
/// that segments reaching past ball-coordinate range stay representable.
/// When built by toward_ideal(), the exact Busemann value of the far
/// endpoint is cached (coordinate arithmetic cannot recover it once the
/// far endpoint hugs the horosphere).
class GeodesicSegment {
public:
    static GeodesicSegment between(const HPoint& a, const HPoint& b);
    static GeodesicSegment ray(const HPoint& a, const Vec4& unit_dir, double length);

    /// Segment from `a` of length `length` whose direction makes angle `psi`
    /// with the direction toward the canonical ideal point (-1,0,0), tilted
    /// by `azimuth` around that axis. Records the exact far-endpoint
    /// Busemann value B(a) + log(exp(-length) + 2 sin^2(psi/2) sinh(length)).
    static GeodesicSegment toward_ideal(const HPoint& a, double psi, double azimuth,
                                        double length);

    const HPoint& start() const { return start_; }
    const Vec4& dir() const { return dir_; }
    double length() const { return length_; }

    /// Point at arclength t in [0, length]; throws RangeError on overflow.
    HPoint at(double t) const;
    HPoint end() const { return at(length_); }

    /// Busemann value (canonical horoball) of the far endpoint: cached exact
    /// value when available, else computed from coordinates.
    double busemann_far() const;
    std::optional<double> cached_busemann_far() const { return busemann_far_; }

private:
    GeodesicSegment(const HPoint& s, const Vec4& d, double len)
        : start_(s), dir_(d), length_(len) {}
    HPoint start_;
    Vec4 dir_;
    double length_;
    std::optional<double> busemann_far_;
};

// ---------------------------------------------------------------------------
// Canonical horoball W: basepoint (-1,0,0), boundary through the origin.
// In ball coordinates it is the Euclidean ball of radius 1/2 centered at
// (-1/2,0,0); membership is the sign of |p|^2 + p1.

enum class HoroballSide { Inside, Boundary, Outside };

struct HoroballClass {
    HoroballSide side;
    double margin; // |p|^2 + p1 in ball coordinates (sign matches Busemann)
};

/// Ball-coordinate margin |p|^2 + p1. Throws RangeError when p has no ball
/// representation.
double horoball_margin(const HPoint& p);

/// Busemann function of the canonical horoball, B(p) = log(p.t + p.x) in
/// lift coordinates; B <= 0 inside, 0 on the boundary. Valid at any radius.
double horoball_busemann(const HPoint& p);

/// Classification with a +-1e-12 tolerance band for "boundary". Uses the
/// ball margin when representable, otherwise the Busemann sign.
HoroballClass horoball_contains(const HPoint& p);

/// Stable Busemann value at arclength t along a geodesic given the start
/// values s = exp(B(start)) and c = d/dt exp(B) at 0; both are O(1) for
/// starts near the horosphere so this stays accurate for long segments.
double busemann_along(double exp_b_start, double exp_b_deriv, double t);

/// Exit length of the geodesic ray from 0 at angle theta to the direction
/// toward (-1,0,0): log((1+cos)/(1-cos)) for theta < pi/2, +infinity at 0,
/// 0 for theta >= pi/2.
double ray_exit_length(double theta);

/// Distance between two points at hyperbolic distance rho from the origin
/// with angular separation phi: cosh d = cosh^2 rho - sinh^2 rho cos phi.
/// Stable for large rho (log-domain internally).
double chord_distance(double rho, double phi);

/// Distance from a point to a geodesic segment (closed form projection).
double point_segment_distance(const HPoint& p, const GeodesicSegment& s);

/// Minimum distance between two geodesic segments (golden section over one
/// parameter with closed-form inner projection); 0 iff they intersect.
double segment_distance(const GeodesicSegment& s1, const GeodesicSegment& s2);

/// Max over sampled points x on each side of dist(x, union of the other two
/// sides). Sample parameters follow the van der Corput sequence so the
/// sample set is nested in `samples` (the gap is monotone nondecreasing).
double thin_triangle_gap(const HPoint& a, const HPoint& b, const HPoint& c, int samples);

/// Default thin-triangles constant ln(1+sqrt 2): the slimness of the ideal
/// triangle, which is extremal in H^3.
inline double default_thin_triangles_constant() { return std::log(1.0 + std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// Frames: a position plus an orthonormal tangent triple, used to transport
// directions along piecewise-geodesic paths. Alongside the coordinates the
// frame tracks the pairings of position/axes against the canonical null
// vector (scaled by exp(lambda)) so Busemann values of far vertices stay
// accurate where raw coordinate sums cancel catastrophically.

struct Frame {
    Vec4 p;
    Vec4 u[3];
    double horo[4];  // -<p,Xi>, -<u_i,Xi>, each times exp(lambda)
    double lambda = 0;

    static Frame canonical();
    static Frame at_point(const HPoint& pos, const Vec4& u0, const Vec4& u1, const Vec4& u2);

    HPoint position() const { return HPoint::from_lift(p); }

    /// exp(B(position)) in split form: horo[0] * exp(lambda).
    double exp_busemann_scaled() const { return horo[0]; }
    double busemann() const { return std::log(horo[0]) + lambda; }

    /// Max deviation of the Lorentz Gram matrix (p,u0,u1,u2) from diag(-1,1,1,1).
    double gram_residual() const;

    /// Re-orthonormalize against numeric drift.
    void renormalize();

    Frame transformed(const LorentzMat& g) const;
};

/// Advances the frame distance t along its first axis, then turns the first
/// axis by pi - bend inside the plane selected by `dihedral` (angle from the
/// second axis around the first). bend = pi continues straight; bend = 2pi/3
/// realizes a 120-degree joint. Preserves orthonormality and the horo track.
Frame chain_frame(const Frame& f, double t, double bend, double dihedral);

} // namespace h3bound
