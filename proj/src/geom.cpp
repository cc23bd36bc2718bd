#include "h3bound/geom.hpp"

#include <algorithm>
#include <cmath>

namespace h3bound {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

double log_sinh(double x) {
    if (x > 30) return x - std::log(2.0) + std::log1p(-std::exp(-2 * x));
    return std::log(std::sinh(x));
}

void check_finite(const Vec4& v, const char* what) {
    if (!std::isfinite(v.t) || !std::isfinite(v.x) || !std::isfinite(v.y) ||
        !std::isfinite(v.z))
        throw RangeError(std::string(what) + ": coordinates overflow double range");
}

} // namespace

// ---------------------------------------------------------------------------
// HPoint

HPoint HPoint::from_ball(const Vec3& b) {
    double r2 = b.norm2();
    if (!(std::sqrt(r2) < 1.0 - 1e-15))
        throw RangeError("ball coordinates must have norm < 1 - 1e-15");
    double s = 1.0 / (1.0 - r2);
    return HPoint(Vec4{(1.0 + r2) * s, 2 * b.x * s, 2 * b.y * s, 2 * b.z * s});
}

HPoint HPoint::from_lift(const Vec4& v) {
    check_finite(v, "HPoint::from_lift");
    if (v.t <= 0) throw std::domain_error("hyperboloid lift must have positive time component");
    double q = -ldot(v, v);
    // Points produced by flowing along geodesics of combined length d carry
    // coordinate drift ~ e^d * eps, and measuring the self-product cancels
    // by a further factor of the coordinate size, so away from the origin
    // the unit-norm defect is unmeasurable: a fixed threshold cannot
    // separate legitimate drift from caller bugs, and "repairing" against a
    // noise-dominated measurement corrupts good points. Validate and rescale
    // only close to the origin, where the measurement is trustworthy, and
    // otherwise trust upstream construction.
    if (v.t < 1e2) {
        if (!(q > 0)) throw std::domain_error("lift is not timelike");
        double defect = std::abs(q - 1.0);
        if (defect > 1e-12 && defect < 0.1) return HPoint(v * (1.0 / std::sqrt(q)));
    }
    return HPoint(v);
}

Vec3 HPoint::ball() const {
    if (!ball_representable())
        throw RangeError("point too far from origin for ball coordinates");
    double s = 1.0 / (1.0 + lift_.t);
    return {lift_.x * s, lift_.y * s, lift_.z * s};
}

bool HPoint::approx_equal(const HPoint& o, double tol) const {
    double c = -ldot(lift_, o.lift_);
    if (!std::isfinite(c)) return false;
    if (ball_representable() && o.ball_representable()) return dist(*this, o) <= tol;
    return std::acosh(std::max(1.0, c)) <= tol;
}

IdealPoint::IdealPoint(const Vec3& d) : direction(d) {
    if (std::abs(d.norm() - 1.0) > kConstructTol)
        throw std::domain_error("ideal point direction must be a unit vector");
}

// ---------------------------------------------------------------------------
// Metric primitives

double dist(const HPoint& p, const HPoint& q) {
    const Vec4& a = p.lift();
    const Vec4& b = q.lift();
    if (p.ball_representable() && q.ball_representable()) {
        // sinh^2(d/2) = |p_ball - q_ball|^2 / ((1-|p|^2)(1-|q|^2)) with
        // 1 - |ball|^2 = 2/(1+t); the difference form keeps full precision
        // for nearby points where acosh of the Lorentz product loses half
        double sa = 1.0 / (1.0 + a.t), sb = 1.0 / (1.0 + b.t);
        Vec3 d = a.spatial() * sa - b.spatial() * sb;
        double x = d.norm2() * (1.0 + a.t) * (1.0 + b.t) * 0.25;
        return 2.0 * std::asinh(std::sqrt(x));
    }
    double c = -ldot(a, b);
    if (!std::isfinite(c)) throw RangeError("dist: inner product overflow");
    return std::acosh(std::max(1.0, c));
}

Vec4 log_direction(const HPoint& p, const HPoint& q) {
    double c = -ldot(p.lift(), q.lift());
    double n2 = c * c - 1.0;
    if (!(n2 > 0))
        throw std::domain_error("log_direction: points coincide, direction undefined");
    Vec4 u = (q.lift() - c * p.lift()) * (1.0 / std::sqrt(n2));
    return u;
}

Vec4 ideal_direction(const HPoint& p, const IdealPoint& xi) {
    Vec4 n = xi.null_lift();
    double s = -ldot(p.lift(), n); // > 0 always
    Vec4 u = n * (1.0 / s) - p.lift();
    return u;
}

HPoint exp_map(const HPoint& p, const Vec4& u, double t) {
    if (t < 0) throw std::domain_error("exp_map: negative length");
    // the unit / orthogonality checks cancel like t^2 * eps at a far
    // basepoint, so scale the tolerance accordingly
    double tol = 1e-8 * std::max(1.0, p.lift().t * p.lift().t * 1e-6);
    if (std::abs(ldot(u, u) - 1.0) > tol || std::abs(ldot(p.lift(), u)) > tol)
        throw std::domain_error("exp_map: direction is not a unit tangent at p");
    if (t > 690) throw RangeError("exp_map: length exceeds representable range");
    Vec4 r = std::cosh(t) * p.lift() + std::sinh(t) * u;
    check_finite(r, "exp_map");
    return HPoint::from_lift(r);
}

double angle(const HPoint& p, const HPoint& q1, const HPoint& q2) {
    Vec4 u1 = log_direction(p, q1);
    Vec4 u2 = log_direction(p, q2);
    return std::acos(clamp(ldot(u1, u2), -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// GeodesicSegment

GeodesicSegment GeodesicSegment::between(const HPoint& a, const HPoint& b) {
    return GeodesicSegment(a, log_direction(a, b), dist(a, b));
}

GeodesicSegment GeodesicSegment::ray(const HPoint& a, const Vec4& unit_dir, double length) {
    if (length < 0) throw std::domain_error("segment length must be nonnegative");
    double tol = 1e-8 * std::max(1.0, a.lift().t * a.lift().t * 1e-6);
    if (std::abs(ldot(unit_dir, unit_dir) - 1.0) > tol ||
        std::abs(ldot(a.lift(), unit_dir)) > tol)
        throw std::domain_error("segment direction is not a unit tangent");
    return GeodesicSegment(a, unit_dir, length);
}

GeodesicSegment GeodesicSegment::toward_ideal(const HPoint& a, double psi, double azimuth,
                                              double length) {
    Vec4 v1 = ideal_direction(a, IdealPoint::canonical());
    // Orthonormal completion of the tangent space at a.
    Vec4 seeds[2] = {{0, 0, 1, 0}, {0, 0, 0, 1}};
    Vec4 basis[2];
    int have = 0;
    for (const Vec4& s : seeds) {
        Vec4 w = s + ldot(s, a.lift()) * a.lift(); // project to tangent space
        w = w - ldot(w, v1) * v1;
        for (int j = 0; j < have; ++j) w = w - ldot(w, basis[j]) * basis[j];
        double n2 = ldot(w, w);
        if (n2 > 1e-12) basis[have++] = w * (1.0 / std::sqrt(n2));
        if (have == 2) break;
    }
    if (have < 2) {
        // degenerate seeds (a on the y/z axis plane); fall back to x seed
        Vec4 s{0, 1, 0, 0};
        Vec4 w = s + ldot(s, a.lift()) * a.lift();
        w = w - ldot(w, v1) * v1;
        for (int j = 0; j < have; ++j) w = w - ldot(w, basis[j]) * basis[j];
        basis[have++] = w * (1.0 / std::sqrt(ldot(w, w)));
    }
    Vec4 u = std::cos(psi) * v1 +
             std::sin(psi) * (std::cos(azimuth) * basis[0] + std::sin(azimuth) * basis[1]);
    GeodesicSegment seg(a, u, length);
    double sh = std::sin(psi / 2);
    double tail = length > 700 ? 0.0 : std::exp(-length);
    double val = tail + 2 * sh * sh * std::sinh(std::min(length, 700.0));
    double b0 = horoball_busemann(a);
    seg.busemann_far_ = val > 0 ? b0 + std::log(val) : -kInfiniteLength;
    return seg;
}

HPoint GeodesicSegment::at(double t) const {
    if (std::abs(t) > 690) throw RangeError("segment point exceeds representable range");
    Vec4 r = std::cosh(t) * start_.lift() + std::sinh(t) * dir_;
    check_finite(r, "GeodesicSegment::at");
    return HPoint::from_lift(r);
}

double GeodesicSegment::busemann_far() const {
    if (busemann_far_) return *busemann_far_;
    double s = start_.lift().t + start_.lift().x;
    double c = dir_.t + dir_.x;
    return busemann_along(s, c, length_);
}

// ---------------------------------------------------------------------------
// Canonical horoball

double horoball_margin(const HPoint& p) {
    Vec3 b = p.ball();
    return b.norm2() + b.x;
}

double horoball_busemann(const HPoint& p) {
    double s = p.lift().t + p.lift().x;
    if (s <= 0) return -kInfiniteLength;
    return std::log(s);
}

HoroballClass horoball_contains(const HPoint& p) {
    double m = p.ball_representable() ? horoball_margin(p) : horoball_busemann(p);
    HoroballSide side = m < -kConstructTol  ? HoroballSide::Inside
                        : m > kConstructTol ? HoroballSide::Outside
                                            : HoroballSide::Boundary;
    return {side, m};
}

double busemann_along(double exp_b_start, double exp_b_deriv, double t) {
    double u1 = exp_b_start + exp_b_deriv;
    double u2 = exp_b_start - exp_b_deriv;
    if (t > 350) {
        if (u1 <= 0) return -kInfiniteLength;
        return t - std::log(2.0) + std::log(u1 + u2 * std::exp(-2 * t));
    }
    double v = u1 * std::exp(t) / 2 + u2 * std::exp(-t) / 2;
    if (v <= 0) return -kInfiniteLength;
    return std::log(v);
}

double ray_exit_length(double theta) {
    if (theta < 0 || theta > kPi) throw std::domain_error("theta outside [0, pi]");
    if (theta == 0) return kInfiniteLength;
    if (theta >= kPi / 2) return 0.0;
    double c = std::cos(theta);
    return std::log((1 + c) / (1 - c));
}

double chord_distance(double rho, double phi) {
    if (rho < 0 || phi < 0 || phi > kPi + 1e-12)
        throw std::domain_error("chord_distance: rho >= 0 and phi in [0, pi] required");
    double s = std::sin(phi / 2);
    if (rho == 0 || s == 0) return 0.0;
    if (rho < 300) {
        double u = std::sinh(rho) * s;
        return 2 * std::asinh(u);
    }
    // log domain: asinh(u) ~ log(2u) for large u
    double lu = log_sinh(rho) + std::log(s);
    if (lu > 40) return 2 * (lu + std::log(2.0));
    return 2 * std::asinh(std::exp(lu));
}

double point_segment_distance(const HPoint& p, const GeodesicSegment& seg) {
    double alpha = -ldot(p.lift(), seg.start().lift());
    double beta = -ldot(p.lift(), seg.dir());
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw RangeError("point_segment_distance: overflow");
    // Projection parameter in log form: cosh d(t) = alpha cosh t + beta
    // sinh t is minimized at t* = (1/2) log(sm / sp) with sp = alpha + beta,
    // sm = alpha - beta. The atanh form saturates past t* ~ 18; the log form
    // only degrades when the sums themselves cancel, and we can bound that
    // cancellation and refine by direct minimization within the bound.
    auto absdot = [](const Vec4& a, const Vec4& b) {
        return std::abs(a.t * b.t) + std::abs(a.x * b.x) + std::abs(a.y * b.y) +
               std::abs(a.z * b.z);
    };
    Vec4 plus = seg.start().lift() + seg.dir();
    Vec4 minus = seg.start().lift() - seg.dir();
    double sp = -ldot(p.lift(), plus);
    double sm = -ldot(p.lift(), minus);
    // error bound must cover the cancellation in forming start +- dir, which
    // dominates when the direction points back along the position vector
    double ebound =
        8e-16 * (absdot(p.lift(), seg.start().lift()) + absdot(p.lift(), seg.dir()));
    double esp = ebound;
    double esm = ebound;
    double len = seg.length();
    double tstar, dt;
    if (sp <= esp || sm <= esm) {
        // a sum is lost to cancellation entirely: no parameter estimate
        tstar = len / 2;
        dt = len;
    } else {
        tstar = clamp(0.5 * std::log(sm / sp), 0.0, len);
        dt = 0.5 * (esp / sp + esm / sm);
    }
    auto f = [&](double t) { return dist(p, seg.at(t)); };
    if (dt > 1e-9) {
        // poorly conditioned estimate; the inputs may additionally carry
        // drift this bound cannot see, so walk downhill (distance along a
        // geodesic is convex) until the minimum is bracketed, then refine
        double t = tstar, ft = f(t);
        double step = std::max(1e-6, 2 * dt);
        double lo, hi;
        for (;;) {
            lo = std::max(0.0, t - step);
            hi = std::min(len, t + step);
            double fl = f(lo), fh = f(hi);
            if (fl < ft && fl <= fh && lo > 0) {
                t = lo; ft = fl; step *= 4;
            } else if (fh < ft && hi < len) {
                t = hi; ft = fh; step *= 4;
            } else {
                if (fl < ft) { t = lo; ft = fl; }
                if (fh < ft) { t = hi; ft = fh; }
                break;
            }
        }
        const double g = (std::sqrt(5.0) - 1) / 2;
        double c1 = hi - g * (hi - lo), c2 = lo + g * (hi - lo);
        double f1 = f(c1), f2 = f(c2);
        for (int it = 0; it < 90 && hi - lo > 1e-12 * (1 + len); ++it) {
            if (f1 < f2) {
                hi = c2; c2 = c1; f2 = f1; c1 = hi - g * (hi - lo); f1 = f(c1);
            } else {
                lo = c1; c1 = c2; f1 = f2; c2 = lo + g * (hi - lo); f2 = f(c2);
            }
        }
        tstar = (lo + hi) / 2;
        if (f(0) < f(tstar)) tstar = 0;
        if (f(len) < f(tstar)) tstar = len;
    }
    HPoint nearest = seg.at(tstar);
    if (p.ball_representable() && nearest.ball_representable()) return dist(p, nearest);
    // fallback for out-of-ball ranges; resolves distances only down to ~1e-8
    double c = alpha * std::cosh(tstar) + beta * std::sinh(tstar);
    return 2 * std::asinh(std::sqrt(std::max(0.0, (c - 1) / 2)));
}

double segment_distance(const GeodesicSegment& s1, const GeodesicSegment& s2) {
    auto f = [&](double t) { return point_segment_distance(s1.at(t), s2); };
    double a = 0, b = s1.length();
    double best = std::min(f(a), f(b));
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120 && (b - a) > 1e-12 * (1 + s1.length()); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - g * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + g * (b - a); fd = f(d);
        }
    }
    return std::min(best, std::min(fc, fd));
}

namespace {

// van der Corput base-2 sequence; nested sample sets for any prefix length.
double vdc(unsigned i) {
    double r = 0, f = 0.5;
    while (i) {
        if (i & 1u) r += f;
        f /= 2;
        i >>= 1;
    }
    return r;
}

double dist_to_side(const HPoint& x, const HPoint& p, const HPoint& q) {
    if (p.approx_equal(q, 1e-14)) return dist(x, p);
    return point_segment_distance(x, GeodesicSegment::between(p, q));
}

} // namespace

double thin_triangle_gap(const HPoint& a, const HPoint& b, const HPoint& c, int samples) {
    if (samples < 2) throw std::domain_error("thin_triangle_gap: samples >= 2 required");
    const HPoint* v[3] = {&a, &b, &c};
    double gap = 0;
    for (int side = 0; side < 3; ++side) {
        const HPoint& p = *v[side];
        const HPoint& q = *v[(side + 1) % 3];
        const HPoint& r1 = *v[(side + 1) % 3];
        const HPoint& r2 = *v[(side + 2) % 3];
        const HPoint& r0 = *v[side];
        if (p.approx_equal(q, 1e-14)) continue;
        GeodesicSegment s = GeodesicSegment::between(p, q);
        for (int i = 1; i <= samples; ++i) {
            HPoint x = s.at(vdc(static_cast<unsigned>(i)) * s.length());
            double d = std::min(dist_to_side(x, r1, r2), dist_to_side(x, r2, r0));
            gap = std::max(gap, d);
        }
    }
    return gap;
}

// ---------------------------------------------------------------------------
// Frames

Frame Frame::canonical() {
    Frame f;
    f.p = {1, 0, 0, 0};
    f.u[0] = {0, 1, 0, 0};
    f.u[1] = {0, 0, 1, 0};
    f.u[2] = {0, 0, 0, 1};
    f.horo[0] = 1;
    f.horo[1] = 1;
    f.horo[2] = 0;
    f.horo[3] = 0;
    f.lambda = 0;
    return f;
}

Frame Frame::at_point(const HPoint& pos, const Vec4& u0, const Vec4& u1, const Vec4& u2) {
    Frame f;
    f.p = pos.lift();
    f.u[0] = u0;
    f.u[1] = u1;
    f.u[2] = u2;
    if (f.gram_residual() > 1e-8)
        throw std::domain_error("Frame::at_point: axes not orthonormal at position");
    f.horo[0] = f.p.t + f.p.x;
    for (int i = 0; i < 3; ++i) f.horo[i + 1] = f.u[i].t + f.u[i].x;
    f.lambda = 0;
    return f;
}

double Frame::gram_residual() const {
    double r = std::abs(ldot(p, p) + 1.0);
    for (int i = 0; i < 3; ++i) {
        r = std::max(r, std::abs(ldot(p, u[i])));
        for (int j = i; j < 3; ++j)
            r = std::max(r, std::abs(ldot(u[i], u[j]) - (i == j ? 1.0 : 0.0)));
    }
    return r;
}

void Frame::renormalize() {
    // Lorentz self-products cancel catastrophically once coordinates get
    // large; past that point "correcting" against them injects error far
    // bigger than the drift it would remove, so leave the frame alone.
    if (p.t >= 1e3) return;
    double q = -ldot(p, p);
    if (q > 0) p = p * (1.0 / std::sqrt(q));
    for (int i = 0; i < 3; ++i) {
        Vec4 w = u[i] + ldot(u[i], p) * p;
        for (int j = 0; j < i; ++j) w = w - ldot(w, u[j]) * u[j];
        double n2 = ldot(w, w);
        if (n2 > 0) u[i] = w * (1.0 / std::sqrt(n2));
    }
}

Frame Frame::transformed(const LorentzMat& g) const {
    Frame f;
    f.p = g.apply(p);
    for (int i = 0; i < 3; ++i) f.u[i] = g.apply(u[i]);
    f.horo[0] = f.p.t + f.p.x;
    for (int i = 0; i < 3; ++i) f.horo[i + 1] = f.u[i].t + f.u[i].x;
    f.lambda = 0;
    return f;
}

Frame chain_frame(const Frame& f, double t, double bend, double dihedral) {
    if (t < 0) throw std::domain_error("chain_frame: negative advance");
    if (t > 690) throw RangeError("chain_frame: advance exceeds representable range");
    double ct = std::cosh(t), st = std::sinh(t);
    Frame r;
    r.p = ct * f.p + st * f.u[0];
    Vec4 u0t = st * f.p + ct * f.u[0]; // transported first axis (geodesic velocity)
    Vec4 n = std::cos(dihedral) * f.u[1] + std::sin(dihedral) * f.u[2];
    Vec4 bn = -std::sin(dihedral) * f.u[1] + std::cos(dihedral) * f.u[2];
    double alpha = kPi - bend;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    r.u[0] = ca * u0t + sa * n;
    r.u[1] = -sa * u0t + ca * n;
    r.u[2] = bn;
    check_finite(r.p, "chain_frame");

    // advance the horo pairings in sum/difference form: the raw combination
    // cosh(t) h0 + sinh(t) h1 cancels to zero digits on descents toward the
    // basepoint, while (h0 + h1) e^t and (h0 - h1) e^-t are each exact
    double hsum = (f.horo[0] + f.horo[1]) * std::exp(std::min(t, 700.0));
    double hdif = (f.horo[0] - f.horo[1]) * std::exp(-t);
    double hp = 0.5 * (hsum + hdif);
    double hu0 = 0.5 * (hsum - hdif);
    double hn = std::cos(dihedral) * f.horo[2] + std::sin(dihedral) * f.horo[3];
    double hb = -std::sin(dihedral) * f.horo[2] + std::cos(dihedral) * f.horo[3];
    r.horo[0] = hp;
    r.horo[1] = ca * hu0 + sa * hn;
    r.horo[2] = -sa * hu0 + ca * hn;
    r.horo[3] = hb;
    r.lambda = f.lambda;
    double mx = 0;
    for (double h : r.horo) mx = std::max(mx, std::abs(h));
    if (mx > 0 && (mx > 1e15 || mx < 1e-15)) {
        for (double& h : r.horo) h /= mx;
        r.lambda += std::log(mx);
    }
    r.renormalize();
    return r;
}

// ---------------------------------------------------------------------------
// LorentzMat factories

LorentzMat LorentzMat::rotation(const Vec3& axis, double angle) {
    Vec3 a = axis.normalized();
    double c = std::cos(angle), s = std::sin(angle);
    LorentzMat r = identity();
    double R[3][3] = {
        {c + a.x * a.x * (1 - c), a.x * a.y * (1 - c) - a.z * s, a.x * a.z * (1 - c) + a.y * s},
        {a.y * a.x * (1 - c) + a.z * s, c + a.y * a.y * (1 - c), a.y * a.z * (1 - c) - a.x * s},
        {a.z * a.x * (1 - c) - a.y * s, a.z * a.y * (1 - c) + a.x * s, c + a.z * a.z * (1 - c)}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i + 1][j + 1] = R[i][j];
    return r;
}

LorentzMat LorentzMat::boost_x(double rapidity) {
    LorentzMat r = identity();
    double c = std::cosh(rapidity), s = std::sinh(rapidity);
    r.m[0][0] = c;
    r.m[0][1] = s;
    r.m[1][0] = s;
    r.m[1][1] = c;
    return r;
}

LorentzMat LorentzMat::parabolic_xi(double v2, double v3) {
    const Vec4 xi{1, -1, 0, 0};
    const Vec4 V{0, 0, v2, v3};
    double vv = v2 * v2 + v3 * v3;
    LorentzMat r;
    Vec4 basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    for (int col = 0; col < 4; ++col) {
        const Vec4& X = basis[col];
        Vec4 nx = X + ldot(X, V) * xi - ldot(X, xi) * V - (0.5 * vv * ldot(X, xi)) * xi;
        r.m[0][col] = nx.t;
        r.m[1][col] = nx.x;
        r.m[2][col] = nx.y;
        r.m[3][col] = nx.z;
    }
    return r;
}

} // namespace h3bound
