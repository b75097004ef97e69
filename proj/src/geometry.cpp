#include "hamrep/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>

#include "hamrep/errors.hpp"

namespace hamrep {

namespace {

double max_abs_coord(std::span<const Vec2> pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s;
}

Vec2 closest_on_segment(Vec2 y, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double dd = dot(d, d);
    if (dd == 0.0) return a;
    double s = std::clamp(dot(y - a, d) / dd, 0.0, 1.0);
    return a + d * s;
}

Vec2 min_norm_on_segment(Vec2 a, Vec2 b) { return closest_on_segment({0.0, 0.0}, a, b); }

double tie_tolerance(const ConvexPolygon& body) { return 1e-12 * (1.0 + body.scale()); }

void require_nonempty(const ConvexPolygon& body) {
    if (body.size() == 0) throw Error(ErrorCode::EmptyBody, "polygon has no vertices");
}

}  // namespace

ConvexPolygon ConvexPolygon::hull(std::span<const Vec2> points) {
    if (points.empty()) throw Error(ErrorCode::EmptyBody, "hull of an empty point set");
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw Error(ErrorCode::EmptyBody, "non-finite vertex");
    }
    std::vector<Vec2> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end()), p.end());

    ConvexPolygon out;
    const double tol = 1e-12 * (1.0 + max_abs_coord(p));
    if (p.size() == 1) {
        out.v_ = p;
        return out;
    }
    // Andrew's monotone chain; pops points within tol of the supporting line.
    auto left_turn = [tol](Vec2 o, Vec2 a, Vec2 b) {
        Vec2 w = b - o;
        return cross(a - o, w) > tol * norm(w);
    };
    std::vector<Vec2> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && !left_turn(h[k - 2], h[k - 1], p[i])) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, lo = k + 1; i-- > 0;) {
        while (k >= lo && !left_turn(h[k - 2], h[k - 1], p[i])) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() == 2 && norm(h[1] - h[0]) <= tol) h.resize(1);
    out.v_ = std::move(h);
    return out;
}

ConvexPolygon ConvexPolygon::point(Vec2 p) {
    std::array<Vec2, 1> one{p};
    return hull(one);
}

ConvexPolygon ConvexPolygon::regular(Ball2 ball, int n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "regular polygon needs at least 3 vertices");
    std::vector<Vec2> pts(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * std::numbers::pi * i / n;
        pts[i] = ball.center + Vec2{std::cos(th), std::sin(th)} * ball.radius;
    }
    return hull(pts);
}

ConvexPolygon ConvexPolygon::box(double x0, double y0, double x1, double y1) {
    std::array<Vec2, 4> pts{Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x1, y1}, Vec2{x0, y1}};
    return hull(pts);
}

double ConvexPolygon::area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
    return 0.5 * a;
}

double ConvexPolygon::scale() const {
    double s = 0.0;
    for (const auto& p : v_) s = std::max(s, norm(p));
    return s;
}

SupportResult2 support(const ConvexPolygon& body, Vec2 dir) {
    require_nonempty(body);
    double len = norm(dir);
    if (!(len > 0.0)) throw Error(ErrorCode::InvalidArgument, "support direction must be nonzero");
    Vec2 u = dir * (1.0 / len);
    const auto& v = body.vertices();
    const std::size_t n = v.size();
    std::size_t best = 0;
    double bv = dot(u, v[0]);
    for (std::size_t i = 1; i < n; ++i) {
        double d = dot(u, v[i]);
        if (d > bv) bv = d, best = i;
    }
    if (n == 1) return {bv, v[0]};
    const double tol = tie_tolerance(body);
    Vec2 pt = v[best];
    std::size_t nx = (best + 1) % n, pv = (best + n - 1) % n;
    if (bv - dot(u, v[nx]) <= tol) {
        Vec2 c = min_norm_on_segment(v[best], v[nx]);
        if (norm(c) < norm(pt)) pt = c;
    }
    if (pv != nx && bv - dot(u, v[pv]) <= tol) {
        Vec2 c = min_norm_on_segment(v[pv], v[best]);
        if (norm(c) < norm(pt)) pt = c;
    }
    return {bv, pt};
}

Vec2 project_point(Vec2 y, const ConvexPolygon& body) {
    require_nonempty(body);
    const auto& v = body.vertices();
    const std::size_t n = v.size();
    if (n == 1) return v[0];
    if (n == 2) return closest_on_segment(y, v[0], v[1]);
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) {
        if (cross(v[(i + 1) % n] - v[i], y - v[i]) < 0.0) inside = false;
    }
    if (inside) return y;
    Vec2 best = v[0];
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 c = closest_on_segment(y, v[i], v[(i + 1) % n]);
        double d = norm(y - c);
        if (d < bd) bd = d, best = c;
    }
    return best;
}

double distance(Vec2 y, const ConvexPolygon& body) { return norm(y - project_point(y, body)); }

double excess(const ConvexPolygon& inner, const ConvexPolygon& outer) {
    require_nonempty(inner);
    double e = 0.0;
    for (const auto& p : inner.vertices()) e = std::max(e, distance(p, outer));
    return e;
}

double hausdorff(const ConvexPolygon& a, const ConvexPolygon& b) {
    return std::max(excess(a, b), excess(b, a));
}

ConvexPolygon minkowski_inflate(const ConvexPolygon& body, double r_v, double r_eta) {
    require_nonempty(body);
    if (r_v < 0.0 || r_eta < 0.0) throw Error(ErrorCode::InvalidArgument, "negative inflation radius");
    std::vector<Vec2> pts;
    pts.reserve(4 * body.size());
    for (const auto& p : body.vertices()) {
        pts.push_back(p + Vec2{-r_v, -r_eta});
        pts.push_back(p + Vec2{r_v, -r_eta});
        pts.push_back(p + Vec2{r_v, r_eta});
        pts.push_back(p + Vec2{-r_v, r_eta});
    }
    return ConvexPolygon::hull(pts);
}

bool contains_body(const ConvexPolygon& outer, const ConvexPolygon& inner, double tol) {
    require_nonempty(outer);
    return excess(inner, outer) <= tol;
}

ConvexPolygon intersect_disc(const ConvexPolygon& body, Ball2 disc) {
    require_nonempty(body);
    const Vec2 y = disc.center;
    const double r = disc.radius;
    const auto& v = body.vertices();
    const std::size_t n = v.size();
    auto inside = [&](Vec2 p) { return norm(p - y) <= r; };

    bool all_in = true;
    for (const auto& p : v) all_in = all_in && inside(p);
    if (all_in) return body;

    enum class Tag { Vertex, Entry, Exit };
    struct Event {
        Vec2 p;
        Tag tag;
    };
    std::vector<Event> ev;
    // Closed polyline; a segment is walked there and back.
    const std::size_t edges = n == 1 ? 0 : n;
    for (std::size_t i = 0; i < edges; ++i) {
        Vec2 P = v[i], Q = v[(i + 1) % n];
        bool pin = inside(P), qin = inside(Q);
        if (pin) ev.push_back({P, Tag::Vertex});
        Vec2 d = Q - P, f = P - y;
        double a = dot(d, d);
        if (a == 0.0) continue;
        double b = 2.0 * dot(f, d), c = dot(f, f) - r * r;
        double disc2 = b * b - 4.0 * a * c;
        if (disc2 < 0.0) {
            if (pin == qin) continue;
            disc2 = 0.0;
        }
        double sq = std::sqrt(disc2);
        double s0 = std::clamp((-b - sq) / (2.0 * a), 0.0, 1.0);
        double s1 = std::clamp((-b + sq) / (2.0 * a), 0.0, 1.0);
        if (!pin && !qin) {
            double raw0 = (-b - sq) / (2.0 * a), raw1 = (-b + sq) / (2.0 * a);
            if (raw0 < 0.0 || raw1 > 1.0 || raw0 > raw1) continue;
        }
        if (!pin) ev.push_back({P + d * s0, Tag::Entry});
        if (!qin) ev.push_back({P + d * s1, Tag::Exit});
    }
    if (n == 1) {
        if (inside(v[0])) return body;
        throw Error(ErrorCode::EmptyResult, "disc misses the point");
    }
    if (ev.empty()) {
        // No boundary inside the disc: either the disc lies inside the body or they are disjoint.
        if (distance(y, body) == 0.0 && n >= 3) {
            return ConvexPolygon::regular(disc, static_cast<int>(std::ceil(360.0 / kArcStepDegrees)));
        }
        throw Error(ErrorCode::EmptyResult, "disc and polygon are disjoint");
    }
    std::vector<Vec2> pts;
    pts.reserve(ev.size() * 4);
    const double step = kArcStepDegrees * std::numbers::pi / 180.0;
    for (std::size_t j = 0; j < ev.size(); ++j) {
        pts.push_back(ev[j].p);
        if (n < 3 || ev[j].tag != Tag::Exit) continue;
        const Event& nx = ev[(j + 1) % ev.size()];
        if (nx.tag != Tag::Entry) continue;
        double a0 = std::atan2(ev[j].p.y - y.y, ev[j].p.x - y.x);
        double a1 = std::atan2(nx.p.y - y.y, nx.p.x - y.x);
        double span = a1 - a0;
        while (span < 0.0) span += 2.0 * std::numbers::pi;
        int steps = static_cast<int>(std::ceil(span / step));
        for (int s = 1; s < steps; ++s) {
            double th = a0 + span * s / steps;
            pts.push_back(y + Vec2{std::cos(th), std::sin(th)} * r);
        }
    }
    return ConvexPolygon::hull(pts);
}

ConvexPolygon proj_map(Vec2 y, const ConvexPolygon& body) {
    double d = distance(y, body);
    if (d == 0.0) return ConvexPolygon::point(y);
    return intersect_disc(body, {y, 2.0 * d});
}

namespace {

struct HalfPlane {
    Vec2 normal;
    double offset;  // normal·z <= offset
};

std::vector<HalfPlane> halfplanes(const ConvexPolygon& p) {
    const auto& v = p.vertices();
    std::vector<HalfPlane> hs;
    if (v.size() == 1) {
        hs = {{{1, 0}, v[0].x}, {{-1, 0}, -v[0].x}, {{0, 1}, v[0].y}, {{0, -1}, -v[0].y}};
    } else if (v.size() == 2) {
        Vec2 d = v[1] - v[0];
        Vec2 nrm{-d.y, d.x};
        hs = {{nrm, dot(nrm, v[0])}, {nrm * -1.0, -dot(nrm, v[0])}, {d, dot(d, v[1])}, {d * -1.0, -dot(d, v[0])}};
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            Vec2 d = v[(i + 1) % v.size()] - v[i];
            Vec2 nrm{d.y, -d.x};
            hs.push_back({nrm, dot(nrm, v[i])});
        }
    }
    return hs;
}

}  // namespace

ConvexPolygon intersect(const ConvexPolygon& a, const ConvexPolygon& b) {
    require_nonempty(a);
    require_nonempty(b);
    const double tol = 1e-12 * (1.0 + std::max(a.scale(), b.scale()));
    std::vector<Vec2> poly = a.vertices();
    for (const auto& h : halfplanes(b)) {
        double hn = norm(h.normal);
        if (hn == 0.0) continue;
        std::vector<Vec2> next;
        const std::size_t m = poly.size();
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 P = poly[i], Q = poly[(i + 1) % m];
            double dp = (dot(h.normal, P) - h.offset) / hn;
            double dq = (dot(h.normal, Q) - h.offset) / hn;
            bool pin = dp <= tol, qin = dq <= tol;
            if (pin) next.push_back(P);
            if (pin != qin && m > 1) next.push_back(P + (Q - P) * (dp / (dp - dq)));
        }
        poly = std::move(next);
        if (poly.empty()) throw Error(ErrorCode::EmptyResult, "polygons are disjoint");
    }
    return ConvexPolygon::hull(poly);
}

Vec2 steiner(const ConvexPolygon& body, int n_dirs) {
    require_nonempty(body);
    if (n_dirs < 3) throw Error(ErrorCode::InvalidArgument, "steiner needs at least 3 directions");
    const auto& v = body.vertices();
    const std::size_t n = v.size();
    if (n == 1) return v[0];
    const double tol = tie_tolerance(body);

    std::size_t j = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (v[i].x > v[j].x || (v[i].x == v[j].x && v[i].y < v[j].y)) j = i;

    // Nodes are shifted by a fixed irrational fraction of a step so that edge
    // normals of regular or axis-aligned polygons do not land on nodes.
    constexpr double kNodeShift = 0.3819660112501051;
    double sx = 0.0, sy = 0.0;
    for (int k = 0; k < n_dirs; ++k) {
        double th = 2.0 * std::numbers::pi * (k + kNodeShift) / n_dirs;
        Vec2 u{std::cos(th), std::sin(th)};
        for (std::size_t guard = 0; guard < n; ++guard) {
            std::size_t jn = (j + 1) % n;
            if (dot(u, v[jn]) > dot(u, v[j]) + tol) j = jn;
            else break;
        }
        double dj = dot(u, v[j]);
        std::size_t jn = (j + 1) % n, jp = (j + n - 1) % n;
        Vec2 pt = v[j];
        if (std::abs(dot(u, v[jn]) - dj) <= tol) pt = min_norm_on_segment(v[j], v[jn]);
        else if (std::abs(dot(u, v[jp]) - dj) <= tol) pt = min_norm_on_segment(v[jp], v[j]);
        sx += pt.x;
        sy += pt.y;
    }
    // Quadrature noise may leave the body by rounding; clamp back.
    return project_point(Vec2{sx / n_dirs, sy / n_dirs}, body);
}

// ---------------------------------------------------------------- 3-D backend

namespace {

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }

}  // namespace

SupportBody3 SupportBody3::from_points(std::span<const Vec3> points, int n_dirs, std::uint64_t seed) {
    if (points.empty()) throw Error(ErrorCode::EmptyBody, "support body from no points");
    if (n_dirs < 4) throw Error(ErrorCode::InvalidArgument, "need at least 4 directions");
    // Random rotation from a uniformly drawn unit quaternion.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    double q[4];
    double qn = 0.0;
    do {
        for (double& c : q) c = g(rng);
        qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    } while (qn < 1e-6);
    for (double& c : q) c /= qn;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double R[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
                            {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
                            {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};

    SupportBody3 out;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n_dirs; ++i) {
        double zz = 1.0 - (2.0 * i + 1.0) / n_dirs;
        double rr = std::sqrt(std::max(0.0, 1.0 - zz * zz));
        Vec3 d{rr * std::cos(golden * i), rr * std::sin(golden * i), zz};
        Vec3 u{};
        for (int a = 0; a < 3; ++a) u[a] = R[a][0] * d[0] + R[a][1] * d[1] + R[a][2] * d[2];
        double un = norm3(u);
        for (double& c : u) c /= un;
        double best = -std::numeric_limits<double>::infinity();
        Vec3 bp{};
        for (const auto& p : points) {
            double val = dot3(u, p);
            if (val > best + 1e-12 || (std::abs(val - best) <= 1e-12 && norm3(p) < norm3(bp))) {
                best = val;
                bp = p;
            }
        }
        out.dirs_.push_back(u);
        out.values_.push_back(dot3(u, bp));
        out.points_.push_back(bp);
    }
    return out;
}

SupportResult3 support(const SupportBody3& body, Vec3 dir) {
    double len = norm3(dir);
    if (!(len > 0.0)) throw Error(ErrorCode::InvalidArgument, "support direction must be nonzero");
    for (double& c : dir) c /= len;
    const auto& pts = body.points();
    if (pts.empty()) throw Error(ErrorCode::EmptyBody, "support body has no samples");
    double best = dot3(dir, pts[0]);
    Vec3 bp = pts[0];
    for (const auto& p : pts) {
        double val = dot3(dir, p);
        if (val > best + 1e-12 || (std::abs(val - best) <= 1e-12 && norm3(p) < norm3(bp))) {
            best = std::max(best, val);
            bp = p;
        }
    }
    return {best, bp};
}

double distance(const Vec3& y, const SupportBody3& body) {
    double d = 0.0;
    for (std::size_t i = 0; i < body.directions().size(); ++i)
        d = std::max(d, dot3(body.directions()[i], y) - body.values()[i]);
    return d;
}

double hausdorff(const SupportBody3& a, const SupportBody3& b) {
    double h = 0.0;
    for (const auto* dirs : {&a.directions(), &b.directions()}) {
        for (const auto& u : *dirs) h = std::max(h, std::abs(support(a, u).value - support(b, u).value));
    }
    return h;
}

Vec3 steiner(const SupportBody3& body) {
    const auto& pts = body.points();
    if (pts.empty()) throw Error(ErrorCode::EmptyBody, "support body has no samples");
    Vec3 s{0.0, 0.0, 0.0};
    for (const auto& p : pts)
        for (int a = 0; a < 3; ++a) s[a] += p[a];
    for (double& c : s) c /= static_cast<double>(pts.size());
    return s;
}

const ConvexPolygon& ConvexBody::polygon() const {
    if (auto* p = std::get_if<ConvexPolygon>(&rep_)) return *p;
    throw Error(ErrorCode::DimMismatch, "body is not 2-dimensional");
}

const SupportBody3& ConvexBody::support_body() const {
    if (auto* p = std::get_if<SupportBody3>(&rep_)) return *p;
    throw Error(ErrorCode::DimMismatch, "body is not 3-dimensional");
}

double hausdorff(const ConvexBody& a, const ConvexBody& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "hausdorff across dimensions");
    if (a.dim() == 2) return hausdorff(a.polygon(), b.polygon());
    return hausdorff(a.support_body(), b.support_body());
}

bool contains_body(const ConvexBody& outer, const ConvexBody& inner, double tol) {
    if (outer.dim() != inner.dim()) throw Error(ErrorCode::DimMismatch, "containment across dimensions");
    if (outer.dim() == 2) return contains_body(outer.polygon(), inner.polygon(), tol);
    for (const auto& p : inner.support_body().points())
        if (distance(p, outer.support_body()) > tol) return false;
    return true;
}

}  // namespace hamrep
