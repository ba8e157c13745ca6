#include "alesbm/boundary_geometry.hpp"

#include <cmath>

#include "alesbm/errors.hpp"

namespace alesbm {

CircleBoundary CircleBoundary::fixed(const Vec2& c, double R) {
    return CircleBoundary([c](double) { return c; }, [](double) { return Vec2::Zero().eval(); },
                          [R](double) { return R; }, [](double) { return 0.0; });
}

CircleBoundary CircleBoundary::translating(const Vec2& c0, double R,
                                           std::function<Vec2(double)> offset,
                                           std::function<Vec2(double)> offset_rate) {
    return CircleBoundary([c0, offset](double t) { return (c0 + offset(t)).eval(); },
                          [offset_rate](double t) { return offset_rate(t); },
                          [R](double) { return R; }, [](double) { return 0.0; });
}

CircleBoundary CircleBoundary::scaling(const Vec2& c, std::function<double(double)> radius,
                                       std::function<double(double)> radius_rate) {
    return CircleBoundary([c](double) { return c; }, [](double) { return Vec2::Zero().eval(); },
                          std::move(radius), std::move(radius_rate));
}

Projection CircleBoundary::closest_point(const Vec2& xt, double t) const {
    const Vec2 c = center_(t);
    const double R = radius_(t);
    if (!(R > 0.0)) throw SolverError("boundary", "circle radius not positive at queried time");
    const Vec2 rel = xt - c;
    const double dist = rel.norm();
    if (dist < 1e-14 * std::max(1.0, R))
        throw SolverError("boundary", "ambiguous projection: point at circle center");
    Projection p;
    p.n = rel / dist;
    p.x = c + R * p.n;
    p.d = R - dist;
    return p;
}

Vec2 CircleBoundary::wall_velocity(const Vec2& x, double t) const {
    const Vec2 c = center_(t);
    const Vec2 rel = x - c;
    const double dist = rel.norm();
    Vec2 v = center_vel_(t);
    const double rate = radius_rate_(t);
    if (rate != 0.0) {
        if (dist < 1e-14) throw SolverError("boundary", "wall velocity queried at circle center");
        v += rate * rel / dist;
    }
    return v;
}

} // namespace alesbm
