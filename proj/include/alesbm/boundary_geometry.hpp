#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include "alesbm/euler.hpp"

namespace alesbm {

/// Result of projecting a surrogate-boundary point onto the true boundary:
/// x = xt + d * n holds exactly, n is the true outward unit normal at x.
struct Projection {
    Vec2 x;
    double d;
    Vec2 n;
};

/// Time-parameterized analytic circle: center path c(t) and radius path
/// R(t). Wall material points move rigidly with the circle, so the wall
/// velocity at a boundary point is c'(t) + R'(t) * radial direction.
class CircleBoundary {
public:
    CircleBoundary(std::function<Vec2(double)> center, std::function<Vec2(double)> center_vel,
                   std::function<double(double)> radius, std::function<double(double)> radius_rate)
        : center_(std::move(center)),
          center_vel_(std::move(center_vel)),
          radius_(std::move(radius)),
          radius_rate_(std::move(radius_rate)) {}

    /// Fixed circle.
    static CircleBoundary fixed(const Vec2& c, double R);
    /// Rigidly translating circle: c(t) = c0 + offset(t).
    static CircleBoundary translating(const Vec2& c0, double R,
                                      std::function<Vec2(double)> offset,
                                      std::function<Vec2(double)> offset_rate);
    /// Concentric circle with a time-dependent radius.
    static CircleBoundary scaling(const Vec2& c, std::function<double(double)> radius,
                                  std::function<double(double)> radius_rate);

    Vec2 center(double t) const { return center_(t); }
    double radius(double t) const { return radius_(t); }

    /// Closest point on the circle at time t; throws if xt coincides with
    /// the center (ambiguous projection). d is signed so that x = xt + d n.
    Projection closest_point(const Vec2& xt, double t) const;

    /// Prescribed rigid-motion velocity of the boundary material at (x, t).
    Vec2 wall_velocity(const Vec2& x, double t) const;

private:
    std::function<Vec2(double)> center_;
    std::function<Vec2(double)> center_vel_;
    std::function<double(double)> radius_;
    std::function<double(double)> radius_rate_;
};

} // namespace alesbm
