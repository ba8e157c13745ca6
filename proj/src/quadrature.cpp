#include "alesbm/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace alesbm {

namespace {

// Appends the 3 permutations of barycentric (a, a, 1-2a) scaled to the
// reference triangle; `w` is the normalized weight (sum over rule = 1).
void push_perm3(std::vector<TriQuadPoint>& pts, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    // barycentric (l1,l2,l3) -> (xi,eta) = (l2,l3)
    pts.push_back({a, a, 0.5 * w});
    pts.push_back({b, a, 0.5 * w});
    pts.push_back({a, b, 0.5 * w});
}

// Appends the 6 permutations of barycentric (a, b, c).
void push_perm6(std::vector<TriQuadPoint>& pts, double a, double b, double c, double w) {
    const std::array<std::array<double, 3>, 6> perms = {{{a, b, c},
                                                         {a, c, b},
                                                         {b, a, c},
                                                         {b, c, a},
                                                         {c, a, b},
                                                         {c, b, a}}};
    for (const auto& p : perms) pts.push_back({p[1], p[2], 0.5 * w});
}

std::vector<TriQuadPoint> make_triangle_rule(int degree) {
    std::vector<TriQuadPoint> pts;
    switch (degree) {
        case 1:
            pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0.5});
            break;
        case 2:
            push_perm3(pts, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 4:
            push_perm3(pts, 0.445948490915965, 0.223381589678011);
            push_perm3(pts, 0.091576213509771, 0.109951743655322);
            break;
        case 5:
            pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0.5 * 0.225});
            push_perm3(pts, 0.470142064105115, 0.132394152788506);
            push_perm3(pts, 0.101286507323456, 0.125939180544827);
            break;
        case 6:
            push_perm3(pts, 0.249286745170910, 0.116786275726379);
            push_perm3(pts, 0.063089014491502, 0.050844906370207);
            push_perm6(pts, 0.310352451033785, 0.636502499121399, 0.053145049844816,
                       0.082851075618374);
            break;
        case 8:
            pts.push_back({1.0 / 3.0, 1.0 / 3.0, 0.5 * 0.144315607677787});
            push_perm3(pts, 0.459292588292723, 0.095091634413245);
            push_perm3(pts, 0.170569307751760, 0.103217370534718);
            push_perm3(pts, 0.050547228317031, 0.032458497623198);
            push_perm6(pts, 0.263112829634638, 0.728492392955404, 0.008394777409958,
                       0.027230314174435);
            break;
        default:
            throw std::invalid_argument("no triangle rule stored for degree " +
                                        std::to_string(degree));
    }
    return pts;
}

// Degrees with stored positive-weight rules.
constexpr std::array<int, 6> kStoredDegrees = {1, 2, 4, 5, 6, 8};

std::vector<LineQuadPoint> make_gauss_legendre(int n) {
    // Nodes/weights on [-1,1]; mapped below to [0,1].
    std::vector<std::array<double, 2>> nw;
    switch (n) {
        case 1:
            nw = {{0.0, 2.0}};
            break;
        case 2:
            nw = {{-0.5773502691896257, 1.0}, {0.5773502691896257, 1.0}};
            break;
        case 3:
            nw = {{-0.7745966692414834, 5.0 / 9.0},
                  {0.0, 8.0 / 9.0},
                  {0.7745966692414834, 5.0 / 9.0}};
            break;
        case 4:
            nw = {{-0.8611363115940526, 0.3478548451374538},
                  {-0.3399810435848563, 0.6521451548625461},
                  {0.3399810435848563, 0.6521451548625461},
                  {0.8611363115940526, 0.3478548451374538}};
            break;
        case 5:
            nw = {{-0.9061798459386640, 0.2369268850561891},
                  {-0.5384693101056831, 0.4786286704993665},
                  {0.0, 0.5688888888888889},
                  {0.5384693101056831, 0.4786286704993665},
                  {0.9061798459386640, 0.2369268850561891}};
            break;
        case 6:
            nw = {{-0.9324695142031521, 0.1713244923791704},
                  {-0.6612093864662645, 0.3607615730481386},
                  {-0.2386191860831969, 0.4679139345726910},
                  {0.2386191860831969, 0.4679139345726910},
                  {0.6612093864662645, 0.3607615730481386},
                  {0.9324695142031521, 0.1713244923791704}};
            break;
        case 7:
            nw = {{-0.9491079123427585, 0.1294849661688697},
                  {-0.7415311855993945, 0.2797053914892766},
                  {-0.4058451513773972, 0.3818300505051189},
                  {0.0, 0.4179591836734694},
                  {0.4058451513773972, 0.3818300505051189},
                  {0.7415311855993945, 0.2797053914892766},
                  {0.9491079123427585, 0.1294849661688697}};
            break;
        case 8:
            nw = {{-0.9602898564975363, 0.1012285362903763},
                  {-0.7966664774136267, 0.2223810344533745},
                  {-0.5255324099163290, 0.3137066458778873},
                  {-0.1834346424956498, 0.3626837833783620},
                  {0.1834346424956498, 0.3626837833783620},
                  {0.5255324099163290, 0.3137066458778873},
                  {0.7966664774136267, 0.2223810344533745},
                  {0.9602898564975363, 0.1012285362903763}};
            break;
        default:
            throw std::invalid_argument("gauss_legendre: unsupported point count " +
                                        std::to_string(n));
    }
    std::vector<LineQuadPoint> pts;
    pts.reserve(nw.size());
    for (const auto& [x, w] : nw) pts.push_back({0.5 * (x + 1.0), 0.5 * w});
    return pts;
}

} // namespace

const std::vector<TriQuadPoint>& triangle_rule(int degree) {
    // All rules are built on first use; safe to call concurrently afterwards.
    static const std::map<int, std::vector<TriQuadPoint>> cache = [] {
        std::map<int, std::vector<TriQuadPoint>> m;
        for (int d : kStoredDegrees) m.emplace(d, make_triangle_rule(d));
        return m;
    }();
    if (degree < 1) degree = 1;
    for (int d : kStoredDegrees)
        if (d >= degree) return cache.at(d);
    throw std::invalid_argument("triangle_rule: degree " + std::to_string(degree) +
                                " exceeds shipped rules (max 8)");
}

const std::vector<LineQuadPoint>& gauss_legendre(int npoints) {
    static const std::map<int, std::vector<LineQuadPoint>> cache = [] {
        std::map<int, std::vector<LineQuadPoint>> m;
        for (int n = 1; n <= 8; ++n) m.emplace(n, make_gauss_legendre(n));
        return m;
    }();
    auto it = cache.find(npoints);
    if (it == cache.end())
        throw std::invalid_argument("gauss_legendre: unsupported point count " +
                                    std::to_string(npoints));
    return it->second;
}

int gauss_points_for_degree(int degree) {
    int n = (degree + 2) / 2;
    return n < 1 ? 1 : n;
}

} // namespace alesbm
