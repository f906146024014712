#pragma once

#include <array>
#include <vector>

namespace afc {

/// Triangle quadrature rule in barycentric coordinates; weights sum to 1 and
/// are applied as weight * |K|.
struct QuadratureRule {
    struct Point {
        std::array<double, 3> bary;
        double weight;
    };
    std::vector<Point> points;
    int degree;  // highest polynomial degree integrated exactly
};

inline const QuadratureRule& vertex_rule() {
    static const QuadratureRule rule{{
        {{1.0, 0.0, 0.0}, 1.0 / 3.0},
        {{0.0, 1.0, 0.0}, 1.0 / 3.0},
        {{0.0, 0.0, 1.0}, 1.0 / 3.0},
    }, 1};
    return rule;
}

inline const QuadratureRule& midpoint_rule() {
    static const QuadratureRule rule{{
        {{0.5, 0.5, 0.0}, 1.0 / 3.0},
        {{0.0, 0.5, 0.5}, 1.0 / 3.0},
        {{0.5, 0.0, 0.5}, 1.0 / 3.0},
    }, 2};
    return rule;
}

/// Six-point symmetric rule, exact through degree 4 (Dunavant).
inline const QuadratureRule& degree4_rule() {
    constexpr double a1 = 0.091576213509770743;
    constexpr double w1 = 0.10995174365532187;
    constexpr double a2 = 0.44594849091596489;
    constexpr double w2 = 0.22338158967801147;
    static const QuadratureRule rule{{
        {{1.0 - 2.0 * a1, a1, a1}, w1},
        {{a1, 1.0 - 2.0 * a1, a1}, w1},
        {{a1, a1, 1.0 - 2.0 * a1}, w1},
        {{1.0 - 2.0 * a2, a2, a2}, w2},
        {{a2, 1.0 - 2.0 * a2, a2}, w2},
        {{a2, a2, 1.0 - 2.0 * a2}, w2},
    }, 4};
    return rule;
}

}  // namespace afc
