#include "pxfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace pxfem {

namespace {

QuadratureRule make_degree5_rule() {
    QuadratureRule rule;
    rule.degree = 5;
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 + s) / 21.0;
    const double a2 = (6.0 - s) / 21.0;
    const double w1 = (155.0 + s) / 1200.0;
    const double w2 = (155.0 - s) / 1200.0;
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(9.0 / 40.0);
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        const double c = 1.0 - 2.0 * a;
        rule.points.push_back({a, a, c});
        rule.points.push_back({a, c, a});
        rule.points.push_back({c, a, a});
        rule.weights.insert(rule.weights.end(), 3, w);
    }
    return rule;
}

QuadratureRule make_degree6_rule() {
    QuadratureRule rule;
    rule.degree = 6;
    // two symmetric 3-point orbits plus one 6-point orbit
    const double a1 = 0.063089014491502228340331602870819;
    const double w1 = 0.050844906370206816920936809106869;
    const double a2 = 0.249286745170910421291638553107019;
    const double w2 = 0.116786275726379366046164695772851;
    const double b1 = 0.053145049844816947353249671631398;
    const double b2 = 0.310352451033784405416607733956552;
    const double w3 = 0.082851075618373575193553456420442;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
        const double c = 1.0 - 2.0 * a;
        rule.points.push_back({a, a, c});
        rule.points.push_back({a, c, a});
        rule.points.push_back({c, a, a});
        rule.weights.insert(rule.weights.end(), 3, w);
    }
    const double b3 = 1.0 - b1 - b2;
    rule.points.push_back({b1, b2, b3});
    rule.points.push_back({b2, b1, b3});
    rule.points.push_back({b1, b3, b2});
    rule.points.push_back({b2, b3, b1});
    rule.points.push_back({b3, b1, b2});
    rule.points.push_back({b3, b2, b1});
    rule.weights.insert(rule.weights.end(), 6, w3);
    return rule;
}

}  // namespace

const QuadratureRule& triangle_rule(int selector) {
    static const QuadratureRule deg5 = make_degree5_rule();
    static const QuadratureRule deg6 = make_degree6_rule();
    switch (selector) {
        case 5: return deg5;
        case 12: return deg6;
        default:
            throw std::invalid_argument(
                "triangle_rule: selector must be 5 or 12");
    }
}

}  // namespace pxfem
