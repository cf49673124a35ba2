#include "adr/quadrature.hpp"

#include "adr/errors.hpp"

#include <array>
#include <string>

namespace adr {
namespace {

// Orbit builders in barycentric coordinates (l0, l1, l2); reference point is (l1, l2).
void add_centroid(QuadratureRule& rule, double w)
{
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5 * w);
}

void add_orbit3(QuadratureRule& rule, double a, double w)
{
    const double b = 1.0 - 2.0 * a;
    for (const Vec2& p : {Vec2{a, a}, Vec2{b, a}, Vec2{a, b}}) {
        rule.points.push_back(p);
        rule.weights.push_back(0.5 * w);
    }
}

void add_orbit6(QuadratureRule& rule, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    for (const Vec2& p : {Vec2{a, b}, Vec2{b, a}, Vec2{a, c}, Vec2{c, a}, Vec2{b, c}, Vec2{c, b}}) {
        rule.points.push_back(p);
        rule.weights.push_back(0.5 * w);
    }
}

// Dunavant (1985) rules with positive weights and interior points.
std::array<QuadratureRule, 9> make_rules()
{
    std::array<QuadratureRule, 9> rules;

    QuadratureRule d1;
    d1.degree = 1;
    add_centroid(d1, 1.0);

    QuadratureRule d2;
    d2.degree = 2;
    add_orbit3(d2, 1.0 / 6.0, 1.0 / 3.0);

    QuadratureRule d4;
    d4.degree = 4;
    add_orbit3(d4, 0.445948490915965, 0.223381589678011);
    add_orbit3(d4, 0.091576213509771, 0.109951743655322);

    QuadratureRule d5;
    d5.degree = 5;
    add_centroid(d5, 0.225);
    add_orbit3(d5, 0.470142064105115, 0.132394152788506);
    add_orbit3(d5, 0.101286507323456, 0.125939180544827);

    QuadratureRule d6;
    d6.degree = 6;
    add_orbit3(d6, 0.249286745170910, 0.116786275726379);
    add_orbit3(d6, 0.063089014491502, 0.050844906370207);
    add_orbit6(d6, 0.053145049844817, 0.310352451033784, 0.082851075618374);

    QuadratureRule d8;
    d8.degree = 8;
    add_centroid(d8, 0.144315607677787);
    add_orbit3(d8, 0.459292588292723, 0.095091634267285);
    add_orbit3(d8, 0.170569307751760, 0.103217370534718);
    add_orbit3(d8, 0.050547228317031, 0.032458497623198);
    add_orbit6(d8, 0.008394777409958, 0.263112829634638, 0.027230314174435);

    rules[1] = d1;
    rules[2] = d2;
    rules[3] = d4;
    rules[4] = d4;
    rules[5] = d5;
    rules[6] = d6;
    rules[7] = d8;
    rules[8] = d8;
    return rules;
}

} // namespace

const QuadratureRule& quadrature_rule(int exactness_degree)
{
    static const std::array<QuadratureRule, 9> rules = make_rules();
    if (exactness_degree < 1 || exactness_degree > 8) {
        throw InvalidArgument("quadrature_rule: unsupported exactness degree " + std::to_string(exactness_degree));
    }
    return rules[static_cast<std::size_t>(exactness_degree)];
}

} // namespace adr
