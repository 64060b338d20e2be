#include "iplab/imprecision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iplab {

namespace {
constexpr double kCheckTol = 1e-12;
}

double event_prob(const Measure& m, EventMask a) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.k(); ++j)
        if (a & (1u << j)) s += m.w[j];
    return s;
}

double lower_prob(const CredalSet& m, EventMask a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Measure& mu : m.members) best = std::min(best, event_prob(mu, a));
    return best;
}

double upper_prob(const CredalSet& m, EventMask a) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Measure& mu : m.members) best = std::max(best, event_prob(mu, a));
    return best;
}

double lower_prevision(const CredalSet& m, const Gamble& x) {
    if (x.k() != m.k()) throw std::invalid_argument("lower_prevision: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const Measure& mu : m.members) {
        double e = 0.0;
        for (std::size_t j = 0; j < x.k(); ++j) e += mu.w[j] * x.values[j];
        best = std::min(best, e);
    }
    return best;
}

double upper_prevision(const CredalSet& m, const Gamble& x) {
    Gamble neg{x.values};
    for (double& v : neg.values) v = -v;
    return -lower_prevision(m, neg);
}

nlohmann::json AxiomReport::to_json() const {
    nlohmann::json j;
    j["checks"] = checks;
    j["ok"] = ok();
    nlohmann::json vs = nlohmann::json::array();
    for (const AxiomViolation& v : violations) {
        nlohmann::json e;
        e["axiom"] = v.axiom;
        e["events"] = v.events;
        e["lhs"] = v.lhs;
        e["rhs"] = v.rhs;
        vs.push_back(e);
    }
    j["violations"] = vs;
    return j;
}

AxiomReport check_p_axioms(const SetFunction& lower, const SetFunction& upper, std::size_t k) {
    if (k > 12) throw std::invalid_argument("check_p_axioms: exhaustive enumeration needs k <= 12");
    const EventMask omega = static_cast<EventMask>((1ull << k) - 1);
    AxiomReport rep;
    auto flag = [&](const char* name, std::vector<EventMask> evs, double lhs, double rhs) {
        rep.violations.push_back({name, std::move(evs), lhs, rhs});
    };

    ++rep.checks;
    if (std::abs(lower(0)) > kCheckTol || std::abs(upper(0)) > kCheckTol)
        flag("P1-empty", {0}, lower(0), upper(0));
    ++rep.checks;
    if (std::abs(lower(omega) - 1.0) > kCheckTol || std::abs(upper(omega) - 1.0) > kCheckTol)
        flag("P1-full", {omega}, lower(omega), upper(omega));

    for (EventMask a = 0; a <= omega; ++a) {
        for (EventMask b = 0; b <= omega; ++b) {
            if ((a & b) == a) {  // a subset of b: monotonicity
                ++rep.checks;
                if (lower(a) > lower(b) + kCheckTol) flag("P2-lower", {a, b}, lower(a), lower(b));
                ++rep.checks;
                if (upper(a) > upper(b) + kCheckTol) flag("P2-upper", {a, b}, upper(a), upper(b));
            }
            ++rep.checks;
            const double ub = upper(static_cast<EventMask>(a | b));
            if (ub > upper(a) + upper(b) + kCheckTol)
                flag("P3-subadditive", {a, b}, ub, upper(a) + upper(b));
            if ((a & b) == 0) {
                ++rep.checks;
                const double lb = lower(static_cast<EventMask>(a | b));
                if (lb + kCheckTol < lower(a) + lower(b))
                    flag("P4-superadditive", {a, b}, lb, lower(a) + lower(b));
            }
        }
    }
    return rep;
}

AxiomReport check_p_axioms(const CredalSet& m) {
    return check_p_axioms([&](EventMask a) { return lower_prob(m, a); },
                          [&](EventMask a) { return upper_prob(m, a); }, m.k());
}

AxiomReport check_conjugacy(const CredalSet& m) {
    if (m.k() > 12) throw std::invalid_argument("check_conjugacy: needs k <= 12");
    const EventMask omega = static_cast<EventMask>((1ull << m.k()) - 1);
    AxiomReport rep;
    for (EventMask a = 0; a <= omega; ++a) {
        ++rep.checks;
        const double l = lower_prob(m, a);
        const double u = upper_prob(m, static_cast<EventMask>(omega & ~a));
        if (std::abs(l + u - 1.0) > kCheckTol)
            rep.violations.push_back({"conjugacy", {a}, l, 1.0 - u});
    }
    return rep;
}

double rectangle_lower_prob(const CredalSet& m, const Rectangle& rect) {
    double prod = 1.0;
    for (EventMask a : rect.factors) prod *= lower_prob(m, a);
    return prod;
}

bool shift_rectangle_invariance(const CredalSet& m, const Rectangle& rect, std::uint64_t shift,
                                double tol) {
    const EventMask omega = static_cast<EventMask>((1ull << m.k()) - 1);
    Rectangle shifted;
    shifted.factors.assign(shift, omega);
    shifted.factors.insert(shifted.factors.end(), rect.factors.begin(), rect.factors.end());
    return std::abs(rectangle_lower_prob(m, rect) - rectangle_lower_prob(m, shifted)) <= tol;
}

double typicality_distance(const CredalSet& m, EventMask a, EventMask b) {
    return upper_prob(m, a ^ b);
}

double absolute_typicality(const CredalSet& m, EventMask a) { return 1.0 - lower_prob(m, a); }

AxiomReport check_t_axioms(const CredalSet& m) {
    if (m.k() > 6) throw std::invalid_argument("check_t_axioms: exhaustive enumeration needs k <= 6");
    const EventMask omega = static_cast<EventMask>((1ull << m.k()) - 1);
    const std::uint32_t n_events = omega + 1;
    AxiomReport rep;
    auto flag = [&](const char* name, std::vector<EventMask> evs, double lhs, double rhs) {
        rep.violations.push_back({name, std::move(evs), lhs, rhs});
    };

    // Distance table once; the axiom sweeps below are pure lookups.
    std::vector<double> d(std::size_t(n_events) * n_events);
    for (EventMask a = 0; a <= omega; ++a)
        for (EventMask b = 0; b <= omega; ++b)
            d[std::size_t(a) * n_events + b] = typicality_distance(m, a, b);
    auto dist = [&](EventMask a, EventMask b) { return d[std::size_t(a) * n_events + b]; };

    // T1: A subset of A' implies d(A, empty) <= d(A', empty).
    for (EventMask a = 0; a <= omega; ++a)
        for (EventMask a2 = 0; a2 <= omega; ++a2) {
            if ((a & a2) != a) continue;
            ++rep.checks;
            if (dist(a, 0) > dist(a2, 0) + kCheckTol) flag("T1", {a, a2}, dist(a, 0), dist(a2, 0));
        }
    // T2: d(Omega, empty) = 1.
    ++rep.checks;
    if (std::abs(dist(omega, 0) - 1.0) > kCheckTol) flag("T2", {omega}, dist(omega, 0), 1.0);
    // T3: d(A, Omega) = d(complement A, empty).
    for (EventMask a = 0; a <= omega; ++a) {
        ++rep.checks;
        const EventMask ac = static_cast<EventMask>(omega & ~a);
        if (std::abs(dist(a, omega) - dist(ac, 0)) > kCheckTol)
            flag("T3", {a}, dist(a, omega), dist(ac, 0));
    }
    // T4: d(A1 ^ A2, B) <= d(A1, B) + d(A2, B) for intersections.
    for (EventMask a1 = 0; a1 <= omega; ++a1)
        for (EventMask a2 = 0; a2 <= omega; ++a2) {
            const EventMask inter = a1 & a2;
            for (EventMask b = 0; b <= omega; ++b) {
                ++rep.checks;
                if (dist(inter, b) > dist(a1, b) + dist(a2, b) + kCheckTol)
                    flag("T4", {a1, a2, b}, dist(inter, b), dist(a1, b) + dist(a2, b));
            }
        }
    // T5: d(A1 & A2, B1 & B2) <= d(A1, B1) + d(A2, B2).
    for (EventMask a1 = 0; a1 <= omega; ++a1)
        for (EventMask a2 = 0; a2 <= omega; ++a2)
            for (EventMask b1 = 0; b1 <= omega; ++b1)
                for (EventMask b2 = 0; b2 <= omega; ++b2) {
                    ++rep.checks;
                    if (dist(a1 & a2, b1 & b2) > dist(a1, b1) + dist(a2, b2) + kCheckTol)
                        flag("T5", {a1, a2, b1, b2}, dist(a1 & a2, b1 & b2),
                             dist(a1, b1) + dist(a2, b2));
                }
    return rep;
}

}  // namespace iplab
