#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iplab/simplex.hpp"

// Envelope lower/upper probabilities and previsions over finite credal
// sets, conjugacy and monotonicity/additivity property checks, finite
// rectangle evaluations of the product models, shift invariance on
// rectangles, and the symmetric-difference typicality distance with its
// axiom checker.

namespace iplab {

/// Event over outcomes [0, k): bit j set means outcome j is in the event.
using EventMask = std::uint32_t;

double event_prob(const Measure& m, EventMask a);
double lower_prob(const CredalSet& m, EventMask a);
double upper_prob(const CredalSet& m, EventMask a);
double lower_prevision(const CredalSet& m, const Gamble& x);
double upper_prevision(const CredalSet& m, const Gamble& x);

struct AxiomViolation {
    std::string axiom;
    std::vector<EventMask> events;
    double lhs = 0.0, rhs = 0.0;
};

struct AxiomReport {
    std::uint64_t checks = 0;
    std::vector<AxiomViolation> violations;

    bool ok() const { return violations.empty(); }
    nlohmann::json to_json() const;
};

/// Arbitrary event set function, so hand-built (non-envelope) pairs can be
/// checked too.
using SetFunction = std::function<double(EventMask)>;

/// Verifies the conjugate-pair properties on all events of a k-outcome
/// space: boundary values at the empty set and the whole space,
/// monotonicity of both, subadditivity of the upper on all pairs and
/// superadditivity of the lower on disjoint pairs.
AxiomReport check_p_axioms(const SetFunction& lower, const SetFunction& upper, std::size_t k);
AxiomReport check_p_axioms(const CredalSet& m);

/// Conjugacy lower(A) = 1 - upper(complement A) on all events.
AxiomReport check_conjugacy(const CredalSet& m);

/// Finite product-model event: outcome subsets for the first n steps, all
/// later steps unconstrained.
struct Rectangle {
    std::vector<EventMask> factors;
};

/// Product of the per-factor envelope minima; the empty rectangle has
/// lower probability one.
double rectangle_lower_prob(const CredalSet& m, const Rectangle& rect);

/// Prepending `shift` unconstrained factors never changes the rectangle's
/// lower probability.
bool shift_rectangle_invariance(const CredalSet& m, const Rectangle& rect, std::uint64_t shift,
                                double tol = 1e-12);

/// Typicality distance d(A,B) = upper probability of the symmetric
/// difference.
double typicality_distance(const CredalSet& m, EventMask a, EventMask b);
/// Absolute typicality 1 - lower(A); zero marks a typical set.
double absolute_typicality(const CredalSet& m, EventMask a);

/// Verifies the five typicality-distance axioms exhaustively over events
/// of the k-outcome space (pairs, triples and quadruples as each axiom
/// requires). Feasible for k <= 6.
AxiomReport check_t_axioms(const CredalSet& m);

}  // namespace iplab
