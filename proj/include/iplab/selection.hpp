#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iplab/generator.hpp"
#include "iplab/simplex.hpp"

// Index-based selection rules and subsequence analytics: relative
// frequencies along a rule, theoretical subsequence means, the
// concentration bound over a finite rule set with its Monte-Carlo
// checker, the union estimate of the underlying measure set, and the
// greedy rule that reveals a cluster point of the measure sequence.

namespace iplab {

/// Deterministic predicate on the step index. Config mini-format:
/// "mod:a,b", "bit:pos,val", "explicit:path", "squares",
/// "near:w0|w1|..,eps0,decay" (the last is resolved against a stream by
/// revealing_rule).
struct SelectionRule {
    enum class Kind : std::uint8_t { Modular, Bit, Explicit, Squares };

    Kind kind = Kind::Modular;
    std::uint64_t a = 1, b = 0;          // modular / bit parameters
    std::vector<std::uint64_t> indices;  // explicit kind, sorted ascending
    std::string description;

    bool selects(std::uint64_t i) const;
    /// Number of selected indices in [1, n].
    std::uint64_t count_leq(std::uint64_t n) const;
    /// Asymptotic density when the rule is periodic, nullopt otherwise.
    std::optional<double> period_density() const;

    static SelectionRule all();
    static SelectionRule modular(std::uint64_t a, std::uint64_t b);
    static SelectionRule bit(std::uint64_t pos, std::uint64_t val);
    static SelectionRule explicit_indices(std::vector<std::uint64_t> sorted);
    static SelectionRule squares();
    static SelectionRule parse(const std::string& spec);
};

/// Outcome counts restricted to the selected subsequence.
struct SubseqTracker {
    SelectionRule rule;
    std::vector<std::uint64_t> counts;
    std::uint64_t selected_n = 0;
    std::uint64_t total_n = 0;

    SubseqTracker(SelectionRule r, std::size_t k) : rule(std::move(r)), counts(k, 0) {}

    void update(std::uint32_t outcome);
    Measure selected_freq() const;
};

/// Average of the stream's measures over selected indices i <= n.
Measure theoretical_mean(MeasureStream& stream, const SelectionRule& rule, std::uint64_t n);

/// 2 k |S| exp(-eps^2 m^2 / 2n): bound on the chance that any rule with at
/// least m selections deviates from its theoretical mean by eps in the
/// max-coordinate metric.
double fierens_fine_bound(std::size_t k, std::size_t num_rules, double eps, std::uint64_t m,
                          std::uint64_t n);

struct ConcentrationResult {
    double bound = 0.0;
    double empirical = 0.0;   // fraction of trials with a deviation >= eps
    double std_error = 0.0;   // binomial standard error of the fraction
    std::uint64_t trials = 0;
    bool within_bound(double num_errors = 3.0) const {
        return empirical <= bound + num_errors * std_error;
    }
};

/// Monte-Carlo check of the bound: `trials` independent outcome sequences
/// of length n from the stream; a trial violates when some rule with
/// selected count >= m has max-coordinate deviation >= eps from its
/// theoretical mean.
ConcentrationResult check_concentration(MeasureStream& stream,
                                        const std::vector<SelectionRule>& rules, std::uint64_t n,
                                        std::uint64_t m, double eps, std::uint64_t trials,
                                        Seed base_seed);

/// Selected frequencies of every rule whose selected count is at least m.
std::vector<Measure> estimate_m_hat(const std::vector<SubseqTracker>& trackers, std::uint64_t m);

/// Interleaves the base stream with a round-robin walk over the credal
/// members at the indices chosen by a vanishing-density rule: every member
/// becomes a cluster point of the measure sequence while the Cesaro
/// cluster set is unchanged. Rules with positive periodic density are
/// rejected.
std::unique_ptr<MeasureStream> interleave_cover(std::unique_ptr<MeasureStream> base, CredalSet m,
                                                SelectionRule sparse_rule);

struct RevealingRuleResult {
    SelectionRule rule;            // explicit indices found so far
    bool budget_exhausted = false;
    std::uint64_t scanned = 0;     // last index examined
};

/// Greedy scan selecting ever-closer approaches to the target measure:
/// picks the next index whose measure is within the current tolerance,
/// then tightens tolerance by `decay`. Stops after `budget` examined
/// indices and reports whether the scan ran out.
RevealingRuleResult revealing_rule(MeasureStream& stream, const Measure& target, double eps0,
                                   double decay, std::uint64_t budget);

}  // namespace iplab
