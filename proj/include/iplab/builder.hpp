#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "iplab/schedule.hpp"
#include "iplab/simplex.hpp"

// Lazily constructs a sequence of credal-set members whose Cesaro averages
// have the induced target polyline as their exact set of cluster points.
//
// The construction runs in iterations i = 1, 2, ... with tolerances
// (eps_i, delta_i, zeta_i). Each iteration walks an eps_i-cover of the
// target, one pair at a time: a pair step repeatedly appends a length-v_i
// approximation block of the next center until the running average enters
// a ball of radius kappa < delta_i around the block average. Consecutive
// iterations walk the cover in alternating directions, so each iteration
// starts where the previous one ended and no bridging chain is needed.
// After the cover walk, stay-and-grow padding extends the sequence to the
// next iteration's minimum length, and a shrink step tightens the average
// into the delta_{i+1}-ball around the next starting center.

namespace iplab {

enum class BuilderPhase : std::uint8_t { Init, Pair, Grow, Shrink };

const char* to_string(BuilderPhase p);

class SequenceBuilder {
public:
    /// When set, the pair and shrink steps keep appending until the whole
    /// block-repeat window [kappa_fn(r), r] has stayed inside the target
    /// ball, which makes the windowed min/max estimator inherit the full
    /// cluster set.
    SequenceBuilder(CredalSet m, TargetPath path, ToleranceSchedule schedule,
                    std::optional<KappaFn> slow_window = std::nullopt);

    /// Emits the next member index of the sequence.
    std::uint32_t next_index();
    /// Emits the next measure (the member at next_index()).
    const Measure& next_measure();

    const CredalSet& credal_set() const { return credal_; }
    const Polyline& target() const { return polyline_; }
    std::uint64_t emitted() const { return n_; }
    std::uint64_t iteration() const { return iteration_; }
    BuilderPhase phase() const { return phase_; }
    double eps_i() const { return eps_; }
    double delta_i() const { return delta_; }
    double zeta_i() const { return zeta_; }
    std::uint64_t v_i() const { return v_; }
    /// Proof-side excursion bound for the current iteration:
    /// every running average stays within eps_i + 2 delta_i + zeta_i of
    /// the target set.
    double excursion_bound() const { return eps_ + 2.0 * delta_ + zeta_; }
    /// Running Cesaro average of everything emitted so far.
    Measure running_average() const;

    /// Minimal length l with 2v/(l+v) <= delta, as used for the grow step.
    static std::uint64_t minimal_length(std::uint64_t v, double delta);
    /// Block length ceil(4(k+1)/delta) + 1 used at a given iteration.
    static std::uint64_t block_length(std::size_t k, double delta);

    /// Versioned JSON snapshot; restore() resumes bit-exactly.
    nlohmann::json snapshot() const;
    static SequenceBuilder restore(const nlohmann::json& snap);

private:
    void fold(std::uint32_t member);
    void enter_iteration(std::uint64_t i);
    void setup_pair(std::size_t pair_idx);
    void setup_grow();
    void setup_shrink();
    void on_block_boundary();
    void advance_after_pair();
    bool gap_complete();
    std::vector<Measure> oriented_centers(std::uint64_t iter, std::vector<ConvexWeights>* weights_out) const;
    Measure anchor_point(std::uint64_t iter) const;
    ConvexWeights anchor_weights(std::uint64_t iter) const;

    CredalSet credal_;
    TargetPath path_;
    ToleranceSchedule schedule_;
    std::optional<KappaFn> slow_;
    Polyline polyline_;

    std::uint64_t n_ = 0;
    std::uint64_t iteration_ = 0;
    double eps_ = 0.0, delta_ = 0.0, zeta_ = 0.0;
    std::uint64_t v_ = 0;
    std::uint64_t grow_target_len_ = 0;

    std::vector<double> sum_;   // Kahan-compensated running weight sums
    std::vector<double> comp_;

    BuilderPhase phase_ = BuilderPhase::Init;
    std::vector<ConvexWeights> pair_targets_;  // centers 2..o of the oriented cover
    std::size_t pair_idx_ = 0;

    FiniteBlock block_;          // block currently being appended
    std::size_t block_pos_ = 0;
    Measure gap_target_;         // block average the gap is converging to
    double gap_kappa_ = 0.0;
    std::uint64_t repeats_done_ = 0;
    std::optional<std::uint64_t> entry_repeat_;  // first repeat inside the ball
};

/// Materialized emission run: member indices plus the exact final average.
struct EmittedSequence {
    std::vector<std::uint32_t> indices;
};

EmittedSequence emit(SequenceBuilder& b, std::uint64_t n);

}  // namespace iplab
