#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "iplab/builder.hpp"
#include "iplab/simplex.hpp"

namespace iplab {

/// Key of the counter-based pseudorandom stream. Identical seeds give
/// bit-identical outcome sequences on every platform.
struct Seed {
    std::uint64_t value = 0;
};

/// Counter-based uniform variate in [0,1) at a 1-based index: splitmix64
/// finalizer applied to seed + index * golden gamma. Random access makes
/// sampling prefix-stable and shardable across index ranges.
double uniform_at(Seed seed, std::uint64_t index);

/// Inverse-CDF draw: smallest outcome j with u < cumulative weight up to j.
/// Intervals are left-closed; boundary ties resolve to the lowest index
/// whose interval has positive width.
std::uint32_t draw_outcome(const Measure& m, double u);

/// Lazy sequence of per-step measures. Indices are 1-based. Sequential
/// implementations require nondecreasing access; clone() restarts from the
/// beginning.
class MeasureStream {
public:
    virtual ~MeasureStream() = default;
    virtual std::size_t k() const = 0;
    virtual Measure at(std::uint64_t i) = 0;
    virtual bool random_access() const = 0;
    virtual std::unique_ptr<MeasureStream> clone() const = 0;
    virtual std::string describe() const = 0;
};

std::unique_ptr<MeasureStream> constant_stream(Measure m);
/// Cycles through the given measures: step i uses measures[(i-1) % size].
std::unique_ptr<MeasureStream> cycle_stream(std::vector<Measure> measures);
/// Two-coin stream keyed on the second most significant bit of the step
/// index: bit 0 (and index 1) uses the first coin, bit 1 the second.
/// Defaults to heads probabilities 1/3 and 2/3 with outcome 0 = heads.
std::unique_ptr<MeasureStream> weird_coin_stream(double heads_low = 1.0 / 3.0,
                                                 double heads_high = 2.0 / 3.0);
/// Stream backed by a materialized index sequence over a credal set.
std::unique_ptr<MeasureStream> materialized_stream(CredalSet m, std::vector<std::uint32_t> indices,
                                                   std::string description);
/// Sequential stream that emits from a sequence builder on demand.
std::unique_ptr<MeasureStream> builder_stream(CredalSet m, TargetPath path,
                                              ToleranceSchedule schedule,
                                              std::optional<KappaFn> slow_window,
                                              std::string description);

struct OutcomeSequence {
    std::uint32_t k = 0;
    Seed seed;
    std::string stream_desc;
    std::vector<std::uint16_t> outcomes;

    std::size_t size() const { return outcomes.size(); }
};

/// Independent draws, step i from stream measure m_i, via the counter
/// stream keyed by seed. sample(s, seed, n) is a prefix of
/// sample(s, seed, n+1).
OutcomeSequence sample(MeasureStream& stream, Seed seed, std::uint64_t n);

/// CSV dump (index, outcome) with the versioned schema header.
void write_outcomes_csv(const OutcomeSequence& seq, const std::string& path);
/// Companion CSV (index, weights...) for a materialized measure prefix.
void write_measures_csv(MeasureStream& stream, std::uint64_t n, const std::string& path);

}  // namespace iplab
