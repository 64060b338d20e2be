#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "iplab/schedule.hpp"
#include "iplab/simplex.hpp"

// Streaming analytics over outcome sequences: relative frequencies, gamble
// averages, the windowed min/max estimator over prefix averages, apparent
// convergence/divergence events, and tail clouds of prefix frequencies.

namespace iplab {

/// Outcome counts and the induced empirical measure r_n.
struct FreqTracker {
    std::vector<std::uint64_t> counts;
    std::uint64_t n = 0;

    explicit FreqTracker(std::size_t k) : counts(k, 0) {}

    void update(std::uint32_t outcome);
    Measure relative_frequency() const;
    /// r_n(A) for an event given as an outcome bitmask.
    double event_frequency(std::uint32_t mask) const;
};

/// Expectation of the gamble under r_n; identical to the running mean of
/// the gamble values along the sequence.
double gamble_average(const FreqTracker& t, const Gamble& g);

/// Windowed extrema of a scalar prefix-average series: after push(a_n),
/// estimate() returns (min, max) of a_j over j in [kappa(n), n], amortized
/// O(1) per update via monotone deques. Also keeps full-history extrema.
class WalleyFineTracker {
public:
    explicit WalleyFineTracker(KappaFn kappa) : kappa_(kappa) {}

    void push(double value);
    std::uint64_t n() const { return n_; }
    std::pair<double, double> estimate() const;
    double full_min() const { return full_min_; }
    double full_max() const { return full_max_; }

private:
    struct Entry {
        std::uint64_t j;
        double v;
    };
    void evict(std::uint64_t window_start);

    KappaFn kappa_;
    std::uint64_t n_ = 0;
    std::deque<Entry> min_q_, max_q_;
    double full_min_ = 0.0, full_max_ = 0.0;
};

/// Tracks the gamble's prefix averages and feeds them to the windowed
/// estimator.
class GambleAverageTracker {
public:
    GambleAverageTracker(Gamble g, KappaFn kappa) : gamble_(std::move(g)), wf_(kappa) {}

    void update(std::uint32_t outcome);
    double average() const { return n_ ? sum_ / double(n_) : 0.0; }
    std::uint64_t n() const { return n_; }
    std::pair<double, double> wf_estimate() const { return wf_.estimate(); }
    const WalleyFineTracker& window() const { return wf_; }

private:
    Gamble gamble_;
    WalleyFineTracker wf_;
    double sum_ = 0.0, comp_ = 0.0;
    std::uint64_t n_ = 0;
};

/// True iff |r_j(A) - r_n(A)| < eps for every j in [k_start, n].
bool apparent_convergence(const std::vector<std::uint16_t>& outcomes, std::size_t k,
                          std::uint32_t event_mask, std::uint64_t k_start, double eps,
                          std::uint64_t n);

struct DivergenceReport {
    bool diverges = false;              // some event breaks apparent convergence
    std::uint32_t witness_mask = 0;     // an event that does, when diverges
    std::uint64_t events_checked = 0;
};

/// Apparent divergence over all nontrivial events (outcome count <= 12).
DivergenceReport apparent_divergence(const std::vector<std::uint16_t>& outcomes, std::size_t k,
                                     std::uint64_t k_start, double eps, std::uint64_t n);

/// Accumulates prefix frequencies r_j for j >= burn_in, subsampled so at
/// most `capacity` points are kept (stride chosen from the horizon).
class CloudCollector {
public:
    CloudCollector(std::uint64_t burn_in, std::uint64_t horizon, std::size_t capacity = 10000);

    void push(std::uint64_t j, const Measure& r);
    const std::vector<Measure>& points() const { return points_; }
    double hausdorff_to(const Polyline& reference, double sample_spacing = 1e-3) const;

private:
    std::uint64_t burn_in_, stride_;
    std::vector<Measure> points_;
};

}  // namespace iplab
