#include "iplab/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace iplab {

void FreqTracker::update(std::uint32_t outcome) {
    if (outcome >= counts.size()) throw std::invalid_argument("FreqTracker: outcome out of range");
    ++counts[outcome];
    ++n;
}

Measure FreqTracker::relative_frequency() const {
    if (n == 0) throw std::logic_error("FreqTracker: empty");
    Measure m;
    m.w.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) m.w[j] = double(counts[j]) / double(n);
    return m;
}

double FreqTracker::event_frequency(std::uint32_t mask) const {
    if (n == 0) throw std::logic_error("FreqTracker: empty");
    std::uint64_t hits = 0;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (mask & (1u << j)) hits += counts[j];
    return double(hits) / double(n);
}

double gamble_average(const FreqTracker& t, const Gamble& g) {
    if (t.n == 0) throw std::logic_error("gamble_average: empty tracker");
    if (g.k() != t.counts.size()) throw std::invalid_argument("gamble_average: dimension mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < g.k(); ++j) s += double(t.counts[j]) * g.values[j];
    return s / double(t.n);
}

void WalleyFineTracker::push(double value) {
    ++n_;
    if (n_ == 1) {
        full_min_ = full_max_ = value;
    } else {
        if (value < full_min_) full_min_ = value;
        if (value > full_max_) full_max_ = value;
    }
    while (!min_q_.empty() && min_q_.back().v >= value) min_q_.pop_back();
    min_q_.push_back({n_, value});
    while (!max_q_.empty() && max_q_.back().v <= value) max_q_.pop_back();
    max_q_.push_back({n_, value});
    evict(kappa_(n_));
}

void WalleyFineTracker::evict(std::uint64_t window_start) {
    while (!min_q_.empty() && min_q_.front().j < window_start) min_q_.pop_front();
    while (!max_q_.empty() && max_q_.front().j < window_start) max_q_.pop_front();
}

std::pair<double, double> WalleyFineTracker::estimate() const {
    if (n_ == 0) throw std::logic_error("WalleyFineTracker: empty");
    return {min_q_.front().v, max_q_.front().v};
}

void GambleAverageTracker::update(std::uint32_t outcome) {
    if (outcome >= gamble_.k())
        throw std::invalid_argument("GambleAverageTracker: outcome out of range");
    const double y = gamble_.values[outcome] - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
    ++n_;
    wf_.push(sum_ / double(n_));
}

bool apparent_convergence(const std::vector<std::uint16_t>& outcomes, std::size_t k,
                          std::uint32_t event_mask, std::uint64_t k_start, double eps,
                          std::uint64_t n) {
    if (n > outcomes.size()) throw std::invalid_argument("apparent_convergence: n beyond data");
    if (k_start > n) throw std::invalid_argument("apparent_convergence: k > n");
    if (k_start == 0) throw std::invalid_argument("apparent_convergence: k must be >= 1");
    (void)k;
    std::uint64_t hits = 0;
    std::vector<double> rj(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        if (event_mask & (1u << outcomes[j])) ++hits;
        rj[j] = double(hits) / double(j + 1);
    }
    const double rn = rj[n - 1];
    for (std::uint64_t j = k_start; j <= n; ++j)
        if (!(std::abs(rj[j - 1] - rn) < eps)) return false;
    return true;
}

DivergenceReport apparent_divergence(const std::vector<std::uint16_t>& outcomes, std::size_t k,
                                     std::uint64_t k_start, double eps, std::uint64_t n) {
    if (k > 12)
        throw std::invalid_argument(
            "apparent_divergence: exhaustive event enumeration limited to k <= 12");
    if (n > outcomes.size()) throw std::invalid_argument("apparent_divergence: n beyond data");
    if (k_start == 0 || k_start > n)
        throw std::invalid_argument("apparent_divergence: need 1 <= k_start <= n");

    const std::uint32_t num_events = 1u << k;
    // final frequencies per event
    std::vector<std::uint64_t> final_hits(num_events, 0);
    for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint32_t mask = 1; mask + 1 < num_events; ++mask)
            if (mask & (1u << outcomes[j])) ++final_hits[mask];

    DivergenceReport rep;
    rep.events_checked = num_events >= 2 ? num_events - 2 : 0;

    std::vector<std::uint64_t> hits(num_events, 0);
    std::vector<bool> violated(num_events, false);
    for (std::uint64_t j = 1; j <= n; ++j) {
        const std::uint32_t bit = 1u << outcomes[j - 1];
        for (std::uint32_t mask = 1; mask + 1 < num_events; ++mask) {
            if (mask & bit) ++hits[mask];
            if (j >= k_start && !violated[mask]) {
                const double rjm = double(hits[mask]) / double(j);
                const double rnm = double(final_hits[mask]) / double(n);
                if (!(std::abs(rjm - rnm) < eps)) {
                    violated[mask] = true;
                    if (!rep.diverges) {
                        rep.diverges = true;
                        rep.witness_mask = mask;
                    }
                }
            }
        }
    }
    return rep;
}

CloudCollector::CloudCollector(std::uint64_t burn_in, std::uint64_t horizon, std::size_t capacity)
    : burn_in_(burn_in) {
    if (horizon <= burn_in) throw std::invalid_argument("CloudCollector: empty window");
    const std::uint64_t span = horizon - burn_in + 1;
    stride_ = std::max<std::uint64_t>(1, span / capacity);
}

void CloudCollector::push(std::uint64_t j, const Measure& r) {
    if (j < burn_in_) return;
    if ((j - burn_in_) % stride_ == 0) points_.push_back(r);
}

double CloudCollector::hausdorff_to(const Polyline& reference, double sample_spacing) const {
    return hausdorff_cloud_polyline(points_, reference, sample_spacing);
}

}  // namespace iplab
