#include "iplab/selection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace iplab {

bool SelectionRule::selects(std::uint64_t i) const {
    switch (kind) {
        case Kind::Modular:
            return i % a == b;
        case Kind::Bit:
            return ((i >> a) & 1ULL) == b;
        case Kind::Explicit:
            return std::binary_search(indices.begin(), indices.end(), i);
        case Kind::Squares: {
            const auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(double(i))));
            for (std::uint64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
                if (c * c == i) return true;
            return false;
        }
    }
    return false;
}

std::uint64_t SelectionRule::count_leq(std::uint64_t n) const {
    switch (kind) {
        case Kind::Modular: {
            if (n == 0) return 0;
            // count of i in [1, n] with i % a == b
            std::uint64_t c = n / a;
            const std::uint64_t rem = n % a;
            if (b != 0 && b <= rem) ++c;
            if (b == 0) return c;  // multiples of a in [1, n]
            return c;
        }
        case Kind::Bit: {
            // Full periods of length 2^(a+1) over [0, n] contribute half
            // each; the remainder is counted directly. i = 0 is not a
            // valid index, so drop it again when a full period covered it.
            const std::uint64_t period = 2ULL << a;
            const std::uint64_t half = 1ULL << a;
            const std::uint64_t full = (n + 1) / period;
            std::uint64_t c = full * half;
            const std::uint64_t rest_start = full * period;
            for (std::uint64_t i = std::max<std::uint64_t>(rest_start, 1); i <= n; ++i)
                if (((i >> a) & 1ULL) == b) ++c;
            if (b == 0 && full >= 1) --c;
            return c;
        }
        case Kind::Explicit:
            return static_cast<std::uint64_t>(
                std::upper_bound(indices.begin(), indices.end(), n) - indices.begin());
        case Kind::Squares: {
            auto r = static_cast<std::uint64_t>(std::floor(std::sqrt(double(n))));
            while ((r + 1) * (r + 1) <= n) ++r;
            while (r > 0 && r * r > n) --r;
            return r;
        }
    }
    return 0;
}

std::optional<double> SelectionRule::period_density() const {
    switch (kind) {
        case Kind::Modular:
            return 1.0 / double(a);
        case Kind::Bit:
            return 0.5;
        case Kind::Explicit:
        case Kind::Squares:
            return std::nullopt;  // vanishing density
    }
    return std::nullopt;
}

SelectionRule SelectionRule::all() { return modular(1, 0); }

SelectionRule SelectionRule::modular(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b >= a) throw std::invalid_argument("SelectionRule: need 0 <= b < a, a >= 1");
    SelectionRule r;
    r.kind = Kind::Modular;
    r.a = a;
    r.b = b;
    r.description = "mod:" + std::to_string(a) + "," + std::to_string(b);
    return r;
}

SelectionRule SelectionRule::bit(std::uint64_t pos, std::uint64_t val) {
    if (pos >= 63 || val > 1) throw std::invalid_argument("SelectionRule: bad bit rule");
    SelectionRule r;
    r.kind = Kind::Bit;
    r.a = pos;
    r.b = val;
    r.description = "bit:" + std::to_string(pos) + "," + std::to_string(val);
    return r;
}

SelectionRule SelectionRule::explicit_indices(std::vector<std::uint64_t> sorted) {
    SelectionRule r;
    r.kind = Kind::Explicit;
    r.indices = std::move(sorted);
    if (!std::is_sorted(r.indices.begin(), r.indices.end()))
        std::sort(r.indices.begin(), r.indices.end());
    r.description = "explicit:" + std::to_string(r.indices.size()) + "-indices";
    return r;
}

SelectionRule SelectionRule::squares() {
    SelectionRule r;
    r.kind = Kind::Squares;
    r.description = "squares";
    return r;
}

SelectionRule SelectionRule::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (head == "squares") return squares();
    if (head == "all") return all();
    if (colon == std::string::npos)
        throw std::invalid_argument("SelectionRule: cannot parse '" + spec + "'");
    const std::string rest = spec.substr(colon + 1);
    auto parse_two = [&](const std::string& s) {
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("SelectionRule: expected two parameters in '" + spec + "'");
        return std::pair<std::uint64_t, std::uint64_t>{std::stoull(s.substr(0, comma)),
                                                       std::stoull(s.substr(comma + 1))};
    };
    if (head == "mod") {
        auto [a, b] = parse_two(rest);
        return modular(a, b);
    }
    if (head == "bit") {
        auto [pos, val] = parse_two(rest);
        return bit(pos, val);
    }
    if (head == "explicit") {
        std::ifstream in(rest);
        if (!in) throw std::invalid_argument("SelectionRule: cannot read index file " + rest);
        std::vector<std::uint64_t> idx;
        std::uint64_t v;
        while (in >> v) idx.push_back(v);
        return explicit_indices(std::move(idx));
    }
    throw std::invalid_argument("SelectionRule: unknown kind '" + head + "'");
}

void SubseqTracker::update(std::uint32_t outcome) {
    if (outcome >= counts.size()) throw std::invalid_argument("SubseqTracker: outcome out of range");
    ++total_n;
    if (rule.selects(total_n)) {
        ++counts[outcome];
        ++selected_n;
    }
}

Measure SubseqTracker::selected_freq() const {
    if (selected_n == 0) throw std::logic_error("SubseqTracker: no index selected yet");
    Measure m;
    m.w.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) m.w[j] = double(counts[j]) / double(selected_n);
    return m;
}

Measure theoretical_mean(MeasureStream& stream, const SelectionRule& rule, std::uint64_t n) {
    Measure sum;
    sum.w.assign(stream.k(), 0.0);
    std::uint64_t selected = 0;
    for (std::uint64_t i = 1; i <= n; ++i) {
        if (stream.random_access() && !rule.selects(i)) continue;
        const Measure m = stream.at(i);
        if (!stream.random_access() && !rule.selects(i)) continue;
        for (std::size_t j = 0; j < sum.w.size(); ++j) sum.w[j] += m.w[j];
        ++selected;
    }
    if (selected == 0) throw std::logic_error("theoretical_mean: nothing selected");
    for (double& x : sum.w) x /= double(selected);
    return sum;
}

double fierens_fine_bound(std::size_t k, std::size_t num_rules, double eps, std::uint64_t m,
                          std::uint64_t n) {
    if (m == 0 || m > n) throw std::invalid_argument("fierens_fine_bound: need 0 < m <= n");
    if (!(eps > 0.0)) throw std::invalid_argument("fierens_fine_bound: eps must be positive");
    return 2.0 * double(k) * double(num_rules) *
           std::exp(-eps * eps * double(m) * double(m) / (2.0 * double(n)));
}

ConcentrationResult check_concentration(MeasureStream& stream,
                                        const std::vector<SelectionRule>& rules, std::uint64_t n,
                                        std::uint64_t m, double eps, std::uint64_t trials,
                                        Seed base_seed) {
    ConcentrationResult res;
    res.bound = fierens_fine_bound(stream.k(), rules.size(), eps, m, n);
    res.trials = trials;

    // Per-rule theoretical means and selection masks are trial-independent.
    std::vector<Measure> mu;
    std::vector<std::uint64_t> sel_count(rules.size(), 0);
    std::vector<std::uint16_t> rule_mask(n, 0);
    if (rules.size() > 16) throw std::invalid_argument("check_concentration: at most 16 rules");
    {
        std::unique_ptr<MeasureStream> walk = stream.clone();
        std::vector<Measure> sums(rules.size());
        for (auto& s : sums) s.w.assign(stream.k(), 0.0);
        for (std::uint64_t i = 1; i <= n; ++i) {
            const Measure mi = walk->at(i);
            for (std::size_t r = 0; r < rules.size(); ++r) {
                if (!rules[r].selects(i)) continue;
                rule_mask[i - 1] |= static_cast<std::uint16_t>(1u << r);
                ++sel_count[r];
                for (std::size_t j = 0; j < mi.k(); ++j) sums[r].w[j] += mi.w[j];
            }
        }
        for (std::size_t r = 0; r < rules.size(); ++r) {
            if (sel_count[r] > 0)
                for (double& x : sums[r].w) x /= double(sel_count[r]);
            mu.push_back(std::move(sums[r]));
        }
    }

    // Materialize the per-step measures once for fast trial loops.
    std::vector<Measure> steps;
    steps.reserve(n);
    {
        std::unique_ptr<MeasureStream> walk = stream.clone();
        for (std::uint64_t i = 1; i <= n; ++i) steps.push_back(walk->at(i));
    }

    std::uint64_t violations = 0;
    std::vector<std::vector<std::uint64_t>> counts(rules.size(),
                                                   std::vector<std::uint64_t>(stream.k(), 0));
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (auto& c : counts) std::fill(c.begin(), c.end(), 0);
        const Seed seed{base_seed.value + t};
        for (std::uint64_t i = 1; i <= n; ++i) {
            const std::uint32_t o = draw_outcome(steps[i - 1], uniform_at(seed, i));
            std::uint16_t mask = rule_mask[i - 1];
            while (mask) {
                const int r = std::countr_zero(mask);
                ++counts[r][o];
                mask = static_cast<std::uint16_t>(mask & (mask - 1));
            }
        }
        bool violated = false;
        for (std::size_t r = 0; r < rules.size() && !violated; ++r) {
            if (sel_count[r] < m) continue;
            double dev = 0.0;
            for (std::size_t j = 0; j < stream.k(); ++j)
                dev = std::max(dev,
                               std::abs(double(counts[r][j]) / double(sel_count[r]) - mu[r].w[j]));
            violated = dev >= eps;
        }
        if (violated) ++violations;
    }
    res.empirical = double(violations) / double(trials);
    res.std_error = std::sqrt(res.empirical * (1.0 - res.empirical) / double(trials));
    return res;
}

namespace {

class InterleaveStream final : public MeasureStream {
public:
    InterleaveStream(std::unique_ptr<MeasureStream> base, CredalSet m, SelectionRule rule)
        : base_(std::move(base)), m_(std::move(m)), rule_(std::move(rule)) {
        if (m_.k() != base_->k())
            throw std::invalid_argument("interleave_cover: outcome count mismatch");
    }
    std::size_t k() const override { return m_.k(); }
    Measure at(std::uint64_t i) override {
        if (i == 0) throw std::invalid_argument("MeasureStream: indices are 1-based");
        const std::uint64_t sel = rule_.count_leq(i);
        if (rule_.selects(i)) return m_.members[(sel - 1) % m_.size()];
        return base_->at(i - sel);
    }
    bool random_access() const override { return base_->random_access(); }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<InterleaveStream>(base_->clone(), m_, rule_);
    }
    std::string describe() const override {
        return "interleave(" + base_->describe() + "," + rule_.description + ")";
    }

private:
    std::unique_ptr<MeasureStream> base_;
    CredalSet m_;
    SelectionRule rule_;
};

}  // namespace

std::unique_ptr<MeasureStream> interleave_cover(std::unique_ptr<MeasureStream> base, CredalSet m,
                                                SelectionRule sparse_rule) {
    if (auto density = sparse_rule.period_density(); density && *density > 0.0)
        throw std::invalid_argument("interleave_cover: rule has positive density " +
                                    std::to_string(*density));
    return std::make_unique<InterleaveStream>(std::move(base), std::move(m),
                                              std::move(sparse_rule));
}

std::vector<Measure> estimate_m_hat(const std::vector<SubseqTracker>& trackers, std::uint64_t m) {
    std::vector<Measure> out;
    for (const SubseqTracker& t : trackers)
        if (t.selected_n >= m && t.selected_n > 0) out.push_back(t.selected_freq());
    return out;
}

RevealingRuleResult revealing_rule(MeasureStream& stream, const Measure& target, double eps0,
                                   double decay, std::uint64_t budget) {
    if (!(eps0 > 0.0) || !(decay > 0.0 && decay < 1.0))
        throw std::invalid_argument("revealing_rule: need eps0 > 0 and decay in (0,1)");
    RevealingRuleResult res;
    std::vector<std::uint64_t> picked;
    double eps = eps0;
    std::uint64_t i = 0;
    while (i < budget) {
        ++i;
        if (distance(stream.at(i), target) < eps) {
            picked.push_back(i);
            eps *= decay;
        }
    }
    res.scanned = i;
    // The greedy scan wants a pick at every tolerance level forever; it ran
    // out when nothing qualified at the current tolerance for the latter
    // half of the scan. That separates non-cluster-point targets (picks
    // stall once the tolerance drops below the gap) from slow streams.
    res.budget_exhausted = picked.empty() || picked.back() <= budget / 2;
    res.rule = SelectionRule::explicit_indices(std::move(picked));
    return res;
}

}  // namespace iplab
