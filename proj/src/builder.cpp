#include "iplab/builder.hpp"

#include <cassert>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace iplab {

namespace {

std::string double_to_hex(double x) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", x);
    return std::string(buf);
}

double hex_to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

const char* to_string(BuilderPhase p) {
    switch (p) {
        case BuilderPhase::Init: return "init";
        case BuilderPhase::Pair: return "pair-subroutine";
        case BuilderPhase::Grow: return "stay-and-grow";
        case BuilderPhase::Shrink: return "shrink-ball";
    }
    return "?";
}

std::uint64_t SequenceBuilder::block_length(std::size_t k, double delta) {
    const double q = 4.0 * double(k + 1) / delta;
    return static_cast<std::uint64_t>(std::ceil(q)) + 1;
}

std::uint64_t SequenceBuilder::minimal_length(std::uint64_t v, double delta) {
    const double t = 2.0 * double(v) / delta - double(v);
    std::uint64_t l = t <= 1.0 ? 1 : static_cast<std::uint64_t>(std::ceil(t));
    auto ok = [&](std::uint64_t cand) {
        return 2.0 * double(v) / (double(cand) + double(v)) <= delta;
    };
    while (!ok(l)) ++l;
    while (l > 1 && ok(l - 1)) --l;
    return l;
}

SequenceBuilder::SequenceBuilder(CredalSet m, TargetPath path, ToleranceSchedule schedule,
                                 std::optional<KappaFn> slow_window)
    : credal_(std::move(m)),
      path_(std::move(path)),
      schedule_(schedule),
      slow_(slow_window),
      polyline_(induced_polyline(credal_, path_)) {
    schedule_.validate();
    if (credal_.size() == 0) throw std::invalid_argument("SequenceBuilder: empty credal set");
    for (const ConvexWeights& q : path_.waypoints)
        if (q.size() != credal_.size())
            throw std::invalid_argument("SequenceBuilder: waypoint weights do not match credal set");
    sum_.assign(credal_.k(), 0.0);
    comp_.assign(credal_.k(), 0.0);
}

void SequenceBuilder::fold(std::uint32_t member) {
    const Measure& mm = credal_.members[member];
    for (std::size_t j = 0; j < sum_.size(); ++j) {
        const double y = mm.w[j] - comp_[j];
        const double t = sum_[j] + y;
        comp_[j] = (t - sum_[j]) - y;
        sum_[j] = t;
    }
    ++n_;
}

Measure SequenceBuilder::running_average() const {
    if (n_ == 0) throw std::logic_error("running_average: nothing emitted");
    Measure out;
    out.w.resize(sum_.size());
    for (std::size_t j = 0; j < sum_.size(); ++j) out.w[j] = sum_[j] / double(n_);
    return out;
}

ConvexWeights SequenceBuilder::anchor_weights(std::uint64_t iter) const {
    return iter % 2 == 1 ? path_.waypoints.front() : path_.waypoints.back();
}

Measure SequenceBuilder::anchor_point(std::uint64_t iter) const {
    return induce(credal_, anchor_weights(iter));
}

std::vector<Measure> SequenceBuilder::oriented_centers(
    std::uint64_t iter, std::vector<ConvexWeights>* weights_out) const {
    std::vector<ConvexWeights> centers =
        build_cover_chain(credal_, path_, schedule_.eps(iter));
    if (iter % 2 == 0) std::reverse(centers.begin(), centers.end());
    std::vector<Measure> pts;
    pts.reserve(centers.size());
    for (const ConvexWeights& c : centers) pts.push_back(induce(credal_, c));
    if (weights_out) *weights_out = std::move(centers);
    return pts;
}

void SequenceBuilder::enter_iteration(std::uint64_t i) {
    iteration_ = i;
    eps_ = schedule_.eps(i);
    delta_ = schedule_.delta(i, credal_.k());
    zeta_ = schedule_.zeta(i);
    v_ = block_length(credal_.k(), delta_);
    const double delta_next = schedule_.delta(i + 1, credal_.k());
    grow_target_len_ = minimal_length(block_length(credal_.k(), delta_next), delta_next);

    std::vector<ConvexWeights> weights;
    oriented_centers(i, &weights);
    pair_targets_.assign(weights.begin() + 1, weights.end());
    pair_idx_ = 0;
    if (pair_targets_.empty()) {
        setup_grow();
    } else {
        setup_pair(0);
    }
    // Resolve any gaps that are already satisfied by the current average.
    while (gap_complete()) {
        if (phase_ == BuilderPhase::Pair) {
            advance_after_pair();
        } else if (phase_ == BuilderPhase::Grow) {
            setup_shrink();
        } else {  // Shrink
            enter_iteration(iteration_ + 1);
            return;
        }
    }
}

void SequenceBuilder::setup_pair(std::size_t pair_idx) {
    phase_ = BuilderPhase::Pair;
    pair_idx_ = pair_idx;
    block_ = caratheodory_approximate(credal_, pair_targets_[pair_idx], v_);
    block_pos_ = 0;
    gap_target_ = block_.average;
    const double err = distance(induce(credal_, pair_targets_[pair_idx]), gap_target_);
    assert(err < delta_);
    gap_kappa_ = (delta_ - err) / 2.0;
    repeats_done_ = 0;
    entry_repeat_.reset();
}

void SequenceBuilder::setup_grow() {
    phase_ = BuilderPhase::Grow;
    block_ = caratheodory_approximate(credal_, anchor_weights(iteration_ + 1), v_);
    block_pos_ = 0;
    gap_target_ = block_.average;
    gap_kappa_ = 0.0;
    repeats_done_ = 0;
    entry_repeat_.reset();
}

void SequenceBuilder::setup_shrink() {
    phase_ = BuilderPhase::Shrink;
    const double delta_next = schedule_.delta(iteration_ + 1, credal_.k());
    const std::uint64_t v_next = block_length(credal_.k(), delta_next);
    block_ = caratheodory_approximate(credal_, anchor_weights(iteration_ + 1), v_next);
    block_pos_ = 0;
    gap_target_ = block_.average;
    const double err = distance(anchor_point(iteration_ + 1), gap_target_);
    assert(err < delta_next);
    gap_kappa_ = (delta_next - err) / 2.0;
    repeats_done_ = 0;
    entry_repeat_.reset();
}

bool SequenceBuilder::gap_complete() {
    if (n_ == 0) return false;
    if (phase_ == BuilderPhase::Grow) return n_ >= grow_target_len_;
    const bool in_ball = distance(running_average(), gap_target_) < gap_kappa_;
    if (!in_ball) {
        entry_repeat_.reset();
        return false;
    }
    if (!entry_repeat_) entry_repeat_ = repeats_done_;
    if (!slow_ || *entry_repeat_ == 0) return true;
    return (*slow_)(repeats_done_) >= *entry_repeat_;
}

void SequenceBuilder::advance_after_pair() {
    if (pair_idx_ + 1 < pair_targets_.size()) {
        setup_pair(pair_idx_ + 1);
    } else {
        setup_grow();
    }
}

void SequenceBuilder::on_block_boundary() {
    ++repeats_done_;
    while (gap_complete()) {
        if (phase_ == BuilderPhase::Pair) {
            advance_after_pair();
        } else if (phase_ == BuilderPhase::Grow) {
            setup_shrink();
        } else {
            enter_iteration(iteration_ + 1);
            return;
        }
    }
    if (block_pos_ >= block_.length()) block_pos_ = 0;  // re-append the same block
}

std::uint32_t SequenceBuilder::next_index() {
    if (phase_ == BuilderPhase::Init) {
        fold(0);
        enter_iteration(1);
        return 0;
    }
    const std::uint32_t member = block_.entries[block_pos_++];
    fold(member);
    if (block_pos_ >= block_.length()) on_block_boundary();
    return member;
}

const Measure& SequenceBuilder::next_measure() { return credal_.members[next_index()]; }

nlohmann::json SequenceBuilder::snapshot() const {
    nlohmann::json j;
    j["version"] = 1;
    nlohmann::json members = nlohmann::json::array();
    for (const Measure& m : credal_.members) members.push_back(m.w);
    j["credal_set"] = members;
    nlohmann::json wps = nlohmann::json::array();
    for (const ConvexWeights& w : path_.waypoints) wps.push_back(w.lambda);
    j["target_path"] = wps;
    j["schedule"] = {{"eps_decay", schedule_.eps_decay},
                     {"delta_decay", schedule_.delta_decay},
                     {"zeta0", schedule_.zeta0},
                     {"zeta_decay", schedule_.zeta_decay}};
    if (slow_) j["slow_window"] = slow_->name();
    j["iteration"] = iteration_;
    j["n"] = n_;
    nlohmann::json sums = nlohmann::json::array(), comps = nlohmann::json::array();
    for (double s : sum_) sums.push_back(double_to_hex(s));
    for (double c : comp_) comps.push_back(double_to_hex(c));
    j["running_sum"] = sums;
    j["running_comp"] = comps;
    j["phase"] = to_string(phase_);
    j["cursor"] = {{"pair_index", pair_idx_},
                   {"block_pos", block_pos_},
                   {"repeats_done", repeats_done_},
                   {"entry_repeat",
                    entry_repeat_ ? nlohmann::json(*entry_repeat_) : nlohmann::json(nullptr)}};
    return j;
}

SequenceBuilder SequenceBuilder::restore(const nlohmann::json& snap) {
    if (!snap.contains("version") || snap["version"].get<int>() != 1)
        throw std::invalid_argument("snapshot: unsupported version");
    std::vector<Measure> members;
    for (const auto& row : snap.at("credal_set"))
        members.push_back(make_measure(row.get<std::vector<double>>()));
    CredalSet credal = make_credal_set(std::move(members));
    std::vector<ConvexWeights> wps;
    for (const auto& row : snap.at("target_path"))
        wps.push_back(make_convex_weights(row.get<std::vector<double>>(), credal.size()));
    TargetPath path = make_target_path(credal, std::move(wps));
    ToleranceSchedule sched;
    sched.eps_decay = snap.at("schedule").at("eps_decay").get<double>();
    sched.delta_decay = snap.at("schedule").at("delta_decay").get<double>();
    sched.zeta0 = snap.at("schedule").at("zeta0").get<double>();
    sched.zeta_decay = snap.at("schedule").at("zeta_decay").get<double>();
    std::optional<KappaFn> slow;
    if (snap.contains("slow_window")) {
        const std::string name = snap["slow_window"].get<std::string>();
        KappaFn kf;
        kf.kind = name == "identity" ? KappaFn::Kind::Identity : KappaFn::Kind::Sqrt;
        slow = kf;
    }

    SequenceBuilder b(std::move(credal), std::move(path), sched, slow);
    const auto n = snap.at("n").get<std::uint64_t>();
    if (n == 0) return b;

    b.n_ = n;
    for (std::size_t j = 0; j < b.sum_.size(); ++j) {
        b.sum_[j] = hex_to_double(snap.at("running_sum")[j].get<std::string>());
        b.comp_[j] = hex_to_double(snap.at("running_comp")[j].get<std::string>());
    }
    const auto iter = snap.at("iteration").get<std::uint64_t>();
    b.iteration_ = iter;
    b.eps_ = b.schedule_.eps(iter);
    b.delta_ = b.schedule_.delta(iter, b.credal_.k());
    b.zeta_ = b.schedule_.zeta(iter);
    b.v_ = block_length(b.credal_.k(), b.delta_);
    const double delta_next = b.schedule_.delta(iter + 1, b.credal_.k());
    b.grow_target_len_ = minimal_length(block_length(b.credal_.k(), delta_next), delta_next);
    std::vector<ConvexWeights> weights;
    b.oriented_centers(iter, &weights);
    b.pair_targets_.assign(weights.begin() + 1, weights.end());

    const std::string phase = snap.at("phase").get<std::string>();
    const auto& cursor = snap.at("cursor");
    const auto pair_idx = cursor.at("pair_index").get<std::size_t>();
    if (phase == "pair-subroutine") {
        b.setup_pair(pair_idx);
    } else if (phase == "stay-and-grow") {
        b.setup_grow();
    } else if (phase == "shrink-ball") {
        b.setup_shrink();
    } else {
        throw std::invalid_argument("snapshot: unknown phase " + phase);
    }
    b.block_pos_ = cursor.at("block_pos").get<std::size_t>();
    b.repeats_done_ = cursor.at("repeats_done").get<std::uint64_t>();
    if (!cursor.at("entry_repeat").is_null())
        b.entry_repeat_ = cursor.at("entry_repeat").get<std::uint64_t>();
    else
        b.entry_repeat_.reset();
    return b;
}

EmittedSequence emit(SequenceBuilder& b, std::uint64_t n) {
    EmittedSequence out;
    out.indices.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.indices.push_back(b.next_index());
    return out;
}

}  // namespace iplab
