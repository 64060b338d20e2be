#include "iplab/generator.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "iplab/io.hpp"

namespace iplab {

double uniform_at(Seed seed, std::uint64_t index) {
    std::uint64_t z = seed.value + index * 0x9E3779B97F4A7C15ULL;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-53;
}

std::uint32_t draw_outcome(const Measure& m, double u) {
    double cum = 0.0;
    const std::size_t k = m.k();
    for (std::size_t j = 0; j + 1 < k; ++j) {
        cum += m.w[j];
        if (u < cum) return static_cast<std::uint32_t>(j);
    }
    return static_cast<std::uint32_t>(k - 1);
}

namespace {

class ConstantStream final : public MeasureStream {
public:
    explicit ConstantStream(Measure m) : m_(std::move(m)) {}
    std::size_t k() const override { return m_.k(); }
    Measure at(std::uint64_t) override { return m_; }
    bool random_access() const override { return true; }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<ConstantStream>(m_);
    }
    std::string describe() const override { return "constant"; }

private:
    Measure m_;
};

class CycleStream final : public MeasureStream {
public:
    explicit CycleStream(std::vector<Measure> ms) : ms_(std::move(ms)) {
        if (ms_.empty()) throw std::invalid_argument("cycle_stream: empty measure list");
        for (const Measure& m : ms_)
            if (m.k() != ms_.front().k())
                throw std::invalid_argument("cycle_stream: inconsistent outcome counts");
    }
    std::size_t k() const override { return ms_.front().k(); }
    Measure at(std::uint64_t i) override {
        if (i == 0) throw std::invalid_argument("MeasureStream: indices are 1-based");
        return ms_[(i - 1) % ms_.size()];
    }
    bool random_access() const override { return true; }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<CycleStream>(ms_);
    }
    std::string describe() const override {
        return "cycle:" + std::to_string(ms_.size());
    }

private:
    std::vector<Measure> ms_;
};

class WeirdCoinStream final : public MeasureStream {
public:
    WeirdCoinStream(double low, double high)
        : low_(make_measure({low, 1.0 - low})), high_(make_measure({high, 1.0 - high})) {}
    std::size_t k() const override { return 2; }
    Measure at(std::uint64_t i) override {
        if (i == 0) throw std::invalid_argument("MeasureStream: indices are 1-based");
        if (i == 1) return low_;  // single binary digit: no second bit
        const int msb = std::bit_width(i) - 1;
        const bool second_bit = (i >> (msb - 1)) & 1ULL;
        return second_bit ? high_ : low_;
    }
    bool random_access() const override { return true; }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<WeirdCoinStream>(low_.w[0], high_.w[0]);
    }
    std::string describe() const override { return "weird-coin"; }

private:
    Measure low_, high_;
};

class MaterializedStream final : public MeasureStream {
public:
    MaterializedStream(CredalSet m, std::vector<std::uint32_t> idx, std::string desc)
        : m_(std::move(m)), idx_(std::move(idx)), desc_(std::move(desc)) {}
    std::size_t k() const override { return m_.k(); }
    Measure at(std::uint64_t i) override {
        if (i == 0 || i > idx_.size())
            throw std::out_of_range("materialized_stream: index outside stored prefix");
        return m_.members[idx_[i - 1]];
    }
    bool random_access() const override { return true; }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<MaterializedStream>(m_, idx_, desc_);
    }
    std::string describe() const override { return desc_; }

private:
    CredalSet m_;
    std::vector<std::uint32_t> idx_;
    std::string desc_;
};

class BuilderStream final : public MeasureStream {
public:
    BuilderStream(CredalSet m, TargetPath path, ToleranceSchedule schedule,
                  std::optional<KappaFn> slow, std::string desc)
        : config_m_(m),
          config_path_(path),
          config_schedule_(schedule),
          config_slow_(slow),
          builder_(std::move(m), std::move(path), schedule, slow),
          desc_(std::move(desc)) {}
    std::size_t k() const override { return builder_.credal_set().k(); }
    Measure at(std::uint64_t i) override {
        if (i <= last_) throw std::logic_error("builder_stream: access must be increasing");
        Measure out;
        while (last_ < i) {
            out = builder_.next_measure();
            ++last_;
        }
        return out;
    }
    bool random_access() const override { return false; }
    std::unique_ptr<MeasureStream> clone() const override {
        return std::make_unique<BuilderStream>(config_m_, config_path_, config_schedule_,
                                               config_slow_, desc_);
    }
    std::string describe() const override { return desc_; }

private:
    CredalSet config_m_;
    TargetPath config_path_;
    ToleranceSchedule config_schedule_;
    std::optional<KappaFn> config_slow_;
    SequenceBuilder builder_;
    std::uint64_t last_ = 0;
};

}  // namespace

std::unique_ptr<MeasureStream> constant_stream(Measure m) {
    return std::make_unique<ConstantStream>(std::move(m));
}

std::unique_ptr<MeasureStream> cycle_stream(std::vector<Measure> measures) {
    return std::make_unique<CycleStream>(std::move(measures));
}

std::unique_ptr<MeasureStream> weird_coin_stream(double heads_low, double heads_high) {
    return std::make_unique<WeirdCoinStream>(heads_low, heads_high);
}

std::unique_ptr<MeasureStream> materialized_stream(CredalSet m, std::vector<std::uint32_t> indices,
                                                   std::string description) {
    return std::make_unique<MaterializedStream>(std::move(m), std::move(indices),
                                                std::move(description));
}

std::unique_ptr<MeasureStream> builder_stream(CredalSet m, TargetPath path,
                                              ToleranceSchedule schedule,
                                              std::optional<KappaFn> slow_window,
                                              std::string description) {
    return std::make_unique<BuilderStream>(std::move(m), std::move(path), schedule, slow_window,
                                           std::move(description));
}

OutcomeSequence sample(MeasureStream& stream, Seed seed, std::uint64_t n) {
    OutcomeSequence seq;
    seq.k = static_cast<std::uint32_t>(stream.k());
    seq.seed = seed;
    seq.stream_desc = stream.describe();
    seq.outcomes.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) {
        const Measure m = stream.at(i);
        seq.outcomes.push_back(
            static_cast<std::uint16_t>(draw_outcome(m, uniform_at(seed, i))));
    }
    return seq;
}

void write_outcomes_csv(const OutcomeSequence& seq, const std::string& path) {
    CsvWriter csv(path);
    csv.row("index", "outcome");
    for (std::size_t i = 0; i < seq.outcomes.size(); ++i)
        csv.row(i + 1, static_cast<unsigned>(seq.outcomes[i]));
}

void write_measures_csv(MeasureStream& stream, std::uint64_t n, const std::string& path) {
    CsvWriter csv(path);
    std::vector<std::string> header{"index"};
    for (std::size_t j = 0; j < stream.k(); ++j) header.push_back("w" + std::to_string(j));
    csv.row_vec(header);
    for (std::uint64_t i = 1; i <= n; ++i) {
        const Measure m = stream.at(i);
        std::vector<std::string> row{std::to_string(i)};
        for (double x : m.w) row.push_back(format_double(x));
        csv.row_vec(row);
    }
}

}  // namespace iplab
