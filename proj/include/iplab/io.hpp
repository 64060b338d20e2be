#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iplab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;

/// Shortest round-trip decimal form of a double, locale-independent.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char cand[40];
        std::snprintf(cand, sizeof(cand), "%.*g", prec, x);
        if (std::strtod(cand, nullptr) == x) return std::string(cand);
    }
    return std::string(buf);
}

/// Line-oriented CSV writer with the versioned schema header comment.
/// Output is byte-deterministic for identical inputs.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) {
        std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        f_ = std::fopen(path.c_str(), "wb");
        if (!f_) throw std::runtime_error("CsvWriter: cannot open " + path);
        std::fprintf(f_, "# imprecise-lab v%s schema=%d\n", kVersion, kCsvSchema);
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    template <typename... Ts>
    void row(const Ts&... cells) {
        std::ostringstream os;
        std::size_t idx = 0;
        ((os << (idx++ ? "," : "") << cells), ...);
        std::string s = os.str();
        s.push_back('\n');
        std::fwrite(s.data(), 1, s.size(), f_);
    }

    void row_vec(const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s.push_back(',');
            s += cells[i];
        }
        s.push_back('\n');
        std::fwrite(s.data(), 1, s.size(), f_);
    }

private:
    std::FILE* f_ = nullptr;
};

}  // namespace iplab
