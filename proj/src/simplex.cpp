#include "iplab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iplab {

namespace {

void validate_weights(const std::vector<double>& w, const char* what) {
    if (w.empty()) throw std::invalid_argument(std::string(what) + ": empty weight vector");
    double sum = 0.0;
    for (double x : w) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite weight");
        if (x < -kInputTolerance)
            throw std::invalid_argument(std::string(what) + ": negative weight " + std::to_string(x));
        sum += x;
    }
    if (std::abs(sum - 1.0) > kInputTolerance)
        throw std::invalid_argument(std::string(what) + ": weights sum to " + std::to_string(sum));
}

std::vector<double> renormalize(std::vector<double> w) {
    double sum = 0.0;
    for (double& x : w) {
        if (x < 0.0) x = 0.0;  // clamp slack-sized negatives
        sum += x;
    }
    for (double& x : w) x /= sum;
    return w;
}

}  // namespace

Measure make_measure(std::vector<double> weights) {
    if (weights.size() < 2) throw std::invalid_argument("Measure: need at least 2 outcomes");
    validate_weights(weights, "Measure");
    return Measure{renormalize(std::move(weights))};
}

CredalSet make_credal_set(std::vector<Measure> members) {
    if (members.empty()) throw std::invalid_argument("CredalSet: empty member list");
    const std::size_t k = members.front().k();
    for (const Measure& m : members)
        if (m.k() != k) throw std::invalid_argument("CredalSet: members disagree on outcome count");
    return CredalSet{std::move(members)};
}

ConvexWeights make_convex_weights(std::vector<double> lambda, std::size_t member_count) {
    if (lambda.size() != member_count)
        throw std::invalid_argument("ConvexWeights: expected " + std::to_string(member_count) +
                                    " coefficients, got " + std::to_string(lambda.size()));
    validate_weights(lambda, "ConvexWeights");
    return ConvexWeights{renormalize(std::move(lambda))};
}

TargetPath make_target_path(const CredalSet& m, std::vector<ConvexWeights> waypoints) {
    if (waypoints.empty()) throw std::invalid_argument("TargetPath: no waypoints");
    for (const ConvexWeights& q : waypoints)
        if (q.size() != m.size())
            throw std::invalid_argument("TargetPath: waypoint weight count does not match credal set");
    return TargetPath{std::move(waypoints)};
}

Measure induce(const CredalSet& m, const ConvexWeights& q) {
    if (q.size() != m.size()) throw std::invalid_argument("induce: weight count mismatch");
    Measure out;
    out.w.assign(m.k(), 0.0);
    for (std::size_t j = 0; j < m.size(); ++j)
        for (std::size_t c = 0; c < m.k(); ++c) out.w[c] += q.lambda[j] * m.members[j].w[c];
    return out;
}

Polyline induced_polyline(const CredalSet& m, const TargetPath& path) {
    std::vector<Measure> pts;
    pts.reserve(path.waypoints.size());
    for (const ConvexWeights& q : path.waypoints) pts.push_back(induce(m, q));
    return Polyline(std::move(pts));
}

double distance(const Measure& p, const Measure& q) {
    if (p.k() != q.k()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) {
        const double d = p.w[j] - q.w[j];
        s += d * d;
    }
    return std::sqrt(s);
}

double max_coord_distance(const Measure& p, const Measure& q) {
    if (p.k() != q.k()) throw std::invalid_argument("max_coord_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < p.k(); ++j) s = std::max(s, std::abs(p.w[j] - q.w[j]));
    return s;
}

Measure concat_average(const Measure& a_avg, std::uint64_t u, const Measure& b_avg,
                       std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("concat_average: second block must be nonempty");
    if (u == 0) return b_avg;
    if (a_avg.k() != b_avg.k()) throw std::invalid_argument("concat_average: dimension mismatch");
    const double total = static_cast<double>(u) + static_cast<double>(v);
    const double alpha = static_cast<double>(v) / total;
    Measure out;
    out.w.resize(a_avg.k());
    for (std::size_t j = 0; j < a_avg.k(); ++j)
        out.w[j] = (1.0 - alpha) * a_avg.w[j] + alpha * b_avg.w[j];
    return out;
}

FiniteBlock block_from_entries(const CredalSet& m, std::vector<std::uint32_t> entries) {
    if (entries.empty()) throw std::invalid_argument("FiniteBlock: empty entry list");
    Measure avg;
    avg.w.assign(m.k(), 0.0);
    for (std::uint32_t e : entries) {
        if (e >= m.size()) throw std::invalid_argument("FiniteBlock: entry out of range");
        for (std::size_t c = 0; c < m.k(); ++c) avg.w[c] += m.members[e].w[c];
    }
    for (double& x : avg.w) x /= static_cast<double>(entries.size());
    return FiniteBlock{std::move(entries), std::move(avg)};
}

namespace {

// One nonzero vector from the null space of the (k+1) x w matrix whose
// columns are (member weights, 1), via Gaussian elimination. Exists
// whenever w > k+1.
std::vector<double> affine_dependency(const CredalSet& m, const std::vector<std::size_t>& support) {
    const std::size_t rows = m.k() + 1;
    const std::size_t cols = support.size();
    std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < m.k(); ++r) a[r][c] = m.members[support[c]].w[r];
        a[rows - 1][c] = 1.0;
    }

    std::vector<std::size_t> pivot_col_of_row;
    std::vector<bool> is_pivot(cols, false);
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t best = row;
        for (std::size_t r = row + 1; r < rows; ++r)
            if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
        if (std::abs(a[best][col]) < 1e-12) continue;
        std::swap(a[best], a[row]);
        const double piv = a[row][col];
        for (double& x : a[row]) x /= piv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == row) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t c2 = 0; c2 < cols; ++c2) a[r][c2] -= f * a[row][c2];
        }
        pivot_col_of_row.push_back(col);
        is_pivot[col] = true;
        ++row;
    }

    std::size_t free_col = cols;
    for (std::size_t c = 0; c < cols; ++c)
        if (!is_pivot[c]) {
            free_col = c;
            break;
        }
    if (free_col == cols)
        throw std::logic_error("affine_dependency: no free column despite oversized support");

    std::vector<double> gamma(cols, 0.0);
    gamma[free_col] = 1.0;
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
        gamma[pivot_col_of_row[r]] = -a[r][free_col];
    return gamma;
}

// Reduce convex weights to a representation of the same induced point
// with at most k+1 support members (constructive Caratheodory step).
std::vector<double> reduce_support(const CredalSet& m, std::vector<double> lambda) {
    const std::size_t cap = m.k() + 1;
    for (;;) {
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < lambda.size(); ++j)
            if (lambda[j] > 0.0) support.push_back(j);
        if (support.size() <= cap) return lambda;

        std::vector<double> gamma = affine_dependency(m, support);
        bool has_positive = false;
        for (double g : gamma) has_positive |= (g > 0.0);
        if (!has_positive)
            for (double& g : gamma) g = -g;

        double t = std::numeric_limits<double>::infinity();
        std::size_t vanish = support.size();
        for (std::size_t c = 0; c < support.size(); ++c) {
            if (gamma[c] <= 1e-15) continue;
            const double ratio = lambda[support[c]] / gamma[c];
            if (ratio < t) {
                t = ratio;
                vanish = c;
            }
        }
        if (vanish == support.size())
            throw std::logic_error("reduce_support: dependency has no positive component");
        for (std::size_t c = 0; c < support.size(); ++c) {
            lambda[support[c]] -= t * gamma[c];
            if (lambda[support[c]] < 1e-15) lambda[support[c]] = 0.0;
        }
        lambda[support[vanish]] = 0.0;
    }
}

}  // namespace

FiniteBlock caratheodory_approximate(const CredalSet& m, const ConvexWeights& q,
                                     std::uint64_t v) {
    if (v == 0) throw std::invalid_argument("caratheodory_approximate: v must be positive");
    if (q.size() != m.size())
        throw std::invalid_argument("caratheodory_approximate: weight count mismatch");

    std::vector<double> lambda = q.lambda;
    if (m.size() > m.k() + 1) lambda = reduce_support(m, lambda);

    std::vector<std::uint32_t> entries;
    entries.reserve(v);
    std::uint64_t used = 0;
    for (std::size_t j = 0; j < lambda.size() && used < v; ++j) {
        const auto count = static_cast<std::uint64_t>(
            std::floor(static_cast<double>(v) * lambda[j]));
        for (std::uint64_t c = 0; c < count && used < v; ++c, ++used)
            entries.push_back(static_cast<std::uint32_t>(j));
    }
    while (used < v) {  // filler copies of member 0
        entries.push_back(0);
        ++used;
    }
    return block_from_entries(m, std::move(entries));
}

std::vector<ConvexWeights> build_cover_chain(const CredalSet& m, const TargetPath& path,
                                             double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("build_cover_chain: eps must be positive");
    const double spacing = eps / 2.0;

    std::vector<Measure> induced;
    induced.reserve(path.waypoints.size());
    for (const ConvexWeights& q : path.waypoints) induced.push_back(induce(m, q));

    std::vector<ConvexWeights> centers;
    centers.push_back(path.waypoints.front());
    Measure last_point = induced.front();

    for (std::size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
        const double len = distance(induced[s], induced[s + 1]);
        if (len < 1e-15) continue;  // degenerate segment
        const auto steps = static_cast<std::uint64_t>(std::max(1.0, std::ceil(len / spacing)));
        for (std::uint64_t t = 1; t <= steps; ++t) {
            const double alpha = static_cast<double>(t) / static_cast<double>(steps);
            std::vector<double> w(m.size());
            for (std::size_t j = 0; j < m.size(); ++j)
                w[j] = (1.0 - alpha) * path.waypoints[s].lambda[j] +
                       alpha * path.waypoints[s + 1].lambda[j];
            ConvexWeights cw = make_convex_weights(std::move(w), m.size());
            Measure pt = induce(m, cw);
            if (distance(pt, last_point) < 1e-15) continue;
            centers.push_back(std::move(cw));
            last_point = std::move(pt);
        }
    }
    return centers;
}

double point_segment_distance(const Measure& p, const Measure& a, const Measure& b) {
    const std::size_t k = p.k();
    double ab2 = 0.0, ap_ab = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double d = b.w[j] - a.w[j];
        ab2 += d * d;
        ap_ab += (p.w[j] - a.w[j]) * d;
    }
    double t = 0.0;
    if (ab2 > 0.0) t = std::clamp(ap_ab / ab2, 0.0, 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double c = a.w[j] + t * (b.w[j] - a.w[j]) - p.w[j];
        s += c * c;
    }
    return std::sqrt(s);
}

Polyline::Polyline(std::vector<Measure> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("Polyline: no points");
    cumulative_.resize(points_.size(), 0.0);
    for (std::size_t s = 0; s + 1 < points_.size(); ++s) {
        total_length_ += distance(points_[s], points_[s + 1]);
        cumulative_[s + 1] = total_length_;
    }
}

double Polyline::distance_to(const Measure& p) const {
    if (points_.size() == 1) return distance(p, points_.front());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < points_.size(); ++s)
        best = std::min(best, point_segment_distance(p, points_[s], points_[s + 1]));
    return best;
}

Measure Polyline::point_at_arc(double s) const {
    if (points_.size() == 1 || s <= 0.0) return points_.front();
    if (s >= total_length_) return points_.back();
    std::size_t seg = 0;
    while (seg + 2 < points_.size() && cumulative_[seg + 1] <= s) ++seg;
    const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
    const double t = seg_len > 0.0 ? (s - cumulative_[seg]) / seg_len : 0.0;
    Measure out;
    out.w.resize(points_[seg].k());
    for (std::size_t j = 0; j < out.w.size(); ++j)
        out.w[j] = points_[seg].w[j] + t * (points_[seg + 1].w[j] - points_[seg].w[j]);
    return out;
}

double hausdorff_cloud_polyline(const std::vector<Measure>& cloud, const Polyline& path,
                                double sample_spacing) {
    if (cloud.empty()) throw std::invalid_argument("hausdorff_cloud_polyline: empty cloud");
    double cloud_to_path = 0.0;
    for (const Measure& p : cloud) cloud_to_path = std::max(cloud_to_path, path.distance_to(p));

    const auto samples = static_cast<std::uint64_t>(
        std::max(1.0, std::ceil(path.arc_length() / sample_spacing)));
    double path_to_cloud = 0.0;
    for (std::uint64_t t = 0; t <= samples; ++t) {
        const double s = path.arc_length() * static_cast<double>(t) / static_cast<double>(samples);
        const Measure q = path.point_at_arc(s);
        double best = std::numeric_limits<double>::infinity();
        for (const Measure& p : cloud) best = std::min(best, distance(p, q));
        path_to_cloud = std::max(path_to_cloud, best);
    }
    return std::max(cloud_to_path, path_to_cloud);
}

}  // namespace iplab
