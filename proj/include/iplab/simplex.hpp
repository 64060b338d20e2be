#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Geometry and algebra on the probability simplex: measures, gambles,
// credal sets, running averages of finite measure blocks, Caratheodory
// approximation by rational-weight blocks, and cover/chain discretization
// of polyline targets.

namespace iplab {

/// Slack allowed on user-supplied weights before rejection. Inputs inside
/// the slack are renormalized so internal sums are exact to ~1e-16.
inline constexpr double kInputTolerance = 1e-9;

/// A probability measure on a finite outcome space, as a point of the
/// simplex: k nonnegative weights summing to one.
struct Measure {
    std::vector<double> w;

    std::size_t k() const { return w.size(); }
    double operator[](std::size_t j) const { return w[j]; }
};

/// A bounded real payoff (loss) per outcome.
struct Gamble {
    std::vector<double> values;

    std::size_t k() const { return values.size(); }
};

/// Finite nonempty collection of measures sharing one outcome space.
struct CredalSet {
    std::vector<Measure> members;

    std::size_t size() const { return members.size(); }
    std::size_t k() const { return members.front().k(); }
};

/// Convex coefficients over the members of a credal set.
struct ConvexWeights {
    std::vector<double> lambda;

    std::size_t size() const { return lambda.size(); }
};

/// Polyline of waypoints inside the convex hull of a credal set, each
/// waypoint given as explicit convex weights over the members. The union
/// of the segments between consecutive induced measures is the target set.
struct TargetPath {
    std::vector<ConvexWeights> waypoints;
};

/// A finite sequence of credal-set member indices together with its
/// cached arithmetic-mean measure.
struct FiniteBlock {
    std::vector<std::uint32_t> entries;
    Measure average;

    std::size_t length() const { return entries.size(); }
};

/// Materialized polyline in measure space, with exact point-to-segment
/// distance queries and arc-length parameterization.
class Polyline {
public:
    explicit Polyline(std::vector<Measure> points);

    const std::vector<Measure>& points() const { return points_; }
    double arc_length() const { return total_length_; }
    /// Minimum Euclidean distance from p to the polyline.
    double distance_to(const Measure& p) const;
    /// Point at arc-length position s, clamped to [0, arc_length()].
    Measure point_at_arc(double s) const;

private:
    std::vector<Measure> points_;
    std::vector<double> cumulative_;  // cumulative arc length per vertex
    double total_length_ = 0.0;
};

Measure make_measure(std::vector<double> weights);
CredalSet make_credal_set(std::vector<Measure> members);
ConvexWeights make_convex_weights(std::vector<double> lambda, std::size_t member_count);
TargetPath make_target_path(const CredalSet& m, std::vector<ConvexWeights> waypoints);

/// Measure induced by convex weights over the credal members.
Measure induce(const CredalSet& m, const ConvexWeights& q);
Polyline induced_polyline(const CredalSet& m, const TargetPath& path);

/// Euclidean metric on the simplex.
double distance(const Measure& p, const Measure& q);
/// Max-coordinate metric (used by the subsequence concentration bound).
double max_coord_distance(const Measure& p, const Measure& q);

/// Average of the concatenation of two blocks given only their averages
/// and lengths: (u*a + v*b) / (u+v). With u = 0 returns b_avg.
Measure concat_average(const Measure& a_avg, std::uint64_t u,
                       const Measure& b_avg, std::uint64_t v);

FiniteBlock block_from_entries(const CredalSet& m, std::vector<std::uint32_t> entries);

/// Length-v block of members whose average approximates induce(m, q) to
/// within 4(k+1)/v. Weights are first reduced to at most k+1 support
/// members, then repeated floor(v*lambda_j) times in member order; the
/// remainder is filled with copies of member 0.
FiniteBlock caratheodory_approximate(const CredalSet& m, const ConvexWeights& q,
                                     std::uint64_t v);

/// Ordered centers on the induced polyline forming both an eps-cover of
/// the target set and an eps-chain: consecutive spacing at most eps/2,
/// every target point within eps/4 of a center, every center on the path.
std::vector<ConvexWeights> build_cover_chain(const CredalSet& m, const TargetPath& path,
                                             double eps);

/// Exact distance from p to segment [a, b] in measure space.
double point_segment_distance(const Measure& p, const Measure& a, const Measure& b);

/// Symmetric Hausdorff distance between a finite point cloud and a
/// polyline. Cloud-to-path uses exact segment distances; path-to-cloud
/// samples the path at the given arc spacing.
double hausdorff_cloud_polyline(const std::vector<Measure>& cloud, const Polyline& path,
                                double sample_spacing = 1e-3);

}  // namespace iplab
