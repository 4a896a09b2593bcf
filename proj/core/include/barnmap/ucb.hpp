#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "barnmap/rng.hpp"

namespace barnmap {

// Active-validation campaign over detector output. Images are bucketed by
// their highest detection score; each labeling round samples buckets from a
// UCB-derived distribution, samples unexamined images inside the chosen
// bucket, and stops once the confirmed count reaches 80% of the estimated
// total.

// Ascending interior boundaries over scores in [1, inf). Bucket k (1-based)
// covers [edges[k-1], edges[k]) with edges[K] = +inf implied; bucket 0 holds
// images with no detections.
struct BucketEdges {
    std::vector<double> lower_bounds;  // first element must be 1.0

    void validate() const;
    // 1-based bucket for a detection score >= 1.
    std::size_t bucket_for(double score) const;
    std::size_t bucket_count() const { return lower_bounds.size() + 1; }  // including bucket 0
};

// Equal-frequency edges from the pooled detection scores.
BucketEdges quantile_edges(std::vector<double> all_scores, int k = 10);

// image id -> bucket index. Images with no detections land in bucket 0;
// otherwise the bucket of their maximum score. Scores below 1 throw.
std::map<std::string, std::size_t> assign_buckets(
    const std::map<std::string, std::vector<double>>& image_scores, const BucketEdges& edges);

struct BucketState {
    std::vector<std::string> images;  // unexamined images, in insertion order
    std::int64_t size = 0;            // |B_i|, fixed at assignment
    std::int64_t visits = 0;          // n_i
    std::int64_t successes = 0;       // s_i

    double mu() const { return visits == 0 ? 0.0 : static_cast<double>(successes) / visits; }
};

struct UcbConfig {
    double exploration = 1.0;  // alpha in the UCB bonus
    std::uint64_t seed = 0;
    double stop_fraction = 0.8;
    bool stop_on_pi_estimate = false;  // default stop uses the mu-based total
};

// S = mu + alpha * sqrt(ln(total_visits) / visits), natural log. Infinity
// when visits = 0.
double ucb_score(double mu, std::int64_t visits, std::int64_t total_visits, double exploration);

struct RoundLog {
    int round = 0;
    std::vector<double> pi;
    std::vector<std::string> sampled;
    std::map<std::string, bool> labels;
    std::int64_t found = 0;
    std::vector<std::int64_t> visits;
    std::vector<double> mu;
    double estimate_mu = 0.0;
    double estimate_pi = 0.0;
    bool stopped = false;
};

class UcbCampaign {
public:
    UcbCampaign(const std::map<std::string, std::vector<double>>& image_scores,
                BucketEdges edges, UcbConfig cfg);

    // S_i = mu_i + alpha * sqrt(ln(sum_j n_j) / n_i); +inf for unvisited
    // non-empty buckets, 0 for empty buckets.
    std::vector<double> ucb_scores() const;

    // pi_i = S_i / sum_j S_j; uniform over all buckets on the first round;
    // unvisited non-empty buckets split the whole mass.
    std::vector<double> sampling_distribution() const;

    // One labeling round of m images. Returns the round log and appends it
    // to history(). Throws std::logic_error when every image is examined.
    RoundLog run_round(int m, const std::function<bool(const std::string&)>& oracle);

    // (mu-based estimate, pi-based estimate, stop flag). Requires >= 1
    // completed round.
    struct Estimate {
        double total_mu = 0.0;
        double total_pi = 0.0;
        bool stop = false;
    };
    Estimate estimate_total() const;

    bool exhausted() const;
    std::int64_t found() const { return found_; }
    int rounds_completed() const { return static_cast<int>(history_.size()); }
    const std::vector<BucketState>& buckets() const { return buckets_; }
    const std::vector<RoundLog>& history() const { return history_; }

private:
    std::vector<BucketState> buckets_;
    UcbConfig cfg_;
    Rng rng_;
    std::int64_t found_ = 0;
    std::vector<double> last_pi_;
    std::vector<RoundLog> history_;
};

}  // namespace barnmap
