#include "barnmap/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace barnmap {

void BucketEdges::validate() const {
    if (lower_bounds.empty()) throw std::invalid_argument("bucket edges: need at least one bucket");
    if (lower_bounds.front() != 1.0) {
        throw std::invalid_argument("bucket edges: the first interval must start at 1");
    }
    for (std::size_t i = 1; i < lower_bounds.size(); ++i) {
        if (!(lower_bounds[i] > lower_bounds[i - 1])) {
            throw std::invalid_argument("bucket edges: bounds must be strictly ascending");
        }
    }
}

std::size_t BucketEdges::bucket_for(double score) const {
    if (score < 1.0) throw std::invalid_argument("bucket_for: detection scores live in [1, inf)");
    const auto it = std::upper_bound(lower_bounds.begin(), lower_bounds.end(), score);
    return static_cast<std::size_t>(it - lower_bounds.begin());  // 1-based; bucket 0 is reserved
}

BucketEdges quantile_edges(std::vector<double> all_scores, int k) {
    if (k < 1) throw std::invalid_argument("quantile_edges: k must be >= 1");
    BucketEdges edges;
    edges.lower_bounds.push_back(1.0);
    if (all_scores.empty()) return edges;
    std::sort(all_scores.begin(), all_scores.end());
    if (all_scores.front() < 1.0) {
        throw std::invalid_argument("quantile_edges: detection scores live in [1, inf)");
    }
    for (int i = 1; i < k; ++i) {
        const std::size_t pos = static_cast<std::size_t>(
            static_cast<double>(i) / k * static_cast<double>(all_scores.size()));
        const double q = all_scores[std::min(pos, all_scores.size() - 1)];
        if (q > edges.lower_bounds.back()) edges.lower_bounds.push_back(q);
    }
    edges.validate();
    return edges;
}

std::map<std::string, std::size_t> assign_buckets(
    const std::map<std::string, std::vector<double>>& image_scores, const BucketEdges& edges) {
    edges.validate();
    std::map<std::string, std::size_t> out;
    for (const auto& [image, scores] : image_scores) {
        if (scores.empty()) {
            out[image] = 0;
            continue;
        }
        double best = scores.front();
        for (double s : scores) {
            if (s < 1.0) throw std::invalid_argument("assign_buckets: score below 1 for image " + image);
            best = std::max(best, s);
        }
        out[image] = edges.bucket_for(best);
    }
    return out;
}

UcbCampaign::UcbCampaign(const std::map<std::string, std::vector<double>>& image_scores,
                         BucketEdges edges, UcbConfig cfg)
    : cfg_(cfg), rng_(cfg.seed) {
    buckets_.resize(edges.bucket_count());
    for (const auto& [image, bucket] : assign_buckets(image_scores, edges)) {
        buckets_[bucket].images.push_back(image);
        ++buckets_[bucket].size;
    }
}

double ucb_score(double mu, std::int64_t visits, std::int64_t total_visits, double exploration) {
    if (visits == 0) return std::numeric_limits<double>::infinity();
    const double bonus =
        total_visits > 0
            ? exploration * std::sqrt(std::log(static_cast<double>(total_visits)) /
                                      static_cast<double>(visits))
            : 0.0;
    return mu + bonus;
}

std::vector<double> UcbCampaign::ucb_scores() const {
    std::int64_t total_visits = 0;
    for (const BucketState& b : buckets_) total_visits += b.visits;

    std::vector<double> scores(buckets_.size(), 0.0);
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        const BucketState& b = buckets_[i];
        if (b.size == 0) continue;  // nothing to sample, keep S = 0
        scores[i] = ucb_score(b.mu(), b.visits, total_visits, cfg_.exploration);
    }
    return scores;
}

std::vector<double> UcbCampaign::sampling_distribution() const {
    const std::size_t n = buckets_.size();
    std::vector<double> pi(n, 0.0);

    std::int64_t total_visits = 0;
    std::size_t nonempty = 0;
    for (const BucketState& b : buckets_) {
        total_visits += b.visits;
        if (b.size > 0) ++nonempty;
    }
    if (nonempty == 0) throw std::logic_error("sampling_distribution: campaign has no images");

    if (total_visits == 0) {  // first round: uniform over all K+1 buckets
        for (std::size_t i = 0; i < n; ++i) pi[i] = 1.0 / static_cast<double>(n);
        return pi;
    }

    const std::vector<double> scores = ucb_scores();
    std::size_t unvisited = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isinf(scores[i])) ++unvisited;
    }
    if (unvisited > 0) {
        // The UCB score is undefined at n_i = 0; unvisited buckets dominate
        // so each gets visited before exploitation starts.
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isinf(scores[i])) pi[i] = 1.0 / static_cast<double>(unvisited);
        }
        return pi;
    }

    double sum = 0.0;
    for (double s : scores) sum += s;
    if (sum <= 0.0) {  // all-zero scores (alpha = 0 and no successes yet)
        for (std::size_t i = 0; i < n; ++i) {
            if (buckets_[i].size > 0) pi[i] = 1.0 / static_cast<double>(nonempty);
        }
        return pi;
    }
    for (std::size_t i = 0; i < n; ++i) pi[i] = scores[i] / sum;
    return pi;
}

bool UcbCampaign::exhausted() const {
    return std::all_of(buckets_.begin(), buckets_.end(),
                       [](const BucketState& b) { return b.images.empty(); });
}

RoundLog UcbCampaign::run_round(int m, const std::function<bool(const std::string&)>& oracle) {
    if (m < 1) throw std::invalid_argument("run_round: m must be >= 1");
    if (exhausted()) throw std::logic_error("run_round: every image has been examined");

    RoundLog log;
    log.round = static_cast<int>(history_.size()) + 1;
    log.pi = sampling_distribution();
    last_pi_ = log.pi;

    for (int draw = 0; draw < m && !exhausted(); ++draw) {
        // Bucket draw with replacement; exhausted buckets are redrawn from
        // the remaining pi mass.
        std::size_t chosen = buckets_.size();
        double mass = 0.0;
        for (std::size_t i = 0; i < buckets_.size(); ++i) {
            if (!buckets_[i].images.empty()) mass += log.pi[i];
        }
        if (mass <= 0.0) {
            // pi is concentrated on exhausted buckets; fall back to uniform
            // over the buckets that still have images.
            std::vector<std::size_t> open;
            for (std::size_t i = 0; i < buckets_.size(); ++i) {
                if (!buckets_[i].images.empty()) open.push_back(i);
            }
            chosen = open[rng_.next_below(open.size())];
        } else {
            const double u = rng_.next_double() * mass;
            double acc = 0.0;
            for (std::size_t i = 0; i < buckets_.size(); ++i) {
                if (buckets_[i].images.empty()) continue;
                acc += log.pi[i];
                chosen = i;
                if (u < acc) break;
            }
        }

        // Unexamined image, uniform within the bucket; examined images are
        // never re-labeled.
        BucketState& bucket = buckets_[chosen];
        const std::size_t pick = rng_.next_below(bucket.images.size());
        const std::string image = bucket.images[pick];
        bucket.images.erase(bucket.images.begin() + static_cast<std::ptrdiff_t>(pick));

        const bool facility = oracle(image);
        ++bucket.visits;
        if (facility) {
            ++bucket.successes;
            ++found_;
        }
        log.sampled.push_back(image);
        log.labels[image] = facility;
    }

    log.found = found_;
    for (const BucketState& b : buckets_) {
        log.visits.push_back(b.visits);
        log.mu.push_back(b.mu());
    }
    const Estimate est = estimate_total();
    log.estimate_mu = est.total_mu;
    log.estimate_pi = est.total_pi;
    log.stopped = est.stop;
    history_.push_back(log);
    return log;
}

UcbCampaign::Estimate UcbCampaign::estimate_total() const {
    if (history_.empty() && last_pi_.empty()) {
        throw std::logic_error("estimate_total: no completed rounds");
    }
    Estimate est;
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        est.total_mu += static_cast<double>(buckets_[i].size) * buckets_[i].mu();
        est.total_pi += static_cast<double>(buckets_[i].size) * last_pi_[i];
    }
    const double target = cfg_.stop_on_pi_estimate ? est.total_pi : est.total_mu;
    est.stop = static_cast<double>(found_) >= cfg_.stop_fraction * target;
    return est;
}

}  // namespace barnmap
