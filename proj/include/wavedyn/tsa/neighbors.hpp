#pragma once

// Box-assisted fixed-radius neighbor search: points are binned on a 2-D grid
// over their first and last delay coordinates with box size epsilon, so a
// query only visits the 3x3 block of boxes around it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "wavedyn/tsa/embedding.hpp"

namespace wavedyn::tsa {

class BoxGrid {
public:
    /// Indexes points [0, count) of `emb`.
    BoxGrid(const EmbeddedSeries& emb, double epsilon, std::size_t count)
        : emb_(&emb), epsilon_(epsilon), eps2_(epsilon * epsilon) {
        require(epsilon > 0.0, "neighbor search: epsilon must be > 0");
        count = std::min(count, emb.size());
        lo_first_ = std::numeric_limits<double>::infinity();
        lo_last_ = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) {
            lo_first_ = std::min(lo_first_, emb.first(k));
            lo_last_ = std::min(lo_last_, emb.last(k));
        }
        entries_.reserve(count);
        for (std::size_t k = 0; k < count; ++k) entries_.push_back({key(box(emb.first(k), lo_first_), box(emb.last(k), lo_last_)), k});
        std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
            return a.key != b.key ? a.key < b.key : a.index < b.index;
        });
    }

    /// Calls visit(j) for every indexed j with |x_j - x_q| <= epsilon (Euclidean),
    /// boxes in ascending key order, indices ascending within a box.
    template <class Visitor>
    void for_each_neighbor(std::size_t query, Visitor&& visit) const {
        const auto q = emb_->point(query);
        const std::int64_t bf = box(emb_->first(query), lo_first_);
        const std::int64_t bl = box(emb_->last(query), lo_last_);
        for (std::int64_t df = -1; df <= 1; ++df) {
            for (std::int64_t dl = -1; dl <= 1; ++dl) {
                if (bf + df < 0 || bl + dl < 0) continue;
                const std::uint64_t k = key(bf + df, bl + dl);
                auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                           [](const Entry& e, std::uint64_t value) { return e.key < value; });
                for (; it != entries_.end() && it->key == k; ++it) {
                    if (squared_distance(q, emb_->point(it->index)) <= eps2_) visit(it->index);
                }
            }
        }
    }

    double epsilon() const { return epsilon_; }

private:
    struct Entry {
        std::uint64_t key;
        std::size_t index;
    };

    std::int64_t box(double v, double lo) const { return static_cast<std::int64_t>(std::floor((v - lo) / epsilon_)); }
    static std::uint64_t key(std::int64_t a, std::int64_t b) {
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b & 0xffffffff);
    }

    const EmbeddedSeries* emb_;
    double epsilon_;
    double eps2_;
    double lo_first_ = 0.0;
    double lo_last_ = 0.0;
    std::vector<Entry> entries_;
};

}  // namespace wavedyn::tsa
