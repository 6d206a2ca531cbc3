#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pseudomoments {

/// Weakly decreasing vector of positive parts. Zero parts are dropped and the
/// remaining parts sorted on construction, so any composition of the same
/// multiset yields the same partition.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts)
    {
        for (int p : parts) {
            if (p < 0) {
                throw std::invalid_argument("partition parts must be nonnegative, got " + std::to_string(p));
            }
        }
        std::erase(parts, 0);
        std::sort(parts.begin(), parts.end(), std::greater<>());
        parts_ = std::move(parts);
    }

    Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

    /// The partition <1^{m_1} 2^{m_2} ... l^{m_l}> given multiplicities m_j.
    static Partition from_multiplicities(const std::vector<int>& multiplicities)
    {
        std::vector<int> parts;
        for (std::size_t j = 0; j < multiplicities.size(); ++j) {
            if (multiplicities[j] < 0) {
                throw std::invalid_argument("multiplicities must be nonnegative");
            }
            parts.insert(parts.end(), static_cast<std::size_t>(multiplicities[j]), static_cast<int>(j + 1));
        }
        return Partition(std::move(parts));
    }

    const std::vector<int>& parts() const noexcept { return parts_; }
    std::size_t length() const noexcept { return parts_.size(); }
    bool empty() const noexcept { return parts_.empty(); }
    long long weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0LL); }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<int> parts_;
};

} // namespace pseudomoments
