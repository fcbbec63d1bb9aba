#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

namespace apollo {

/// Membership bit-vector over [0, bound]. set() is safe to call concurrently;
/// reads assume all writers have finished.
class AtomicBitset {
  public:
    AtomicBitset() = default;
    explicit AtomicBitset(std::uint64_t bound)
        : bound_(bound), nwords_(bound / 64 + 1), words_(new std::atomic<std::uint64_t>[nwords_]) {
        for (std::size_t i = 0; i < nwords_; ++i) words_[i].store(0, std::memory_order_relaxed);
    }

    std::uint64_t bound() const { return bound_; }

    void set(std::uint64_t i) {
        words_[i >> 6].fetch_or(std::uint64_t{1} << (i & 63), std::memory_order_relaxed);
    }

    bool test(std::uint64_t i) const {
        return (words_[i >> 6].load(std::memory_order_relaxed) >> (i & 63)) & 1U;
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < nwords_; ++i)
            c += static_cast<std::uint64_t>(__builtin_popcountll(words_[i].load(std::memory_order_relaxed)));
        return c;
    }

    /// Population of (this AND other); both must share the same bound.
    std::uint64_t count_and(const AtomicBitset& other) const {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < nwords_; ++i)
            c += static_cast<std::uint64_t>(__builtin_popcountll(words_[i].load(std::memory_order_relaxed) &
                                                                 other.words_[i].load(std::memory_order_relaxed)));
        return c;
    }

    void merge(const AtomicBitset& other) {
        for (std::size_t i = 0; i < nwords_; ++i)
            words_[i].fetch_or(other.words_[i].load(std::memory_order_relaxed), std::memory_order_relaxed);
    }

    template <class Int = std::int64_t>
    std::vector<Int> to_vector(std::uint64_t from = 0) const {
        std::vector<Int> out;
        for (std::size_t w = 0; w < nwords_; ++w) {
            std::uint64_t bits = words_[w].load(std::memory_order_relaxed);
            while (bits) {
                const std::uint64_t i = w * 64 + static_cast<std::uint64_t>(__builtin_ctzll(bits));
                bits &= bits - 1;
                if (i >= from && i <= bound_) out.push_back(static_cast<Int>(i));
            }
        }
        return out;
    }

  private:
    std::uint64_t bound_ = 0;
    std::size_t nwords_ = 0;
    std::unique_ptr<std::atomic<std::uint64_t>[]> words_;
};

}  // namespace apollo
