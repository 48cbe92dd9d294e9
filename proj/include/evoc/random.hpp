#ifndef EVOC_RANDOM_HPP
#define EVOC_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace evoc {

// SplitMix64 finalizer. A bijection on 64-bit words; used both to seed
// generators and to derive independent stream keys from a master seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Folds a sequence of words into a stream key: k <- mix64(k ^ mix64(w)).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> words) noexcept {
    std::uint64_t k = mix64(master);
    for (auto w : words) k = mix64(k ^ mix64(w));
    return k;
}

// Purpose tags for derived streams. Each consumer of randomness draws from
// its own stream so that adding draws in one place never shifts another.
enum class Stream : std::uint64_t {
    Placement = 1,
    AgentDecision = 2,
    Broadcast = 3,
    Replicate = 4,
};

// xoshiro256** generator; satisfies UniformRandomBitGenerator.
class Rng {
    __extension__ using u128 = unsigned __int128;

public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t s = seed;
        for (auto& w : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    static Rng for_stream(std::uint64_t master, Stream stream,
                          std::initializer_list<std::uint64_t> keys = {}) {
        std::uint64_t k = derive_seed(master, {static_cast<std::uint64_t>(stream)});
        for (auto w : keys) k = mix64(k ^ mix64(w));
        return Rng(k);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    // Uniform integer in [0, n); n must be positive. Lemire's method.
    std::uint64_t below(std::uint64_t n) noexcept {
        u128 m = static_cast<u128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<u128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Fisher-Yates, independent of the standard library's shuffle algorithm.
    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }
    template <typename T>
    void shuffle(std::vector<T>& items) noexcept { shuffle(std::span<T>(items)); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

}  // namespace evoc

#endif
