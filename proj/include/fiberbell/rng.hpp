#pragma once

// Counter-based splittable RNG (splitmix64 finalizer over key + counter)
// plus a portable Poisson sampler. Stateless streams keyed by (seed, stream)
// make parallel scans reproducible independent of evaluation order.

#include <cmath>
#include <cstdint>

namespace fiberbell {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::mix64(seed + detail::kGolden) ^
               detail::mix64(stream * detail::kGolden + 0x85ebca6b2b2ae35ULL)) {}

    // Derive an independent stream; deterministic in (this stream, id).
    CounterRng split(std::uint64_t id) const { return CounterRng(key_, id + 1); }

    std::uint64_t next_u64() { return detail::mix64(key_ + (++ctr_) * detail::kGolden); }

    double next_double() {  // uniform in [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

// Poisson sample; inversion for small means, Hormann's PTRS transformed
// rejection for large ones. Deterministic across platforms.
inline std::uint64_t poisson_sample(CounterRng& rng, double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < 30.0) {
        const double l = std::exp(-mean);
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= rng.next_double();
        } while (p > l);
        return k - 1;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.next_double() - 0.5;
        double v = rng.next_double();
        double us = 0.5 - std::abs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * loglam - mean - std::lgamma(kf + 1.0))
            return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace fiberbell
