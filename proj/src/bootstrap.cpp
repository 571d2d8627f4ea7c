#include "dipkit/bootstrap.hpp"

#include "dipkit/dip.hpp"
#include "dipkit/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <thread>
#include <tuple>

namespace dipkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Sorted uniform order statistics up to a common positive factor: partial sums
// of i.i.d. exponentials. The dip is scale invariant, so the factor is irrelevant
// and the O(n log n) sort is avoided.
double one_null_dip(std::size_t n, std::uint64_t seed, std::vector<double>& buf) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    buf.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += expo(rng);
        buf[i] = acc;
    }
    return detail::dip_unchecked(buf).dip;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::vector<double> bootstrap_dips(std::size_t n, std::size_t repetitions, std::uint64_t seed,
                                   unsigned workers) {
    if (n == 0) throw InvalidInput("sample size must be at least 1");
    if (repetitions == 0) throw InvalidInput("repetitions must be at least 1");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, repetitions));

    std::vector<double> dips(repetitions);
    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<double> buf;
        for (std::size_t r = begin; r < end; ++r) dips[r] = one_null_dip(n, stream_seed(seed, r), buf);
    };
    if (workers <= 1) {
        work(0, repetitions);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (repetitions + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t b = w * chunk;
            const std::size_t e = std::min(repetitions, b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
        for (auto& t : pool) t.join();
    }
    std::sort(dips.begin(), dips.end());
    return dips;
}

double pvalue_bootstrap(double dip, std::size_t n, std::size_t repetitions, std::uint64_t seed) {
    if (!(dip >= 0.0 && dip <= 0.25 + 1e-12)) throw InvalidInput("dip must lie in [0, 0.25]");
    const auto dips = bootstrap_dips(n, repetitions, seed);
    const auto it = std::lower_bound(dips.begin(), dips.end(), dip);
    return static_cast<double>(dips.end() - it) / static_cast<double>(repetitions);
}

BootstrapNull::BootstrapNull(std::size_t n, std::size_t repetitions, std::uint64_t seed)
    : n_(n), dips_(bootstrap_dips(n, repetitions, seed)) {}

double BootstrapNull::pvalue(double dip) const {
    const auto it = std::lower_bound(dips_.begin(), dips_.end(), dip);
    return static_cast<double>(dips_.end() - it) / static_cast<double>(dips_.size());
}

std::shared_ptr<const BootstrapNull> cached_null(std::size_t n, std::size_t repetitions,
                                                 std::uint64_t seed) {
    static std::mutex mu;
    static std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>,
                    std::shared_ptr<const BootstrapNull>>
        cache;
    const auto key = std::make_tuple(n, repetitions, seed);
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    auto made = std::make_shared<const BootstrapNull>(n, repetitions, seed);
    std::lock_guard lock(mu);
    return cache.emplace(key, std::move(made)).first->second;
}

}  // namespace dipkit
