#pragma once

// Index-keyed fan-out over a fixed worker pool. Results land in per-index
// slots, so output order and content never depend on scheduling.

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "gbnn/dataset_io.hpp"
#include "gbnn/features.hpp"
#include "gbnn/groebner.hpp"
#include "gbnn/sampler.hpp"

namespace gbnn {

/// Calls fn(i) for every i in [0, count) on `workers` threads.
template <class Fn>
void parallel_for_index(std::size_t count, std::size_t workers, Fn&& fn) {
    if (workers == 0) throw ArgumentError("worker count must be >= 1");
    if (workers == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const std::size_t threads = std::min(workers, count);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(count);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

inline std::vector<IdealSample> generate_samples(const RandomModel& model, std::size_t count, std::size_t workers = 1) {
    model.validate();
    std::vector<IdealSample> out(count);
    parallel_for_index(count, workers, [&](std::size_t i) { out[i] = sample_ideal(model, i); });
    return out;
}

struct LabelOutcome {
    std::vector<std::optional<GroebnerResult>> results;  // nullopt = quarantined
    std::vector<QuarantineEntry> quarantine;

    std::vector<GbLabel> labels() const {
        std::vector<GbLabel> out;
        for (const auto& r : results)
            if (r) out.push_back(label_of(*r));
        return out;
    }
};

/// Reduced Gröbner basis of every sample. Samples that exhaust `max_pairs`
/// are recorded in `quarantine` and have no result.
inline LabelOutcome label_samples(const std::vector<IdealSample>& samples, std::size_t workers,
                                  std::optional<std::uint64_t> max_pairs) {
    LabelOutcome out;
    out.results.resize(samples.size());
    std::vector<std::uint64_t> exhausted(samples.size(), 0);
    BuchbergerOptions opts;
    opts.max_pairs = max_pairs;
    parallel_for_index(samples.size(), workers, [&](std::size_t i) {
        try {
            out.results[i] = buchberger(samples[i].polynomials(), opts);
        } catch (const BudgetExceeded& e) {
            exhausted[i] = e.pairs_processed;
        }
    });
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (!out.results[i]) out.quarantine.push_back({i, exhausted[i]});
    return out;
}

inline std::vector<FeatureVector> features_for(const std::vector<IdealSample>& samples, const LabelOutcome& labels,
                                               std::size_t workers) {
    std::vector<std::optional<FeatureVector>> slots(samples.size());
    parallel_for_index(samples.size(), workers, [&](std::size_t i) {
        if (labels.results[i]) slots[i] = compute_features(samples[i], labels.results[i]->basis);
    });
    std::vector<FeatureVector> out;
    for (auto& s : slots)
        if (s) out.push_back(*s);
    return out;
}

}  // namespace gbnn
