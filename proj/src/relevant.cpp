#include "latq/relevant.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "latq/catalog.hpp"
#include "latq/error.hpp"

namespace latq {

uint64_t RelevantVectorSet::uset_hash() const {
    // Vectors are kept sorted, so a sequential FNV-1a is order-independent.
    uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& v : vectors)
        for (long x : v) {
            uint64_t b = static_cast<uint64_t>(x);
            for (int k = 0; k < 8; k++) {
                h ^= (b >> (8 * k)) & 0xff;
                h *= 0x100000001b3ULL;
            }
        }
    return h;
}

RelevantVectorSet relevant_vectors(const Prepared& p, int workers) {
    const int n = p.dim();
    if (n > 16) throw UsageError("relevant-vector scan limited to n <= 16");
    const uint64_t total = (1ULL << n) - 1;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, 16);

    struct Shard {
        std::vector<VecZ> vectors;
        std::vector<VecZ> flagged;
    };
    std::vector<Shard> shards(static_cast<size_t>(workers));
    std::atomic<uint64_t> next{1};

    auto run = [&](int w) {
        Shard& shard = shards[static_cast<size_t>(w)];
        std::vector<Rat> half(static_cast<size_t>(n));
        for (uint64_t c = next.fetch_add(1); c <= total; c = next.fetch_add(1)) {
            VecZ cv(static_cast<size_t>(n));
            for (int j = 0; j < n; j++) {
                cv[static_cast<size_t>(j)] = static_cast<long>((c >> j) & 1);
                half[static_cast<size_t>(j)] = ratq(cv[static_cast<size_t>(j)], 2);
            }
            ClosestSet cs = closest_points_coords(p, half);
            if (cs.degenerate) shard.flagged.push_back(cv);
            if (cs.minimizers.size() == 2) {
                // Relevant pair +-v with v = 2 u - c (u the first minimizer).
                VecZ v(static_cast<size_t>(n));
                for (int j = 0; j < n; j++)
                    v[static_cast<size_t>(j)] = 2 * cs.minimizers[0][static_cast<size_t>(j)] - cv[static_cast<size_t>(j)];
                VecZ neg(static_cast<size_t>(n));
                for (int j = 0; j < n; j++) neg[static_cast<size_t>(j)] = -v[static_cast<size_t>(j)];
                shard.vectors.push_back(std::move(v));
                shard.vectors.push_back(std::move(neg));
            }
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; w++) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }

    RelevantVectorSet out;
    for (auto& s : shards) {
        out.vectors.insert(out.vectors.end(), s.vectors.begin(), s.vectors.end());
        out.flagged_cosets.insert(out.flagged_cosets.end(), s.flagged.begin(), s.flagged.end());
    }
    std::sort(out.vectors.begin(), out.vectors.end());
    std::sort(out.flagged_cosets.begin(), out.flagged_cosets.end());
    return out;
}

PhaseReport phase_condition_i(const std::string& family,
                              const std::vector<std::vector<double>>& param_points,
                              int workers) {
    if (param_points.empty()) throw UsageError("phase test requires at least one point");
    PhaseReport rep;
    for (const auto& pt : param_points) {
        Lattice l = [&]() {
            if (family == "B14") {
                if (pt.size() != 1) throw UsageError("B14 phase point takes one parameter");
                return catalog::b14_f(pt[0]);
            }
            if (family == "B13") {
                if (pt.size() != 2) throw UsageError("B13 phase point takes (a2, a3)");
                return catalog::b13_f(pt[0], pt[1]);
            }
            throw UsageError("unknown parametric family '" + family + "'");
        }();
        Prepared prep(l);
        RelevantVectorSet rv = relevant_vectors(prep, workers);
        rep.uset_hashes.push_back(rv.uset_hash());
        rep.facet_counts.push_back(rv.facet_count());
        rep.degenerate_counts.push_back(static_cast<long>(rv.flagged_cosets.size()));
    }
    rep.stable = true;
    for (const auto& h : rep.uset_hashes)
        if (h != rep.uset_hashes[0]) rep.stable = false;
    for (const auto& c : rep.facet_counts)
        if (c != rep.facet_counts[0]) rep.stable = false;
    return rep;
}

}  // namespace latq
