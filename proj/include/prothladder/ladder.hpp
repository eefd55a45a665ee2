#pragma once

// Prime ladder construction. From the current rung N0, take the largest
// Proth prime k*2^n + 1 strictly inside (N0, N0 + delta); when the window
// holds none, fall back to the largest general prime below N0 + delta.
// Every candidate must exceed N0, so rungs strictly increase and consecutive
// gaps never reach delta.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "prothladder/errors.hpp"
#include "prothladder/natural.hpp"
#include "prothladder/primality.hpp"
#include "prothladder/proth.hpp"
#include "prothladder/sieve.hpp"

namespace prothladder::ladder {

struct LadderParams {
    unsigned n = 16;
    Natural delta = 1000000;
    std::uint32_t witness_bound = 29;
    std::uint32_t sieve_bound = 16000;
    Natural max_gap = 10000000;      // G: gap budget the ladder must stay under
    Natural segment_width = 100000000; // N-range handled per unit of work

    void validate() const {
        if (n < 1) throw PreconditionError("params: n must be >= 1");
        if (!(delta > pow2(n))) throw PreconditionError("params: delta must exceed 2^n");
        if (!(delta <= max_gap - 2))
            throw PreconditionError("params: delta must be <= max_gap - 2");
        if (witness_bound < 2) throw PreconditionError("params: witness bound must be >= 2");
        if (sieve_bound < 2) throw PreconditionError("params: sieve bound must be >= 2");
    }

    /// Field-wise equality of everything a certificate records; the segment
    /// width is an execution detail and not part of the contract.
    bool same_contract(const LadderParams& o) const {
        return n == o.n && delta == o.delta && witness_bound == o.witness_bound &&
               sieve_bound == o.sieve_bound && max_gap == o.max_gap;
    }
};

struct Rung {
    enum class Kind : std::uint8_t { proth, general };

    Kind kind = Kind::general;
    Natural value;
    Natural k;                 // proth only
    std::uint32_t witness = 0; // proth only
    std::uint64_t nowitness_skips = 0; // candidates skipped while finding this rung

    static Rung proth(Natural k, unsigned n, std::uint32_t witness) {
        Rung r;
        r.kind = Kind::proth;
        r.value = (k << n) + 1;
        r.k = std::move(k);
        r.witness = witness;
        return r;
    }

    static Rung general(Natural value) {
        Rung r;
        r.kind = Kind::general;
        r.value = std::move(value);
        return r;
    }

    bool is_proth() const { return kind == Kind::proth; }
};

struct BuildStats {
    std::uint64_t proth_rungs = 0;
    std::uint64_t general_rungs = 0;
    std::uint64_t nowitness_skips = 0;
    Natural max_gap = 0;
};

struct Ladder {
    LadderParams params;
    Natural start;
    Natural end;
    std::vector<Rung> rungs;
    BuildStats stats;

    const Natural& last_value() const { return rungs.back().value; }

    Natural max_gap() const {
        Natural g = 0;
        for (std::size_t i = 1; i < rungs.size(); ++i) {
            Natural d = rungs[i].value - rungs[i - 1].value;
            if (d > g) g = d;
        }
        return g;
    }
};

/// Largest prime strictly below x, for x >= 3. Downward scan over odd
/// candidates confirmed by the deterministic policy.
inline Natural prev_general_prime(const Natural& x) {
    if (x < 3) throw PreconditionError("prev_general_prime: requires x >= 3");
    if (x == 3) return Natural(2);
    Natural c = x - 1;
    if ((c & 1) == 0) --c;
    for (; c >= 3; c -= 2) {
        if (is_prime(c)) return c;
    }
    return Natural(2);
}

/// Chunked survivor lookup over the progression's k line. Chunks are aligned
/// to fixed multiples of the chunk width, so the sieved bitmaps (and thus
/// every derived result) are independent of the query pattern.
class SieveCursor {
public:
    SieveCursor(unsigned n, sieve::SmallPrimeTable table, std::uint64_t chunk_k = 1 << 17)
        : n_(n), table_(std::move(table)), chunk_k_(chunk_k) {
        if (chunk_k_ < 2) throw PreconditionError("SieveCursor: chunk width too small");
    }

    bool survives(const Natural& k) {
        if (!segment_ || k < segment_->k_lo || k >= segment_->k_hi) {
            Natural base = (k / chunk_k_) * chunk_k_;
            if (base < 1) base = 1;
            segment_ = sieve::sieve_segment(n_, base, (k / chunk_k_ + 1) * chunk_k_, table_);
        }
        return segment_->survives(k);
    }

private:
    unsigned n_;
    sieve::SmallPrimeTable table_;
    Natural chunk_k_;
    std::optional<sieve::SieveSegment> segment_;
};

/// The next rung above the prime N0: the largest Proth prime in the window
/// (N0, N0 + delta), else the largest general prime there. Throws
/// GapExceededError when the window holds no prime at all.
inline Rung next_rung(const Natural& n0, const LadderParams& params, SieveCursor& sv,
                      BuildStats* stats = nullptr) {
    const Natural two_n = pow2(params.n);
    Natural k = (n0 + params.delta - 2) >> params.n; // largest k with k*2^n+1 < N0+delta
    if (k >= two_n) k = two_n - 1;                   // eligibility cap, k < 2^n
    if (k >= 1 && (k & 1) == 0) --k;
    const Natural k_stop = (n0 - 1) >> params.n;     // k <= k_stop means k*2^n+1 <= N0

    std::uint64_t skips = 0;
    for (; k >= 1 && k > k_stop; k -= 2) {
        if (!sv.survives(k)) continue;
        proth::ProthResult r = proth::proth_test(proth::ProthForm(k, params.n), params.witness_bound);
        switch (r.outcome) {
        case proth::ProthOutcome::prime: {
            if (stats) stats->nowitness_skips += skips;
            Rung out = Rung::proth(k, params.n, r.witness);
            out.nowitness_skips = skips;
            return out;
        }
        case proth::ProthOutcome::no_witness:
            ++skips;
            break;
        case proth::ProthOutcome::composite:
            break; // survived sieving on a factor above the sieve bound
        }
    }

    Natural q = prev_general_prime(n0 + params.delta);
    if (q <= n0)
        throw GapExceededError("no prime in (" + to_decimal(n0) + ", " +
                               to_decimal(n0 + params.delta) + ")");
    if (stats) stats->nowitness_skips += skips;
    Rung out = Rung::general(std::move(q));
    out.nowitness_skips = skips;
    return out;
}

/// Builds the ladder from a prime start until the current rung is within
/// delta of end. Deterministic: the result depends only on (start, end,
/// params).
inline Ladder build_ladder(const Natural& start, const Natural& end, const LadderParams& params) {
    params.validate();
    if (!is_prime(start)) throw PreconditionError("build_ladder: start must be prime");
    if (!(start < end)) throw PreconditionError("build_ladder: requires start < end");

    Ladder out;
    out.params = params;
    out.start = start;
    out.end = end;
    out.rungs.push_back(Rung::general(start));
    out.stats.general_rungs = 1;

    SieveCursor sv(params.n, sieve::small_primes(params.sieve_bound));
    Natural cur = start;
    while (cur + params.delta < end) {
        Rung r = next_rung(cur, params, sv, &out.stats);
        Natural gap = r.value - cur;
        if (gap > out.stats.max_gap) out.stats.max_gap = gap;
        if (r.is_proth())
            ++out.stats.proth_rungs;
        else
            ++out.stats.general_rungs;
        cur = r.value;
        out.rungs.push_back(std::move(r));
    }
    return out;
}

/// Concatenates abutting ladder parts, dropping a duplicated boundary rung,
/// and enforces that every boundary gap stays within max_gap.
inline Ladder splice(const std::vector<Ladder>& parts) {
    if (parts.empty()) throw PreconditionError("splice: no parts");
    Ladder out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const Ladder& part = parts[i];
        if (!out.params.same_contract(part.params))
            throw PreconditionError("splice: parts built with different parameters");
        if (out.end != part.start)
            throw PreconditionError("splice: parts do not abut");
        if (part.rungs.empty()) throw PreconditionError("splice: empty part");

        std::size_t from = 0;
        if (part.rungs.front().value == out.last_value()) from = 1;
        if (from < part.rungs.size()) {
            Natural gap = part.rungs[from].value - out.last_value();
            if (gap <= 0)
                throw PreconditionError("splice: rungs out of order at boundary " +
                                        std::to_string(i));
            if (gap > out.params.max_gap)
                throw SpliceGapError(i, "splice: boundary gap " + to_decimal(gap) +
                                            " exceeds max gap at boundary " + std::to_string(i));
        }
        for (std::size_t j = from; j < part.rungs.size(); ++j)
            out.rungs.push_back(part.rungs[j]);
        out.stats.nowitness_skips += part.stats.nowitness_skips;
        out.end = part.end;
    }

    // Recompute value-derived statistics over the joined rung list.
    out.stats.proth_rungs = 0;
    out.stats.general_rungs = 0;
    out.stats.max_gap = out.max_gap();
    for (const Rung& r : out.rungs) {
        if (r.is_proth())
            ++out.stats.proth_rungs;
        else
            ++out.stats.general_rungs;
    }
    return out;
}

/// Seam-free concatenation of speculatively built parts. The sequential
/// chain is walked forward from the previous part's last rung until it
/// lands on a rung the next part also produced; from that point on the two
/// chains coincide (each rung depends only on its predecessor), so the
/// part's tail is adopted verbatim. The result is byte-identical to one
/// sequential build over the whole range, whatever the segmentation.
inline Ladder stitch(const std::vector<Ladder>& parts) {
    if (parts.empty()) throw PreconditionError("stitch: no parts");
    Ladder out = parts.front();
    if (parts.size() > 1) {
        SieveCursor sv(out.params.n, sieve::small_primes(out.params.sieve_bound));
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const Ladder& part = parts[i];
            if (!out.params.same_contract(part.params))
                throw PreconditionError("stitch: parts built with different parameters");
            if (out.end != part.start)
                throw PreconditionError("stitch: parts do not abut");

            const std::vector<Rung>& chain = part.rungs;
            Natural cur = out.last_value();
            while (cur + out.params.delta < part.end) {
                // Binary search for cur among the part's rung values.
                std::size_t lo = 0, hi = chain.size();
                while (lo < hi) {
                    std::size_t mid = lo + (hi - lo) / 2;
                    if (chain[mid].value < cur)
                        lo = mid + 1;
                    else
                        hi = mid;
                }
                if (lo < chain.size() && chain[lo].value == cur) {
                    for (std::size_t j = lo + 1; j < chain.size(); ++j)
                        out.rungs.push_back(chain[j]);
                    break; // the part stopped exactly where this walk would
                }
                out.rungs.push_back(next_rung(cur, out.params, sv));
                cur = out.last_value();
            }
            out.end = part.end;
        }
    }

    out.stats = BuildStats{};
    out.stats.max_gap = out.max_gap();
    for (const Rung& r : out.rungs) {
        if (r.is_proth())
            ++out.stats.proth_rungs;
        else
            ++out.stats.general_rungs;
        out.stats.nowitness_skips += r.nowitness_skips;
    }
    return out;
}

} // namespace prothladder::ladder
