#pragma once

// Independent certificate verification. The checker re-derives everything a
// certificate claims from the record bytes alone: Proth rungs are re-proved
// with a right-to-left modular exponentiation (the builder kernel scans
// left-to-right), general rungs are re-confirmed and compared against the
// unique largest prime their window admits, and ordering, gaps, margins and
// the record count are enforced in one streaming pass.
//
// Certificate grammar (UTF-8, LF line endings, single spaces, canonical
// decimals):
//   LADDER 1 n=<n> delta=<delta> B=<B> S=<S> G=<G> start=<start> end=<end>
//   P <k> <a>        one line per Proth rung, ascending
//   G <N>            one line per general rung, ascending
//   END <rung-count>

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "prothladder/errors.hpp"
#include "prothladder/ladder.hpp"
#include "prothladder/natural.hpp"
#include "prothladder/primality.hpp"
#include "prothladder/proth.hpp"

namespace prothladder::checker {

/// base^exponent mod modulus by right-to-left binary exponentiation; the
/// checker's own kernel, deliberately a different scan strategy from
/// proth::mod_pow.
inline Natural mod_pow_rtl(Natural base, Natural exponent, const Natural& modulus) {
    if (modulus < 2) throw PreconditionError("mod_pow_rtl: modulus must be >= 2");
    Natural r = 1;
    base %= modulus;
    while (exponent > 0) {
        if ((exponent & 1) != 0) r = (r * base) % modulus;
        base = (base * base) % modulus;
        exponent >>= 1;
    }
    return r % modulus;
}

/// Deterministic confirmation of a general prime on the checker's own
/// arithmetic path: trial division by the primes up to 100, then fixed
/// strong-probable-prime witnesses below 2^64 and a base-2 strong test plus
/// a strong Lucas test above, all exponentiated right-to-left.
inline bool confirm_general_prime(const Natural& n) {
    if (n < 2) return false;
    for (std::uint32_t p : trial_division_primes) {
        if (n % p == 0) return n == p;
    }
    if (n < 101 * 101) return true;

    Natural d = n - 1;
    unsigned s = boost::multiprecision::lsb(d);
    d >>= s;
    auto strong = [&](std::uint32_t base) {
        Natural x = mod_pow_rtl(Natural(base), d, n);
        if (x == 1 || x == n - 1) return true;
        for (unsigned r = 1; r < s; ++r) {
            x = (x * x) % n;
            if (x == n - 1) return true;
        }
        return false;
    };

    if (fits_u64(n)) {
        for (std::uint32_t a : spsp_witnesses_u64)
            if (!strong(a)) return false;
        return true;
    }
    if (!strong(2)) return false;
    if (is_perfect_square(n)) return false;
    return strong_lucas_probable_prime(n);
}

struct CertificateHeader {
    unsigned version = 1;
    unsigned n = 1;
    Natural delta;
    std::uint32_t witness_bound = 29;
    std::uint32_t sieve_bound = 16000;
    Natural max_gap;
    Natural start;
    Natural end;

    ladder::LadderParams params() const {
        ladder::LadderParams p;
        p.n = n;
        p.delta = delta;
        p.witness_bound = witness_bound;
        p.sieve_bound = sieve_bound;
        p.max_gap = max_gap;
        return p;
    }
};

inline void write_certificate(std::ostream& os, const ladder::Ladder& lad) {
    os << "LADDER 1 n=" << lad.params.n << " delta=" << to_decimal(lad.params.delta)
       << " B=" << lad.params.witness_bound << " S=" << lad.params.sieve_bound
       << " G=" << to_decimal(lad.params.max_gap) << " start=" << to_decimal(lad.start)
       << " end=" << to_decimal(lad.end) << "\n";
    for (const ladder::Rung& r : lad.rungs) {
        if (r.is_proth())
            os << "P " << to_decimal(r.k) << " " << r.witness << "\n";
        else
            os << "G " << to_decimal(r.value) << "\n";
    }
    os << "END " << lad.rungs.size() << "\n";
}

inline void write_certificate_file(const std::string& path, const ladder::Ladder& lad) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_certificate(os, lad);
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t sp = line.find(' ', pos);
        if (sp == std::string_view::npos) {
            out.push_back(line.substr(pos));
            break;
        }
        out.push_back(line.substr(pos, sp - pos));
        pos = sp + 1;
    }
    return out;
}

inline bool parse_tagged(std::string_view field, std::string_view tag, Natural& out) {
    if (field.size() <= tag.size() || field.substr(0, tag.size()) != tag) return false;
    return parse_natural(field.substr(tag.size()), out);
}

inline bool parse_u32(const Natural& v, std::uint32_t& out) {
    if (v > std::numeric_limits<std::uint32_t>::max()) return false;
    out = static_cast<std::uint32_t>(to_u64(v));
    return true;
}

} // namespace detail

/// Parses "LADDER 1 n=.. delta=.. B=.. S=.. G=.. start=.. end=.." strictly.
inline CertificateHeader parse_header(std::string_view line) {
    auto f = detail::split_fields(line);
    if (f.size() != 9 || f[0] != "LADDER") throw ParseError(1, "malformed header");
    if (f[1] != "1") throw ParseError(1, "unsupported format version");
    CertificateHeader h;
    Natural n_val, b_val, s_val;
    if (!detail::parse_tagged(f[2], "n=", n_val) ||
        !detail::parse_tagged(f[3], "delta=", h.delta) ||
        !detail::parse_tagged(f[4], "B=", b_val) ||
        !detail::parse_tagged(f[5], "S=", s_val) ||
        !detail::parse_tagged(f[6], "G=", h.max_gap) ||
        !detail::parse_tagged(f[7], "start=", h.start) ||
        !detail::parse_tagged(f[8], "end=", h.end))
        throw ParseError(1, "malformed header field");
    std::uint32_t n32;
    if (!detail::parse_u32(n_val, n32) || n32 < 1 || n32 > 1000000)
        throw ParseError(1, "exponent out of range");
    h.n = n32;
    if (!detail::parse_u32(b_val, h.witness_bound) || !detail::parse_u32(s_val, h.sieve_bound))
        throw ParseError(1, "bound out of range");
    return h;
}

enum class FailKind : std::uint8_t {
    none,
    parse,      // grammar or canonical-form violation
    header,     // header fails invariants or expected parameters
    primality,  // a rung fails its primality re-check
    witness,    // a Proth witness is not the first admissible one
    maximality, // a rung is not the largest prime its window admits
    ordering,   // rung values not strictly increasing
    gap,        // consecutive gap exceeds delta
    margin,     // endpoint margins violated
    count       // END count does not match the records seen
};

inline const char* to_string(FailKind k) {
    switch (k) {
    case FailKind::none: return "none";
    case FailKind::parse: return "parse";
    case FailKind::header: return "header";
    case FailKind::primality: return "primality";
    case FailKind::witness: return "witness";
    case FailKind::maximality: return "maximality";
    case FailKind::ordering: return "ordering";
    case FailKind::gap: return "gap";
    case FailKind::margin: return "margin";
    case FailKind::count: return "count";
    }
    return "unknown";
}

struct CheckReport {
    bool pass = false;
    FailKind fail_kind = FailKind::none;
    std::uint64_t fail_line = 0; // 1-based line of the first failure
    std::string detail;

    std::uint64_t rungs = 0;
    std::uint64_t proth_rungs = 0;
    std::uint64_t general_rungs = 0;
    Natural max_gap = 0;
    Natural first_margin = 0;
    Natural last_margin = 0;

    std::string to_keyvalues() const {
        std::ostringstream os;
        os << "pass=" << (pass ? "true" : "false") << "\n"
           << "rungs=" << rungs << "\n"
           << "proth_rungs=" << proth_rungs << "\n"
           << "general_rungs=" << general_rungs << "\n"
           << "max_gap=" << to_decimal(max_gap) << "\n"
           << "first_margin=" << to_decimal(first_margin) << "\n"
           << "last_margin=" << to_decimal(last_margin) << "\n";
        if (!pass)
            os << "fail_kind=" << to_string(fail_kind) << "\n"
               << "fail_line=" << fail_line << "\n"
               << "fail_detail=" << detail << "\n";
        return os.str();
    }
};

/// Expected header values; any field left empty is not compared.
struct Expectation {
    std::optional<unsigned> n;
    std::optional<Natural> delta;
    std::optional<std::uint32_t> witness_bound;
    std::optional<std::uint32_t> sieve_bound;
    std::optional<Natural> max_gap;
    std::optional<Natural> start;
    std::optional<Natural> end;

    static Expectation all_of(const ladder::LadderParams& p, const Natural& start,
                              const Natural& end) {
        Expectation e;
        e.n = p.n;
        e.delta = p.delta;
        e.witness_bound = p.witness_bound;
        e.sieve_bound = p.sieve_bound;
        e.max_gap = p.max_gap;
        e.start = start;
        e.end = end;
        return e;
    }
};

namespace detail {

/// Largest prime strictly below x on the checker's arithmetic path.
inline Natural prev_prime_checked(const Natural& x) {
    if (x < 3) throw PreconditionError("prev_prime_checked: requires x >= 3");
    if (x == 3) return Natural(2);
    Natural c = x - 1;
    if ((c & 1) == 0) --c;
    for (; c >= 3; c -= 2) {
        if (confirm_general_prime(c)) return c;
    }
    return Natural(2);
}

struct RungLine {
    bool is_proth;
    Natural value; // general value, or k for proth
    Natural witness;
};

} // namespace detail

/// Streaming one-pass verification of a certificate file against the header
/// and (optionally) expected parameters. Grammar violations are reported as
/// parse failures; unreadable files throw IoError.
inline CheckReport check_stream(std::istream& is, const Expectation& expected = {}) {
    CheckReport rep;
    std::uint64_t line_no = 0;
    auto fail = [&](FailKind kind, std::uint64_t line, std::string what) {
        rep.pass = false;
        rep.fail_kind = kind;
        rep.fail_line = line;
        rep.detail = std::move(what);
        return rep;
    };

    std::string line;
    if (!std::getline(is, line)) return fail(FailKind::parse, 1, "missing header");
    ++line_no;
    CertificateHeader h;
    try {
        h = parse_header(line);
    } catch (const ParseError& e) {
        return fail(FailKind::parse, e.line, e.what());
    }

    // Header invariants, then the caller's expectations.
    if (h.n < 1 || !(h.delta > pow2(h.n)))
        return fail(FailKind::header, 1, "delta must exceed 2^n");
    if (!(h.delta <= h.max_gap - 2))
        return fail(FailKind::header, 1, "delta must be <= G - 2");
    if (h.witness_bound < 2 || h.sieve_bound < 2)
        return fail(FailKind::header, 1, "bounds must be >= 2");
    if (!(h.start < h.end)) return fail(FailKind::header, 1, "start must precede end");
    if ((expected.n && *expected.n != h.n) || (expected.delta && *expected.delta != h.delta) ||
        (expected.witness_bound && *expected.witness_bound != h.witness_bound) ||
        (expected.sieve_bound && *expected.sieve_bound != h.sieve_bound) ||
        (expected.max_gap && *expected.max_gap != h.max_gap) ||
        (expected.start && *expected.start != h.start) ||
        (expected.end && *expected.end != h.end))
        return fail(FailKind::header, 1, "header does not match expected parameters");

    const std::vector<std::uint32_t> witnesses = proth::witness_primes(h.witness_bound);
    const Natural two_n = pow2(h.n);
    auto rtl = [](const Natural& b, const Natural& e, const Natural& m) {
        return mod_pow_rtl(b, e, m);
    };

    Natural prev;
    bool saw_end = false;
    std::uint64_t declared = 0;

    while (std::getline(is, line)) {
        ++line_no;
        if (saw_end) return fail(FailKind::parse, line_no, "content after END");
        auto f = detail::split_fields(line);

        if (f[0] == "END") {
            if (f.size() != 2) return fail(FailKind::parse, line_no, "malformed END");
            Natural cnt;
            if (!parse_natural(f[1], cnt)) return fail(FailKind::parse, line_no, "malformed END count");
            if (cnt != rep.rungs)
                return fail(FailKind::count, line_no, "END count does not match records");
            declared = rep.rungs;
            saw_end = true;
            continue;
        }

        detail::RungLine r;
        if (f[0] == "P") {
            if (f.size() != 3) return fail(FailKind::parse, line_no, "P record needs k and a");
            if (!parse_natural(f[1], r.value) || !parse_natural(f[2], r.witness))
                return fail(FailKind::parse, line_no, "malformed P record");
            r.is_proth = true;
        } else if (f[0] == "G") {
            if (f.size() != 2) return fail(FailKind::parse, line_no, "G record needs a value");
            if (!parse_natural(f[1], r.value))
                return fail(FailKind::parse, line_no, "malformed G record");
            r.is_proth = false;
        } else {
            return fail(FailKind::parse, line_no, "unknown record type");
        }

        Natural value;
        if (r.is_proth) {
            const Natural& k = r.value;
            if (k < 1 || (k & 1) == 0)
                return fail(FailKind::parse, line_no, "Proth k must be odd and >= 1");
            value = (k << h.n) + 1;
            proth::ProthForm form(k, h.n);
            if (!proth::verify_certificate_with(form, r.witness, rtl))
                return fail(FailKind::primality, line_no, "Proth conditions fail");
            // The builder commits to the first admissible witness.
            bool minimal = false;
            for (std::uint32_t p : witnesses) {
                if (Natural(p) == r.witness) {
                    minimal = true;
                    break;
                }
                if (proth::jacobi(Natural(p), value) == -1)
                    return fail(FailKind::witness, line_no,
                                "witness is not the first non-residue");
            }
            if (!minimal)
                return fail(FailKind::witness, line_no, "witness not in the prime table");
        } else {
            value = r.value;
            if (!confirm_general_prime(value))
                return fail(FailKind::primality, line_no, "general rung is not prime");
        }

        if (rep.rungs == 0) {
            if (value != h.start)
                return fail(FailKind::margin, line_no, "first rung must equal start");
            rep.first_margin = 0;
        } else {
            if (!(value > prev))
                return fail(FailKind::ordering, line_no, "rung values must increase");
            Natural gap = value - prev;
            if (gap > h.delta) return fail(FailKind::gap, line_no, "gap exceeds delta");
            if (gap > rep.max_gap) rep.max_gap = gap;

            const Natural window_top = prev + h.delta;
            if (r.is_proth) {
                // No larger eligible k in the window may be a Proth prime
                // with a witness <= B, or the builder would have chosen it.
                Natural k_hi = (window_top - 2) >> h.n;
                if (k_hi >= two_n) k_hi = two_n - 1;
                if (k_hi >= 1 && (k_hi & 1) == 0) --k_hi;
                for (Natural k2 = k_hi; k2 > r.value; k2 -= 2) {
                    proth::ProthForm cand(k2, h.n);
                    const Natural cval = cand.value();
                    for (std::uint32_t p : witnesses) {
                        if (proth::jacobi(Natural(p), cval) == -1) {
                            if (mod_pow_rtl(Natural(p), (cval - 1) >> 1, cval) == cval - 1)
                                return fail(FailKind::maximality, line_no,
                                            "a larger Proth prime fits the window");
                            break;
                        }
                    }
                }
            } else {
                // A general rung is exactly the largest prime below the
                // window top.
                if (value != detail::prev_prime_checked(window_top))
                    return fail(FailKind::maximality, line_no,
                                "general rung is not the largest prime in the window");
            }
        }

        if (r.is_proth)
            ++rep.proth_rungs;
        else
            ++rep.general_rungs;
        ++rep.rungs;
        prev = std::move(value);
    }

    if (!saw_end) return fail(FailKind::parse, line_no + 1, "missing END record");
    if (declared == 0 && rep.rungs == 0)
        return fail(FailKind::count, line_no, "certificate holds no rungs");

    if (prev > h.end) return fail(FailKind::margin, line_no, "last rung beyond end");
    rep.last_margin = h.end - prev;
    if (rep.last_margin > h.delta)
        return fail(FailKind::margin, line_no, "last rung not within delta of end");

    rep.pass = true;
    return rep;
}

inline CheckReport check_file(const std::string& path, const Expectation& expected = {}) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open certificate: " + path);
    return check_stream(is, expected);
}

/// Full (non-streaming) load of a certificate into a Ladder, for statistics
/// and decomposition work. Grammar errors throw ParseError; no semantic
/// verification happens here.
inline ladder::Ladder load_certificate(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open certificate: " + path);
    std::string line;
    if (!std::getline(is, line)) throw ParseError(1, "missing header");
    CertificateHeader h = parse_header(line);

    ladder::Ladder lad;
    lad.params = h.params();
    lad.start = h.start;
    lad.end = h.end;

    std::uint64_t line_no = 1;
    bool saw_end = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (saw_end) throw ParseError(line_no, "content after END");
        auto f = detail::split_fields(line);
        if (f[0] == "END") {
            Natural cnt;
            if (f.size() != 2 || !parse_natural(f[1], cnt))
                throw ParseError(line_no, "malformed END");
            if (cnt != lad.rungs.size()) throw ParseError(line_no, "END count mismatch");
            saw_end = true;
            continue;
        }
        if (f[0] == "P" && f.size() == 3) {
            Natural k, a;
            if (!parse_natural(f[1], k) || !parse_natural(f[2], a) || a > 0xffffffffu)
                throw ParseError(line_no, "malformed P record");
            lad.rungs.push_back(
                ladder::Rung::proth(k, h.n, static_cast<std::uint32_t>(to_u64(a))));
            ++lad.stats.proth_rungs;
        } else if (f[0] == "G" && f.size() == 2) {
            Natural v;
            if (!parse_natural(f[1], v)) throw ParseError(line_no, "malformed G record");
            lad.rungs.push_back(ladder::Rung::general(v));
            ++lad.stats.general_rungs;
        } else {
            throw ParseError(line_no, "unknown record type");
        }
    }
    if (!saw_end) throw ParseError(line_no + 1, "missing END record");
    lad.stats.max_gap = lad.max_gap();
    return lad;
}

} // namespace prothladder::checker
