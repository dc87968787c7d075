#ifndef DIVEXT_COMMON_HPP
#define DIVEXT_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace divext {

// Precondition violations (bad user input, contract breaches).
inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Internal invariants; a failure here is a bug, not bad input.
inline void check(bool cond, const std::string& msg) {
    if (!cond) throw std::logic_error("internal invariant violated: " + msg);
}

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a, used for config hashes in reports.
inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t ipow_u64(uint64_t b, uint64_t e) {
    uint64_t r = 1;
    while (e--) {
        check(b == 0 || r <= UINT64_MAX / (b ? b : 1), "ipow overflow");
        r *= b;
    }
    return r;
}

inline uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int64_t gcd_i64(int64_t a, int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    return static_cast<int64_t>(gcd_u64(static_cast<uint64_t>(a), static_cast<uint64_t>(b)));
}

// a*b mod m without overflow for m up to 2^63.
inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace divext

#endif
