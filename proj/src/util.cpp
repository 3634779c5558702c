#include "ariel/error.hpp"
#include "ariel/numeric.hpp"
#include "ariel/random.hpp"

#include <cmath>
#include <limits>

namespace ariel {

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) {
    // splitmix64 finalizer over (master, hash(stage))
    std::uint64_t z = master ^ fnv1a64(stage);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || r.set_str(text, 10) != 0)
        throw InvalidArgument("not a rational number: '" + text + "'");
    if (r.get_den() == 0) throw InvalidArgument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

double to_double(const Rational& r) {
    double d = r.get_d();
    if (!std::isfinite(d)) return d;
    double best = d;
    Rational best_err = abs(exact_rational(d) - r);
    for (double c : {std::nextafter(d, -INFINITY), std::nextafter(d, INFINITY)}) {
        Rational err = abs(exact_rational(c) - r);
        if (err < best_err) {
            best = c;
            best_err = err;
        }
    }
    return best;
}

}  // namespace ariel
