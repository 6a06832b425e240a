#include "scalekit/permanent.hpp"

#include "scalekit/errors.hpp"

namespace scalekit {

namespace {

Rational ryser(const std::vector<Rational>& entries, int n) {
    if (n == 0) return Rational(1);
    // accumulate over subsets via Gray code; sums[i] = sum_{j in S} a(i,j)
    std::vector<Rational> sums(n, Rational(0));
    Rational total(0);
    unsigned long long gray_prev = 0;
    const unsigned long long count = 1ULL << n;
    for (unsigned long long k = 1; k < count; ++k) {
        const unsigned long long gray = k ^ (k >> 1);
        const unsigned long long diff = gray ^ gray_prev;
        int j = 0;
        while (!((diff >> j) & 1ULL)) ++j;
        const bool added = (gray >> j) & 1ULL;
        for (int i = 0; i < n; ++i) {
            const Rational& v = entries[static_cast<size_t>(i) * n + j];
            if (added)
                sums[i] += v;
            else
                sums[i] -= v;
        }
        gray_prev = gray;

        Rational prod(1);
        for (int i = 0; i < n; ++i) prod *= sums[i];
        const int popcount = __builtin_popcountll(gray);
        if ((n - popcount) % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    return total;
}

}  // namespace

Rational permanent_exact(const NonNegMatrix& a) {
    if (a.n() > 12) throw DimensionTooLarge("permanent_exact limited to n <= 12");
    std::vector<Rational> entries;
    entries.reserve(static_cast<size_t>(a.n()) * a.n());
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) entries.push_back(a(i, j));
    return ryser(entries, a.n());
}

Rational permanent_exact(const std::vector<std::vector<Rational>>& rows) {
    const int n = static_cast<int>(rows.size());
    if (n > 12) throw DimensionTooLarge("permanent_exact limited to n <= 12");
    std::vector<Rational> entries;
    entries.reserve(static_cast<size_t>(n) * n);
    for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != n) throw Error("permanent_exact: matrix not square");
        for (const Rational& v : r) entries.push_back(v);
    }
    return ryser(entries, n);
}

}  // namespace scalekit
