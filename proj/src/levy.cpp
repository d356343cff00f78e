#include "doob/levy.hpp"

#include <cmath>

#include "doob/normal.hpp"

namespace doob::bm {

using bits::BitAssignment;
using bits::Position;

namespace {

void check_params(unsigned depth, unsigned q) {
    if (depth > 16) throw DomainError("dyadic depth beyond 16 is not materializable");
    if (q < 2) throw DomainError("bits_per_coeff below 2 is degenerate quantization");
    if (q > 8)
        throw DomainError(
            "bits_per_coeff above 8 would outrun the normal-quantile error budget");
}

// midpoint-displacement scale at dyadic level j (interval length 2^-(j-1))
double level_scale(unsigned j) { return std::pow(2.0, -0.5 * (j + 1)); }

// one row segment from its coefficient array: dyadic values on [0,1]
std::vector<double> segment_values(const std::vector<double>& z, unsigned depth) {
    const std::size_t n = std::size_t{1} << depth;
    std::vector<double> v(n + 1, 0.0);
    v[n] = z[0];
    for (unsigned j = 1; j <= depth; ++j) {
        const std::size_t count = std::size_t{1} << (j - 1);  // coefficients at level j
        const std::size_t stride = n >> (j - 1);              // grid cells per interval
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t lo = i * stride;
            const std::size_t hi = lo + stride;
            const std::size_t mid = lo + stride / 2;
            v[mid] = 0.5 * (v[lo] + v[hi]) + level_scale(j) * z[count + i];
        }
    }
    return v;
}

}  // namespace

GridPath bits_to_path(const BitAssignment& bits, unsigned depth, unsigned q) {
    check_params(depth, q);
    std::uint32_t rows = 1;
    for (const auto& [p, b] : bits.pairs()) rows = std::max(rows, p.row + 1);

    const std::size_t coeffs = std::size_t{1} << depth;
    std::vector<double> increments;
    increments.reserve(rows * coeffs);
    for (std::uint32_t m = 0; m < rows; ++m) {
        std::vector<double> z(coeffs);
        for (std::size_t c = 0; c < coeffs; ++c) {
            std::uint64_t code = 0;
            for (unsigned i = 0; i < q; ++i) {
                const Position p{m, static_cast<std::uint32_t>(c * q + i)};
                const bool bit = bits.defined_at(p) && bits.at(p);
                code = (code << 1) | (bit ? 1u : 0u);
            }
            const double u = (static_cast<double>(code) + 0.5) /
                             static_cast<double>(std::uint64_t{1} << q);
            z[c] = norm_cdf_inv(u);
        }
        const auto v = segment_values(z, depth);
        for (std::size_t i = 1; i < v.size(); ++i) increments.push_back(v[i] - v[i - 1]);
    }
    return GridPath::from_increments(Rational(1, long(1) << depth), 0.0,
                                     std::move(increments));
}

BitAssignment path_to_bits(const GridPath& path, unsigned depth, unsigned q) {
    check_params(depth, q);
    const std::size_t coeffs = std::size_t{1} << depth;
    Rational want_dt(1, long(1) << depth);
    want_dt.canonicalize();
    Rational have_dt = path.dt();
    have_dt.canonicalize();
    if (!(have_dt == want_dt))
        throw DomainError("path grid step does not match the requested depth");
    if (path.steps() == 0 || path.steps() % coeffs != 0)
        throw DomainError("path length is not a whole number of unit rows");
    const std::size_t rows = path.steps() / coeffs;
    const auto& v = path.values();

    BitAssignment out;
    for (std::size_t m = 0; m < rows; ++m) {
        const std::size_t base = m * coeffs;
        const double origin = v[base];
        std::vector<double> z(coeffs);
        z[0] = v[base + coeffs] - origin;
        for (unsigned j = 1; j <= depth; ++j) {
            const std::size_t count = std::size_t{1} << (j - 1);
            const std::size_t stride = coeffs >> (j - 1);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t lo = base + i * stride;
                const std::size_t hi = lo + stride;
                const std::size_t mid = lo + stride / 2;
                z[count + i] = (v[mid] - 0.5 * (v[lo] + v[hi])) / level_scale(j);
            }
        }
        for (std::size_t c = 0; c < coeffs; ++c) {
            const double u = norm_cdf(z[c]);
            auto code = static_cast<long long>(
                std::floor(u * static_cast<double>(std::uint64_t{1} << q)));
            code = std::max<long long>(0, std::min<long long>(code, (1ll << q) - 1));
            for (unsigned i = 0; i < q; ++i) {
                const bool bit = (code >> (q - 1 - i)) & 1;
                out.set(Position{static_cast<std::uint32_t>(m),
                                 static_cast<std::uint32_t>(c * q + i)},
                        bit);
            }
        }
    }
    return out;
}

}  // namespace doob::bm
