#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnp/arith.hpp"
#include "gnp/genpoly.hpp"
#include "gnp/newton_polygon.hpp"

namespace gnp {

/// Vertices (n, n(n+1)/(2d)) for n = 0..d-1.
inline NewtonPolygon hodge_polygon(std::int64_t d) {
    require(d >= 2, "hodge polygon needs d >= 2");
    std::vector<Point> pts;
    for (std::int64_t n = 0; n <= d - 1; ++n) pts.push_back({Rational(n), make_rational(n * (n + 1), 2 * d)});
    return NewtonPolygon::from_vertices(std::move(pts));
}

/// n(n+1)/(2d) + (1 - s/d) k / (p - 1)
inline Rational predicted_vertex_height(std::int64_t s, std::int64_t d, std::int64_t p, std::int64_t n, std::int64_t k) {
    return make_rational(n * (n + 1), 2 * d) + make_rational(d - s, d) * make_rational(k, p - 1);
}

struct GnpPrediction {
    std::int64_t s = 0, d = 0, r = 0, p = 0;
    /// Height of the vertex over x = n for n = 0..d-1; empty where k_{r,n}
    /// is undetermined.
    std::vector<std::optional<Rational>> heights;
    std::vector<LowestTerm> lowest;
    std::optional<Integer> bound_N;  // absent when some n is undetermined
    bool valid = false;              // p > N and p = r mod d
    bool convex = false;             // the vertices form a lower convex chain

    bool complete() const {
        for (const auto& h : heights) {
            if (!h) return false;
        }
        return true;
    }

    /// The predicted polygon; requires a complete prediction.
    NewtonPolygon polygon() const {
        if (!complete()) throw std::logic_error("prediction is incomplete");
        std::vector<Point> pts;
        for (std::size_t n = 0; n < heights.size(); ++n) pts.push_back({Rational(static_cast<long>(n)), *heights[n]});
        return lower_hull(std::move(pts));
    }
};

/// The generic polygon predicted from the lowest terms of H_r. For r = 1 the
/// prediction is the Hodge polygon and `lowest` is ignored.
inline GnpPrediction predict_gnp(std::int64_t s, std::int64_t d, std::int64_t r, std::int64_t p,
                                 const std::vector<LowestTerm>& lowest) {
    detail::check_generators(s, d);
    require(is_prime(static_cast<std::uint64_t>(p)), std::to_string(p) + " is not prime");
    require(pos_mod(p, d) == r, "p=" + std::to_string(p) + " is not congruent to r=" + std::to_string(r) + " mod d");
    GnpPrediction out;
    out.s = s;
    out.d = d;
    out.r = r;
    out.p = p;
    out.heights.emplace_back(Rational(0));
    if (r == 1) {
        for (std::int64_t n = 1; n <= d - 1; ++n) out.heights.emplace_back(make_rational(n * (n + 1), 2 * d));
        out.bound_N = Integer(s * (d - 1));
        out.valid = true;
        out.convex = true;
        return out;
    }
    check_residue(s, d, r);
    require(static_cast<std::int64_t>(lowest.size()) == d - 1, "need one lowest term per n = 1..d-1");
    out.lowest = lowest;
    bool all_found = true;
    for (const auto& t : lowest) {
        if (t.found()) {
            out.heights.emplace_back(predicted_vertex_height(s, d, p, t.n, *t.k));
        } else {
            out.heights.emplace_back(std::nullopt);
            all_found = false;
        }
    }
    if (all_found) {
        out.bound_N = bound_N(s, d, r, lowest);
        out.valid = Integer(p) > *out.bound_N;
        // every vertex must survive the hull with strictly increasing slopes
        out.convex = out.polygon().vertices().size() == static_cast<std::size_t>(d);
    }
    return out;
}

inline GnpPrediction predict_gnp(std::int64_t s, std::int64_t d, std::int64_t p,
                                 std::optional<std::int64_t> k_cap = std::nullopt) {
    const std::int64_t r = pos_mod(p, d);
    if (r == 1) return predict_gnp(s, d, r, p, {});
    return predict_gnp(s, d, r, p, lowest_terms(s, d, r, k_cap));
}

/// np over gnp over hp, all ending at the same point.
inline bool check_chain(const NewtonPolygon& np, const NewtonPolygon& gnp, const NewtonPolygon& hp) {
    const bool over = lies_over(np, gnp) && lies_over(gnp, hp);  // throws on domain mismatch
    return over && np.back() == gnp.back() && gnp.back() == hp.back();
}

}  // namespace gnp
