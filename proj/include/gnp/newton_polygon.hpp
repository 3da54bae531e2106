#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "gnp/arith.hpp"

namespace gnp {

struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
};

/// A lower convex polygon given by its vertices: x strictly increasing,
/// slopes strictly increasing (collinear interior points are never kept).
/// Only `lower_hull` and the checked factory build one.
class NewtonPolygon {
  public:
    NewtonPolygon() = default;

    /// Validates that the vertices already form a lower convex hull.
    static NewtonPolygon from_vertices(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return vertices_; }
    bool empty() const { return vertices_.empty(); }
    const Point& front() const { return vertices_.front(); }
    const Point& back() const { return vertices_.back(); }

    /// Piecewise-linear value at x, for x within the domain.
    Rational at(const Rational& x) const {
        if (vertices_.empty() || x < vertices_.front().x || x > vertices_.back().x) {
            throw std::out_of_range("x outside polygon domain");
        }
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const auto& a = vertices_[i - 1];
            const auto& b = vertices_[i];
            if (x <= b.x) return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
        }
        return vertices_.back().y;
    }

    std::vector<Rational> slopes() const {
        std::vector<Rational> out;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            out.emplace_back((vertices_[i].y - vertices_[i - 1].y) / (vertices_[i].x - vertices_[i - 1].x));
        }
        return out;
    }

    friend bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) { return a.vertices_ == b.vertices_; }

    std::string str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            if (i) out += ",";
            out += "(" + vertices_[i].x.get_str() + "," + vertices_[i].y.get_str() + ")";
        }
        return out + "}";
    }

  private:
    friend NewtonPolygon lower_hull(std::vector<Point> pts);
    explicit NewtonPolygon(std::vector<Point> v) : vertices_(std::move(v)) {}

    std::vector<Point> vertices_;
};

inline std::ostream& operator<<(std::ostream& os, const NewtonPolygon& p) { return os << p.str(); }

namespace detail {

// > 0 when o->a->b turns counter-clockwise.
inline Rational cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

/// Monotone-chain lower hull with exact comparisons. Duplicate x rejected.
inline NewtonPolygon lower_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].x == pts[i - 1].x) throw std::invalid_argument("duplicate x-coordinate in point set");
    }
    std::vector<Point> hull;
    hull.reserve(pts.size());
    for (auto& p : pts) {
        while (hull.size() >= 2 && detail::cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
        hull.push_back(std::move(p));
    }
    return NewtonPolygon(std::move(hull));
}

inline NewtonPolygon NewtonPolygon::from_vertices(std::vector<Point> vertices) {
    NewtonPolygon hull = lower_hull(vertices);
    if (!(hull.vertices_ == vertices)) throw std::invalid_argument("vertices are not a lower convex hull");
    return hull;
}

/// True iff `upper` is pointwise >= `lower` on their common domain.
inline bool lies_over(const NewtonPolygon& upper, const NewtonPolygon& lower) {
    if (upper.empty() || lower.empty() || upper.front().x != lower.front().x || upper.back().x != lower.back().x) {
        throw std::invalid_argument("polygons have different domains");
    }
    std::set<Rational> xs;
    for (const auto& v : upper.vertices()) xs.insert(v.x);
    for (const auto& v : lower.vertices()) xs.insert(v.x);
    return std::all_of(xs.begin(), xs.end(), [&](const Rational& x) { return upper.at(x) >= lower.at(x); });
}

// {"points":[["num/den","num/den"],...]}
inline nlohmann::json to_json(const NewtonPolygon& np) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& v : np.vertices()) pts.push_back(nlohmann::json::array({fraction_string(v.x), fraction_string(v.y)}));
    return nlohmann::json{{"points", std::move(pts)}};
}

inline NewtonPolygon polygon_from_json(const nlohmann::json& j) {
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) {
        pts.push_back({parse_fraction(p.at(0).get<std::string>()), parse_fraction(p.at(1).get<std::string>())});
    }
    return NewtonPolygon::from_vertices(std::move(pts));
}

}  // namespace gnp
