#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfkit/hj.hpp"
#include "sfkit/rational.hpp"

namespace sfkit {

/// Primitive lattice vector in the plane.
struct Ray {
    Int x, y;

    Ray(Int px, Int py) : x(std::move(px)), y(std::move(py)) {
        if (x == 0 && y == 0)
            throw std::domain_error("Ray: zero vector");
        if (boost::multiprecision::gcd(abs(x), abs(y)) != 1)
            throw std::domain_error("Ray: not primitive: " + to_string());
    }
    Ray(long long px, long long py) : Ray(Int(px), Int(py)) {}

    bool operator==(const Ray& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Ray& o) const { return !(*this == o); }

    std::string to_string() const { return "(" + x.str() + "," + y.str() + ")"; }
};

/// Determinant in the fan's clockwise orientation: positive iff v lies
/// strictly clockwise of u (going from (0,1) through x > 0 towards (0,-1)).
inline Int cone_det(const Ray& u, const Ray& v) { return u.y * v.x - u.x * v.y; }

/// Chain of self-intersection numbers, listed along the fiber.
using CurveChain = std::vector<Int>;

/// "-2 ─ -1 ─ -2" rendering used by the command-line diagrams.
inline std::string render_chain(const CurveChain& chain) {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i) out += " ─ ";
        out += chain[i].str();
    }
    return out;
}

/// Ordered list of primitive rays, clockwise from (0,1) to (0,-1); each
/// adjacent pair spans a two-dimensional cone.
class LatticeFan {
public:
    explicit LatticeFan(std::vector<Ray> rays) : rays_(std::move(rays)) {
        if (rays_.size() < 3)
            throw std::domain_error("LatticeFan: need at least 3 rays");
        if (!(rays_.front() == Ray(0, 1)) || !(rays_.back() == Ray(0, -1)))
            throw std::domain_error("LatticeFan: must run from (0,1) to (0,-1)");
        for (std::size_t i = 0; i + 1 < rays_.size(); ++i)
            if (cone_det(rays_[i], rays_[i + 1]) <= 0)
                throw std::domain_error("LatticeFan: rays not in strict clockwise order at index " +
                                        std::to_string(i));
    }

    const std::vector<Ray>& rays() const { return rays_; }
    std::size_t size() const { return rays_.size(); }
    const Ray& operator[](std::size_t i) const { return rays_[i]; }

    bool operator==(const LatticeFan& o) const { return rays_ == o.rays_; }

    /// Every adjacent cone spanned by unimodular pairs (smooth toric surface).
    bool is_smooth() const {
        for (std::size_t i = 0; i + 1 < rays_.size(); ++i)
            if (cone_det(rays_[i], rays_[i + 1]) != 1) return false;
        return true;
    }

private:
    std::vector<Ray> rays_;
};

/// Fan of the smooth local model: cones spanned by (0,1),(1,0) and (1,0),(0,-1).
inline LatticeFan base_fan() {
    return LatticeFan({Ray(0, 1), Ray(1, 0), Ray(0, -1)});
}

/// Fan of the cyclic-quotient model with singularity of type (p,q): the middle
/// ray is (q,-p).
inline LatticeFan orbifold_fan(const ReducedFraction& f) {
    return LatticeFan({Ray(0, 1), Ray(f.den(), -f.num()), Ray(0, -1)});
}

/// Minimal-resolution fan: (0,1), v_1..v_k, (q,-p), v'_l..v'_1, (0,-1) where
/// v_j = (m_j, -n_j) from the convergents of p/q and v'_j = (m'_j, n'_j - m'_j)
/// from the convergents of (q-p)/q. Every adjacent pair is unimodular.
inline LatticeFan resolution_fan(const ReducedFraction& f) {
    std::vector<Ray> rays;
    rays.emplace_back(0, 1);
    for (const auto& [m, n] : approximants(f))
        rays.emplace_back(m, -n); // v_1..v_{k+1}, ends at (q,-p)
    const auto comp = approximants(f.complement_fraction());
    for (std::size_t i = comp.size(); i-- > 1;) { // skip v'_{l+1} = (q,-p), already present
        const auto& [m, n] = comp[i - 1];
        rays.emplace_back(m, n - m);
    }
    rays.emplace_back(0, -1);
    return LatticeFan(std::move(rays));
}

/// Self-intersection of the curve attached to each interior ray w_j, read off
/// from w_{j-1} + w_{j+1} = e_j * w_j. A neighbor sum that is not an integer
/// multiple of w_j means the rays do not describe a chain of smooth rational
/// curves.
inline CurveChain self_intersections(const LatticeFan& fan) {
    CurveChain out;
    const auto& r = fan.rays();
    for (std::size_t j = 1; j + 1 < r.size(); ++j) {
        const Int sx = r[j - 1].x + r[j + 1].x;
        const Int sy = r[j - 1].y + r[j + 1].y;
        Int c;
        if (r[j].x != 0) {
            if (sx % r[j].x != 0)
                throw std::domain_error("self_intersections: not a chain of smooth rational curves at ray " +
                                        r[j].to_string());
            c = sx / r[j].x;
        } else {
            if (sy % r[j].y != 0)
                throw std::domain_error("self_intersections: not a chain of smooth rational curves at ray " +
                                        r[j].to_string());
            c = sy / r[j].y;
        }
        if (c * r[j].x != sx || c * r[j].y != sy)
            throw std::domain_error("self_intersections: not a chain of smooth rational curves at ray " +
                                    r[j].to_string());
        out.push_back(-c);
    }
    return out;
}

/// Insert rays[i] + rays[i+1] between positions i and i+1 (blow-up of the
/// corresponding cone's fixed point).
inline LatticeFan stellar_subdivide(const LatticeFan& fan, std::size_t i) {
    if (i + 1 >= fan.size())
        throw std::out_of_range("stellar_subdivide: cone index " + std::to_string(i) + " out of range");
    std::vector<Ray> rays = fan.rays();
    Ray inserted(rays[i].x + rays[i + 1].x, rays[i].y + rays[i + 1].y);
    rays.insert(rays.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(inserted));
    return LatticeFan(std::move(rays));
}

struct BlowDownStep {
    LatticeFan fan;    // fan after the deletion
    Ray removed;       // the deleted ray (a (-1)-curve)
    std::size_t index; // its position in the fan before deletion
};

/// Delete one (-1)-ray: among all interior rays equal to the sum of their
/// neighbors, the one with the largest x-coordinate. A tie in x happens only
/// between (1,0) and (1,-1); (1,-1) is deleted so the terminal fan keeps the
/// (1,0) ray of base_fan(). Returns nullopt when the fan is minimal.
inline std::optional<BlowDownStep> blow_down_step(const LatticeFan& fan) {
    const auto& r = fan.rays();
    std::optional<std::size_t> best;
    for (std::size_t j = 1; j + 1 < r.size(); ++j) {
        if (r[j - 1].x + r[j + 1].x != r[j].x) continue;
        if (r[j - 1].y + r[j + 1].y != r[j].y) continue;
        if (!best || r[j].x > r[*best].x ||
            (r[j].x == r[*best].x && r[j].y < r[*best].y))
            best = j;
    }
    if (!best) return std::nullopt;
    std::vector<Ray> rays = fan.rays();
    Ray removed = rays[*best];
    rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(*best));
    return BlowDownStep{LatticeFan(std::move(rays)), std::move(removed), *best};
}

struct BlowDownResult {
    std::vector<Ray> removed;         // deletion order
    std::vector<std::size_t> indices; // position of each deleted ray at deletion time
    LatticeFan final_fan;
};

/// Repeat blow_down_step until the fan is minimal. Starting from a
/// resolution fan this takes exactly k + l steps and lands on base_fan().
inline BlowDownResult blow_down_all(LatticeFan fan) {
    BlowDownResult out{{}, {}, fan};
    while (auto step = blow_down_step(out.final_fan)) {
        out.removed.push_back(step->removed);
        out.indices.push_back(step->index);
        out.final_fan = std::move(step->fan);
    }
    return out;
}

/// Whether the monomial u^a v^b is invariant under the cyclic group generator
/// diag(w, w^p), w = exp(2*pi*i/q): true iff a + p*b = 0 (mod q).
inline bool is_gamma_invariant(const ReducedFraction& f, const Int& a, const Int& b) {
    if (a < 0 || b < 0)
        throw std::domain_error("is_gamma_invariant: exponents must be non-negative");
    return (a + f.num() * b) % f.den() == 0;
}

} // namespace sfkit
