#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sfkit/rational.hpp"

namespace sfkit {

/// Element of SU(2)/Z2 as a sign-normalized unit quaternion: w > 0, or w = 0
/// and the first non-zero of (x,y,z) positive. The normalization makes the
/// two SU(2) lifts of a rotation compare equal.
class Psu2 {
public:
    Psu2() : w_(1), x_(0), y_(0), z_(0) {}
    Psu2(double w, double x, double y, double z) : w_(w), x_(x), y_(y), z_(z) {
        const double n = std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_);
        if (n < 1e-12) throw std::domain_error("Psu2: zero quaternion");
        if (std::abs(n - 1.0) > 1e-12) throw std::domain_error("Psu2: not unit norm");
        w_ /= n; x_ /= n; y_ /= n; z_ /= n;
        canonicalize();
    }

    double w() const { return w_; }
    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    static Psu2 identity() { return Psu2(); }

    Psu2 inverse() const {
        Psu2 g;
        g.w_ = w_; g.x_ = -x_; g.y_ = -y_; g.z_ = -z_;
        g.canonicalize();
        return g;
    }

    /// True if the underlying rotation is the identity (quaternion = +-1).
    bool is_identity(double tol = 1e-9) const {
        return std::sqrt(x_ * x_ + y_ * y_ + z_ * z_) <= tol;
    }

    /// Rotation axis as a unit 3-vector; undefined for the identity.
    std::array<double, 3> axis() const {
        const double n = std::sqrt(x_ * x_ + y_ * y_ + z_ * z_);
        if (n < 1e-14) throw std::domain_error("Psu2::axis: identity rotation");
        return {x_ / n, y_ / n, z_ / n};
    }

    /// Image of a 3-vector under the induced rotation (adjoint action).
    std::array<double, 3> rotate(const std::array<double, 3>& v) const {
        // v' = v + 2w (u x v) + 2 u x (u x v), u = (x,y,z)
        const std::array<double, 3> u{x_, y_, z_};
        auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
            return std::array<double, 3>{a[1] * b[2] - a[2] * b[1],
                                         a[2] * b[0] - a[0] * b[2],
                                         a[0] * b[1] - a[1] * b[0]};
        };
        const auto uv = cross(u, v);
        const auto uuv = cross(u, uv);
        return {v[0] + 2 * (w_ * uv[0] + uuv[0]),
                v[1] + 2 * (w_ * uv[1] + uuv[1]),
                v[2] + 2 * (w_ * uv[2] + uuv[2])};
    }

    bool approx_equal(const Psu2& o, double tol = 1e-9) const {
        return std::abs(w_ - o.w_) <= tol && std::abs(x_ - o.x_) <= tol &&
               std::abs(y_ - o.y_) <= tol && std::abs(z_ - o.z_) <= tol;
    }

    friend Psu2 compose(const Psu2& g, const Psu2& h);

private:
    void canonicalize() {
        double lead = w_;
        if (std::abs(lead) < 1e-15) lead = x_;
        if (std::abs(lead) < 1e-15) lead = y_;
        if (std::abs(lead) < 1e-15) lead = z_;
        if (lead < 0) { w_ = -w_; x_ = -x_; y_ = -y_; z_ = -z_; }
    }

    double w_, x_, y_, z_;
};

/// Group law: quaternion product followed by sign normalization.
inline Psu2 compose(const Psu2& g, const Psu2& h) {
    Psu2 r;
    r.w_ = g.w_ * h.w_ - g.x_ * h.x_ - g.y_ * h.y_ - g.z_ * h.z_;
    r.x_ = g.w_ * h.x_ + g.x_ * h.w_ + g.y_ * h.z_ - g.z_ * h.y_;
    r.y_ = g.w_ * h.y_ - g.x_ * h.z_ + g.y_ * h.w_ + g.z_ * h.x_;
    r.z_ = g.w_ * h.z_ + g.x_ * h.y_ - g.y_ * h.x_ + g.z_ * h.w_;
    const double n = std::sqrt(r.w_ * r.w_ + r.x_ * r.x_ + r.y_ * r.y_ + r.z_ * r.z_);
    r.w_ /= n; r.x_ /= n; r.y_ /= n; r.z_ /= n;
    r.canonicalize();
    return r;
}

/// Smallest n <= max_order with g^n = +-1 in SU(2), i.e. trivial in the
/// quotient; nullopt if no such n within the bound. A numerical verifier
/// with tolerance, not a prover.
inline std::optional<int> element_order(const Psu2& g, int max_order, double tol = 1e-9) {
    if (max_order < 1) throw std::domain_error("element_order: max_order < 1");
    Psu2 h = g;
    for (int n = 1; n <= max_order; ++n) {
        if (h.is_identity(tol)) return n;
        h = compose(h, g);
    }
    return std::nullopt;
}

/// Diagonal model diag(exp(i pi p/q), exp(-i pi p/q)) of the local holonomy
/// around a weight-p/q mark; its order in the quotient is exactly q.
inline Psu2 local_monodromy_model(const ReducedFraction& f) {
    const double alpha =
        static_cast<double>(f.num()) / static_cast<double>(f.den());
    const double half_angle = M_PI * alpha;
    return Psu2(std::cos(half_angle), 0.0, 0.0, std::sin(half_angle));
}

/// Presentation of the orbifold fundamental group: generators a_i, b_i
/// (i <= genus) and loops l_j with [a_1,b_1]...[a_g,b_g] l_1...l_k = 1 and
/// l_j^{q_j} = 1.
struct OrbPresentation {
    int genus = 0;
    std::vector<int> orders;

    void validate() const {
        if (genus < 0) throw std::domain_error("OrbPresentation: genus < 0");
        for (int q : orders)
            if (q < 2) throw std::domain_error("OrbPresentation: order < 2");
    }
};

/// Check a candidate representation given as [a_1, b_1, ..., a_g, b_g,
/// l_1, ..., l_k]: the long relation must hold within tol and each l_j must
/// have order exactly q_j.
inline bool check_relations(const OrbPresentation& pres, const std::vector<Psu2>& rep,
                            double tol = 1e-9) {
    pres.validate();
    const std::size_t expected = 2 * static_cast<std::size_t>(pres.genus) + pres.orders.size();
    if (rep.size() != expected)
        throw std::domain_error("check_relations: expected " + std::to_string(expected) +
                                " elements, got " + std::to_string(rep.size()));
    Psu2 word = Psu2::identity();
    for (int i = 0; i < pres.genus; ++i) {
        const Psu2& a = rep[2 * static_cast<std::size_t>(i)];
        const Psu2& b = rep[2 * static_cast<std::size_t>(i) + 1];
        word = compose(word, compose(compose(a, b), compose(a.inverse(), b.inverse())));
    }
    for (std::size_t j = 0; j < pres.orders.size(); ++j)
        word = compose(word, rep[2 * static_cast<std::size_t>(pres.genus) + j]);
    if (!word.is_identity(tol)) return false;
    for (std::size_t j = 0; j < pres.orders.size(); ++j) {
        const auto n = element_order(rep[2 * static_cast<std::size_t>(pres.genus) + j],
                                     pres.orders[j], tol);
        if (!n || *n != pres.orders[j]) return false;
    }
    return true;
}

/// True iff the induced rotation action fixes no point of the 2-sphere:
/// some non-identity element exists and no axis of one is fixed by all.
inline bool is_irreducible(const std::vector<Psu2>& rep, double tol = 1e-9) {
    if (rep.empty()) throw std::domain_error("is_irreducible: empty representation");
    const Psu2* pivot = nullptr;
    for (const Psu2& g : rep)
        if (!g.is_identity(tol)) { pivot = &g; break; }
    if (!pivot) return false; // trivial representation fixes everything
    const auto v = pivot->axis();
    for (const Psu2& g : rep) {
        const auto gv = g.rotate(v);
        const double d = std::sqrt((gv[0] - v[0]) * (gv[0] - v[0]) +
                                   (gv[1] - v[1]) * (gv[1] - v[1]) +
                                   (gv[2] - v[2]) * (gv[2] - v[2]));
        if (d > tol) return true; // v moved: no common fixed point
    }
    return false;
}

} // namespace sfkit
