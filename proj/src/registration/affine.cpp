#include "fabric/registration.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace fabric::registration {

AffineTransform AffineTransform::inverse() const {
    const double det = determinant();
    if (!(std::fabs(det) > 1e-12)) {
        throw std::invalid_argument("AffineTransform: singular linear part");
    }
    AffineTransform inv;
    inv.a11 = a22 / det;
    inv.a12 = -a12 / det;
    inv.a21 = -a21 / det;
    inv.a22 = a11 / det;
    inv.tx = -(inv.a11 * tx + inv.a12 * ty);
    inv.ty = -(inv.a21 * tx + inv.a22 * ty);
    return inv;
}

namespace {

double sq_residual(const AffineTransform& t, const Correspondence& c) {
    const Point p = t.apply(c.ref);
    const double dx = p.x - c.test.x, dy = p.y - c.test.y;
    return dx * dx + dy * dy;
}

// Exact affine through three pairs; false if the reference points are collinear.
bool solve_three(const Correspondence& p0, const Correspondence& p1, const Correspondence& p2,
                 AffineTransform& out) {
    const double x1 = p1.ref.x - p0.ref.x, y1 = p1.ref.y - p0.ref.y;
    const double x2 = p2.ref.x - p0.ref.x, y2 = p2.ref.y - p0.ref.y;
    const double det = x1 * y2 - x2 * y1;
    const double scale = (std::fabs(x1) + std::fabs(y1)) * (std::fabs(x2) + std::fabs(y2));
    if (!(std::fabs(det) > 1e-9 * std::max(scale, 1e-300))) return false;
    const double u1 = p1.test.x - p0.test.x, v1 = p1.test.y - p0.test.y;
    const double u2 = p2.test.x - p0.test.x, v2 = p2.test.y - p0.test.y;
    out.a11 = (u1 * y2 - u2 * y1) / det;
    out.a12 = (x1 * u2 - x2 * u1) / det;
    out.a21 = (v1 * y2 - v2 * y1) / det;
    out.a22 = (x1 * v2 - x2 * v1) / det;
    out.tx = p0.test.x - out.a11 * p0.ref.x - out.a12 * p0.ref.y;
    out.ty = p0.test.y - out.a21 * p0.ref.x - out.a22 * p0.ref.y;
    return std::fabs(out.determinant()) > 1e-12;
}

std::vector<std::size_t> inliers_of(const AffineTransform& t, const CorrespondenceSet& pairs, double thr2) {
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (sq_residual(t, pairs[i]) <= thr2) in.push_back(i);
    }
    return in;
}

} // namespace

AffineTransform fit_affine(const CorrespondenceSet& pairs, const std::vector<std::size_t>& subset) {
    if (subset.size() < 3) throw EstimationError("affine fit needs at least 3 pairs");
    // Centered normal equations; the translation follows from the centroids.
    double mx = 0, my = 0, mu = 0, mv = 0;
    for (auto i : subset) {
        mx += pairs[i].ref.x;
        my += pairs[i].ref.y;
        mu += pairs[i].test.x;
        mv += pairs[i].test.y;
    }
    const double n = static_cast<double>(subset.size());
    mx /= n, my /= n, mu /= n, mv /= n;
    double sxx = 0, sxy = 0, syy = 0, sxu = 0, syu = 0, sxv = 0, syv = 0;
    for (auto i : subset) {
        const double x = pairs[i].ref.x - mx, y = pairs[i].ref.y - my;
        const double u = pairs[i].test.x - mu, v = pairs[i].test.y - mv;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sxu += x * u;
        syu += y * u;
        sxv += x * v;
        syv += y * v;
    }
    const double det = sxx * syy - sxy * sxy;
    if (!(det > 1e-9 * std::max(sxx * syy, 1e-300))) {
        throw EstimationError("affine fit: reference points are collinear");
    }
    AffineTransform t;
    t.a11 = (sxu * syy - syu * sxy) / det;
    t.a12 = (syu * sxx - sxu * sxy) / det;
    t.a21 = (sxv * syy - syv * sxy) / det;
    t.a22 = (syv * sxx - sxv * sxy) / det;
    t.tx = mu - t.a11 * mx - t.a12 * my;
    t.ty = mv - t.a21 * mx - t.a22 * my;
    if (!(std::fabs(t.determinant()) > 1e-12)) throw EstimationError("affine fit: singular transform");
    return t;
}

AffineEstimate estimate_affine_ransac(const CorrespondenceSet& pairs, const RansacOptions& opt) {
    if (pairs.size() < 3) throw EstimationError("RANSAC needs at least 3 correspondences");
    const double thr2 = opt.inlier_threshold * opt.inlier_threshold;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);

    bool found = false;
    std::size_t best_count = 0;
    AffineTransform best;
    for (int it = 0; it < opt.iterations; ++it) {
        const std::size_t i0 = pick(rng);
        std::size_t i1 = pick(rng);
        std::size_t i2 = pick(rng);
        if (i0 == i1 || i0 == i2 || i1 == i2) continue;
        AffineTransform cand;
        if (!solve_three(pairs[i0], pairs[i1], pairs[i2], cand)) continue;
        std::size_t count = 0;
        for (const auto& c : pairs) {
            if (sq_residual(cand, c) <= thr2) ++count;
        }
        if (!found || count > best_count) {
            found = true;
            best_count = count;
            best = cand;
        }
    }
    if (!found) {
        // Small sets may never draw three distinct indices at random; try them all.
        for (std::size_t a = 0; a < pairs.size() && !found; ++a)
            for (std::size_t b = a + 1; b < pairs.size() && !found; ++b)
                for (std::size_t c = b + 1; c < pairs.size() && !found; ++c)
                    found = solve_three(pairs[a], pairs[b], pairs[c], best);
        if (!found) throw EstimationError("RANSAC: every sample was degenerate");
    }

    std::vector<std::size_t> in = inliers_of(best, pairs, thr2);
    AffineTransform model = best;
    for (int refit = 0; refit < 5 && in.size() >= 3; ++refit) {
        AffineTransform next;
        try {
            next = fit_affine(pairs, in);
        } catch (const EstimationError&) {
            break;
        }
        std::vector<std::size_t> next_in = inliers_of(next, pairs, thr2);
        model = next;
        if (next_in == in || next_in.size() < 3) break;
        in = std::move(next_in);
    }
    return {model, in};
}

AffineTransform estimate_affine(const CorrespondenceSet& pairs, const RansacOptions& opt) {
    return estimate_affine_ransac(pairs, opt).transform;
}

Registration register_images(const GrayImage& ref, const GrayImage& test, const RegistrationOptions& opt) {
    const auto corners = detect_corners(ref, opt.max_corners, opt.corners);
    Registration reg;
    reg.pairs = match_correspondences(ref, test, corners, opt.matching);
    const AffineEstimate est = estimate_affine_ransac(reg.pairs, opt.ransac);
    reg.transform = est.transform;
    reg.inliers = est.inliers.size();
    return reg;
}

} // namespace fabric::registration
