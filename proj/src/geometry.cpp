#include "beliefstock/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace beliefstock {

namespace {

struct Line { // alpha*x1 + beta*x2 <= c in the (x1, x2) chart
    double alpha, beta, c;
};

} // namespace

std::vector<std::array<double, 3>> simplex_polygon(const std::vector<HalfSpace>& cell) {
    // chart: x3 = 1 - x1 - x2; a.x <= b becomes (a1-a3)x1 + (a2-a3)x2 <= b-a3
    std::vector<Line> lines;
    for (const auto& hs : cell) {
        if (hs.a.size() != 3) return {};
        lines.push_back({hs.a[0] - hs.a[2], hs.a[1] - hs.a[2], hs.b - hs.a[2]});
    }
    lines.push_back({-1.0, 0.0, 0.0}); // x1 >= 0
    lines.push_back({0.0, -1.0, 0.0}); // x2 >= 0
    lines.push_back({1.0, 1.0, 1.0});  // x3 >= 0

    const double tol = 1e-9;
    std::vector<std::array<double, 2>> pts;
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            const double det = lines[i].alpha * lines[j].beta - lines[j].alpha * lines[i].beta;
            if (std::abs(det) < 1e-12) continue;
            const double x1 = (lines[i].c * lines[j].beta - lines[j].c * lines[i].beta) / det;
            const double x2 = (lines[i].alpha * lines[j].c - lines[j].alpha * lines[i].c) / det;
            bool ok = true;
            for (const auto& l : lines)
                if (l.alpha * x1 + l.beta * x2 > l.c + tol) { ok = false; break; }
            if (ok) pts.push_back({x1, x2});
        }
    }
    // dedupe
    std::vector<std::array<double, 2>> uniq;
    for (const auto& p : pts) {
        bool dup = false;
        for (const auto& q : uniq)
            if (std::abs(p[0] - q[0]) < 1e-7 && std::abs(p[1] - q[1]) < 1e-7) { dup = true; break; }
        if (!dup) uniq.push_back(p);
    }
    if (uniq.size() < 3) {
        std::vector<std::array<double, 3>> out;
        for (const auto& p : uniq) out.push_back({p[0], p[1], 1.0 - p[0] - p[1]});
        return out;
    }
    double cx = 0, cy = 0;
    for (const auto& p : uniq) { cx += p[0]; cy += p[1]; }
    cx /= uniq.size();
    cy /= uniq.size();
    std::sort(uniq.begin(), uniq.end(), [&](const auto& a, const auto& b) {
        return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(b[1] - cy, b[0] - cx);
    });
    std::vector<std::array<double, 3>> out;
    for (const auto& p : uniq) out.push_back({p[0], p[1], 1.0 - p[0] - p[1]});
    return out;
}

} // namespace beliefstock
