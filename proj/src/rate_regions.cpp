#include "macwt/rate_regions.hpp"

#include <algorithm>
#include <cmath>

#include "macwt/error.hpp"

namespace macwt {

InformationTerms information_terms(const ChannelSpec& spec, const InputPair& inputs)
{
    const JointPmf p = joint_law(spec, inputs);
    InformationTerms t;
    t.x1_y_given_x2 = conditional_mutual_information(p, {"X1"}, {"Y"}, {"X2"});
    t.x2_y_given_x1 = conditional_mutual_information(p, {"X2"}, {"Y"}, {"X1"});
    t.x12_y = mutual_information(p, {"X1", "X2"}, {"Y"});
    t.x1_z = mutual_information(p, {"X1"}, {"Z"});
    t.x2_z = mutual_information(p, {"X2"}, {"Z"});
    return t;
}

bool RatePentagon::contains(RatePoint p, double tol) const
{
    return p.r1 >= -tol && p.r2 >= -tol && p.r1 <= cap1 + tol && p.r2 <= cap2 + tol && p.r1 + p.r2 <= cap_sum + tol;
}

std::vector<RatePoint> RatePentagon::vertices() const
{
    const double a = std::min(cap1, cap_sum);
    const double b = std::min(cap2, cap_sum);
    const RatePoint corners[] = {
        {0.0, 0.0},
        {a, 0.0},
        {a, std::min(b, cap_sum - a)},
        {std::min(a, cap_sum - b), b},
        {0.0, b},
    };
    std::vector<RatePoint> out;
    for (const auto& c : corners) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const RatePoint& q) { return q.r1 == c.r1 && q.r2 == c.r2; });
        if (!dup) out.push_back(c);
    }
    return out;
}

RatePentagon secrecy_pentagon(const InformationTerms& info)
{
    RatePentagon p;
    p.cap1 = std::max(0.0, info.x1_y_given_x2 - info.x1_z);
    p.cap2 = std::max(0.0, info.x2_y_given_x1 - info.x2_z);
    p.cap_sum = std::max(0.0, std::min(p.cap1 + p.cap2, info.x12_y - info.x1_z - info.x2_z));
    return p;
}

RatePentagon secrecy_pentagon(const ChannelSpec& spec, const InputPair& inputs)
{
    return secrecy_pentagon(information_terms(spec, inputs));
}

RatePentagon mac_pentagon(const InformationTerms& info)
{
    return {info.x1_y_given_x2, info.x2_y_given_x1, info.x12_y};
}

RatePentagon mac_pentagon(const ChannelSpec& spec, const InputPair& inputs)
{
    return mac_pentagon(information_terms(spec, inputs));
}

long long ceil_tolerant(double x)
{
    return static_cast<long long>(std::ceil(x - 1e-9));
}

RampConstants ramp_constants(const InformationTerms& info)
{
    auto lambda_for = [](double bob, double eve, int user) {
        const double denom = bob - eve;
        if (!(denom > 0.0))
            throw Error(ErrorCode::NoPositiveSecrecyRate,
                        "user " + std::to_string(user) + " has I(X;Y|X') - I(X;Z) = " + std::to_string(denom));
        return static_cast<int>(std::max(1LL, ceil_tolerant(bob / denom)));
    };
    RampConstants rc;
    rc.lambda1 = lambda_for(info.x1_y_given_x2, info.x1_z, 1);
    rc.lambda2 = lambda_for(info.x2_y_given_x1, info.x2_z, 2);
    rc.lambda = std::max(rc.lambda1, rc.lambda2) + 1;
    return rc;
}

RampConstants ramp_constants(const ChannelSpec& spec, const InputPair& inputs)
{
    return ramp_constants(information_terms(spec, inputs));
}

namespace {

void require_positive_secrecy(const RatePentagon& s)
{
    if (!(s.cap1 > 0.0) || !(s.cap2 > 0.0) || !(s.cap_sum > 0.0))
        throw Error(ErrorCode::NoPositiveSecrecyRate, "secrecy pentagon has a zero cap");
}

// Moves the operating point from prev toward the per-user demand, scaling both
// users' increments by one common factor so the sum stays within bound.
RatePoint advance(RatePoint prev, RatePoint demand, double sum_bound)
{
    const double d1 = demand.r1 - prev.r1;
    const double d2 = demand.r2 - prev.r2;
    const double room = sum_bound - (prev.r1 + prev.r2);
    double f = 1.0;
    if (d1 + d2 > room) f = (d1 + d2) > 0.0 ? std::max(0.0, room) / (d1 + d2) : 0.0;
    return {prev.r1 + f * d1, prev.r2 + f * d2};
}

}  // namespace

RampSchedule slot_schedule(const RatePentagon& secrecy, const RatePentagon& mac, int k_max, int l)
{
    if (k_max < 1) throw Error(ErrorCode::InvalidSlot, "k_max must be at least 1");
    if (l < 1) throw Error(ErrorCode::InvalidConfig, "l must be at least 1");
    require_positive_secrecy(secrecy);

    RampSchedule sch;
    sch.secrecy = secrecy;
    sch.mac = mac;
    sch.l = l;
    sch.lambda1 = static_cast<int>(std::max(1LL, ceil_tolerant(mac.cap1 / secrecy.cap1)));
    sch.lambda2 = static_cast<int>(std::max(1LL, ceil_tolerant(mac.cap2 / secrecy.cap2)));
    sch.lambda = std::max(sch.lambda1, sch.lambda2) + 1;

    // every term of the min-formulas is saturated from k_sat on
    const int k_sat = std::max({sch.lambda1, sch.lambda2,
                                static_cast<int>(std::max(1LL, ceil_tolerant(mac.cap_sum / secrecy.cap_sum)))});

    std::vector<RatePoint> pairs;
    std::vector<double> bounds;
    RatePoint prev{0.0, 0.0};
    const int horizon = std::max(k_max, k_sat);
    for (int k = 1; k <= horizon; ++k) {
        const RatePoint demand{std::min(k * secrecy.cap1, mac.cap1), std::min(k * secrecy.cap2, mac.cap2)};
        const double bound = std::min(k * secrecy.cap_sum, mac.cap_sum);
        prev = advance(prev, demand, bound);
        pairs.push_back(prev);
        bounds.push_back(bound);
    }
    const RatePoint final_pair = pairs[static_cast<std::size_t>(k_sat - 1)];
    sch.lambda_star = k_sat;
    for (int k = 1; k <= k_sat; ++k) {
        const auto& p = pairs[static_cast<std::size_t>(k - 1)];
        if (std::abs(p.r1 - final_pair.r1) <= 1e-12 && std::abs(p.r2 - final_pair.r2) <= 1e-12) {
            sch.lambda_star = k;
            break;
        }
    }

    for (int k = 1; k <= k_max; ++k) {
        const auto& p = pairs[static_cast<std::size_t>(k - 1)];
        ScheduleEntry e;
        e.slot = k;
        e.keyed1 = p.r1;
        e.keyed2 = p.r2;
        e.keyed_sum_bound = bounds[static_cast<std::size_t>(k - 1)];
        e.overall1 = secrecy.cap1;
        e.overall2 = secrecy.cap2;
        sch.per_slot.push_back(e);
    }
    for (int k = 2; k <= k_max; ++k) {
        const RatePoint o = overall_rate(sch, k, l);
        sch.per_slot[static_cast<std::size_t>(k - 1)].overall1 = o.r1;
        sch.per_slot[static_cast<std::size_t>(k - 1)].overall2 = o.r2;
    }
    return sch;
}

RampSchedule slot_schedule(const ChannelSpec& spec, const InputPair& inputs, int k_max, int l)
{
    const InformationTerms info = information_terms(spec, inputs);
    ramp_constants(info);
    return slot_schedule(secrecy_pentagon(info), mac_pentagon(info), k_max, l);
}

RatePoint overall_rate(const RampSchedule& schedule, int k, int l)
{
    if (k < 2) throw Error(ErrorCode::InvalidSlot, "slot 1 carries no keyed part");
    if (static_cast<std::size_t>(k) > schedule.per_slot.size())
        throw Error(ErrorCode::InvalidSlot, "slot " + std::to_string(k) + " beyond the computed schedule");
    if (l < 1) throw Error(ErrorCode::InvalidSlot, "l must be a positive integer");
    const auto& e = schedule.per_slot[static_cast<std::size_t>(k - 1)];
    const double ld = static_cast<double>(l);
    return {(schedule.secrecy.cap1 + ld * e.keyed1) / (1.0 + ld), (schedule.secrecy.cap2 + ld * e.keyed2) / (1.0 + ld)};
}

namespace {

double cross(const RatePoint& o, const RatePoint& a, const RatePoint& b)
{
    return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

// Andrew's monotone chain
std::vector<RatePoint> convex_hull(std::vector<RatePoint> pts)
{
    std::sort(pts.begin(), pts.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2); });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const RatePoint& a, const RatePoint& b) { return a.r1 == b.r1 && a.r2 == b.r2; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<RatePoint> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double segment_distance(const RatePoint& p, const RatePoint& a, const RatePoint& b)
{
    const double dx = b.r1 - a.r1, dy = b.r2 - a.r2;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = a.r1 + t * dx - p.r1, ey = a.r2 + t * dy - p.r2;
    return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

RateHull::RateHull(std::vector<RatePoint> points) : points_(std::move(points)), hull_(convex_hull(points_)) {}

bool RateHull::contains(RatePoint p, double tol) const
{
    if (hull_.empty()) return false;
    if (hull_.size() == 1) return segment_distance(p, hull_[0], hull_[0]) <= tol;
    if (hull_.size() == 2) return segment_distance(p, hull_[0], hull_[1]) <= tol;
    for (std::size_t i = 0; i < hull_.size(); ++i) {
        const auto& a = hull_[i];
        const auto& b = hull_[(i + 1) % hull_.size()];
        const double len = std::hypot(b.r1 - a.r1, b.r2 - a.r2);
        if (cross(a, b, p) < -tol * len) return false;
    }
    return true;
}

RateHull time_share(std::span<const RatePentagon> pentagons, std::span<const double> weights)
{
    if (pentagons.empty() || pentagons.size() != weights.size())
        throw Error(ErrorCode::WeightMismatch, "need one weight per pentagon");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error(ErrorCode::WeightMismatch, "weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::WeightMismatch, "weights must sum to 1");

    // Minkowski sum of the scaled regions; pruning to the hull after each step
    // keeps the point set small without changing the result.
    std::vector<RatePoint> acc{{0.0, 0.0}};
    for (std::size_t j = 0; j < pentagons.size(); ++j) {
        std::vector<RatePoint> next;
        for (const auto& a : acc)
            for (const auto& v : pentagons[j].vertices())
                next.push_back({a.r1 + weights[j] * v.r1, a.r2 + weights[j] * v.r2});
        acc = j + 1 < pentagons.size() ? convex_hull(std::move(next)) : std::move(next);
    }
    return RateHull(std::move(acc));
}

}  // namespace macwt
