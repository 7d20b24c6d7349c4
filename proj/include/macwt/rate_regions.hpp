#pragma once

#include <span>
#include <vector>

#include "macwt/channel_model.hpp"

namespace macwt {

// Mutual-information terms of a channel under fixed independent inputs, in
// bits per channel use.
struct InformationTerms {
    double x1_y_given_x2 = 0;  // I(X1;Y|X2)
    double x2_y_given_x1 = 0;  // I(X2;Y|X1)
    double x12_y = 0;          // I(X1,X2;Y)
    double x1_z = 0;           // I(X1;Z)
    double x2_z = 0;           // I(X2;Z)
};

InformationTerms information_terms(const ChannelSpec& spec, const InputPair& inputs);

struct RatePoint {
    double r1 = 0, r2 = 0;
};

// {(r1,r2) >= 0 : r1 <= cap1, r2 <= cap2, r1 + r2 <= cap_sum}
struct RatePentagon {
    double cap1 = 0, cap2 = 0, cap_sum = 0;

    bool contains(RatePoint p, double tol = 1e-12) const;

    // Corner points in counter-clockwise order starting at the origin,
    // duplicates removed (between 1 and 5 points).
    std::vector<RatePoint> vertices() const;
};

// Per-user caps I(Xi;Y|Xj) - I(Xi;Z), sum cap I(X1,X2;Y) - I(X1;Z) - I(X2;Z),
// each clamped at 0 and the sum cap at cap1 + cap2.
RatePentagon secrecy_pentagon(const InformationTerms& info);
RatePentagon secrecy_pentagon(const ChannelSpec& spec, const InputPair& inputs);

// Ordinary MAC region I(X1;Y|X2), I(X2;Y|X1), I(X1,X2;Y).
RatePentagon mac_pentagon(const InformationTerms& info);
RatePentagon mac_pentagon(const ChannelSpec& spec, const InputPair& inputs);

struct RampConstants {
    int lambda1 = 0;
    int lambda2 = 0;
    int lambda = 0;  // max(lambda1, lambda2) + 1
};

// lambda_i = ceil(I(Xi;Y|Xj) / (I(Xi;Y|Xj) - I(Xi;Z))). Throws
// NoPositiveSecrecyRate when a denominator is not positive.
RampConstants ramp_constants(const InformationTerms& info);
RampConstants ramp_constants(const ChannelSpec& spec, const InputPair& inputs);

// Smallest integer >= x, ignoring floating-point residue below 1e-9.
long long ceil_tolerant(double x);

struct ScheduleEntry {
    int slot = 0;
    double keyed1 = 0, keyed2 = 0;  // keyed-part rate pair
    double keyed_sum_bound = 0;     // min(k * secrecy sum cap, MAC sum cap)
    double overall1 = 0, overall2 = 0;
};

struct RampSchedule {
    int lambda1 = 0, lambda2 = 0, lambda = 0;
    int lambda_star = 0;
    int l = 1;
    RatePentagon secrecy;
    RatePentagon mac;
    std::vector<ScheduleEntry> per_slot;
};

// Entry k holds the keyed-part rates reachable once k messages of secrecy-rate
// key material are available: min(k * secrecy cap, MAC cap) per user and for
// the sum; when the sum bound binds both users are scaled by the same factor.
// overall rates use the given l (entry 1 reports the pure wiretap rate).
RampSchedule slot_schedule(const RatePentagon& secrecy, const RatePentagon& mac, int k_max, int l = 1);
RampSchedule slot_schedule(const ChannelSpec& spec, const InputPair& inputs, int k_max, int l = 1);

// (wiretap_i + l * keyed_i(k)) / (1 + l); k >= 2, l >= 1, else InvalidSlot.
RatePoint overall_rate(const RampSchedule& schedule, int k, int l);

// Convex hull of a finite point set, with a tolerance-aware membership test.
class RateHull {
public:
    explicit RateHull(std::vector<RatePoint> points);

    const std::vector<RatePoint>& points() const noexcept { return points_; }
    const std::vector<RatePoint>& hull() const noexcept { return hull_; }
    bool contains(RatePoint p, double tol = 1e-9) const;

private:
    std::vector<RatePoint> points_;
    std::vector<RatePoint> hull_;  // counter-clockwise, no collinear points
};

// Time sharing between regions: all weighted sums of one vertex from each
// pentagon. Throws WeightMismatch on length mismatch, negative weights or
// weights not summing to 1 within 1e-9.
RateHull time_share(std::span<const RatePentagon> pentagons, std::span<const double> weights);

}  // namespace macwt
