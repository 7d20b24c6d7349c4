#include "macwt/info_measures.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "macwt/error.hpp"

namespace macwt {

JointPmf::JointPmf(std::vector<Axis> axes, std::vector<double> mass)
    : axes_(std::move(axes)), mass_(std::move(mass))
{
    std::set<std::string> names;
    std::size_t cells = 1;
    for (const auto& ax : axes_) {
        if (ax.size == 0) throw Error(ErrorCode::EmptyAlphabet, "axis '" + ax.name + "' has size 0");
        if (!names.insert(ax.name).second)
            throw Error(ErrorCode::InvalidDistribution, "duplicate axis name '" + ax.name + "'");
        cells *= ax.size;
    }
    if (mass_.size() != cells)
        throw Error(ErrorCode::DimensionMismatch,
                    "tensor has " + std::to_string(mass_.size()) + " cells, axes imply " + std::to_string(cells));
    double total = 0.0;
    for (double m : mass_) {
        if (!(m >= 0.0)) throw Error(ErrorCode::NegativeProbability, "negative or NaN mass in joint pmf");
        total += m;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw Error(ErrorCode::NonStochastic, "joint pmf sums to " + std::to_string(total));
}

std::size_t JointPmf::axis_index(const std::string& name) const
{
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return i;
    throw Error(ErrorCode::UnknownAxis, "no axis named '" + name + "'");
}

std::vector<double> JointPmf::marginal(const AxisList& keep) const
{
    const std::size_t r = axes_.size();
    std::set<std::string> seen;
    for (const auto& name : keep)
        if (!seen.insert(name).second) throw Error(ErrorCode::OverlappingAxes, "axis '" + name + "' listed twice");

    // stride of each source axis inside the marginal (0 when summed out)
    std::vector<std::size_t> out_stride(r, 0);
    std::size_t out_size = 1;
    for (std::size_t k = keep.size(); k-- > 0;) {
        const std::size_t a = axis_index(keep[k]);
        out_stride[a] = out_size;
        out_size *= axes_[a].size;
    }

    std::vector<double> out(out_size, 0.0);
    std::vector<std::size_t> coord(r, 0);
    std::size_t out_idx = 0;
    for (double m : mass_) {
        out[out_idx] += m;
        // odometer increment over source coordinates, last axis fastest
        for (std::size_t a = r; a-- > 0;) {
            if (++coord[a] < axes_[a].size) {
                out_idx += out_stride[a];
                break;
            }
            coord[a] = 0;
            out_idx -= out_stride[a] * (axes_[a].size - 1);
        }
    }
    return out;
}

double entropy_of(std::span<const double> probs)
{
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double entropy(const JointPmf& p, const AxisList& axes)
{
    if (axes.empty()) throw Error(ErrorCode::UnknownAxis, "entropy needs at least one axis");
    return entropy_of(p.marginal(axes));
}

namespace {

void require_disjoint(const AxisList& a, const AxisList& b)
{
    for (const auto& x : a)
        if (std::find(b.begin(), b.end(), x) != b.end())
            throw Error(ErrorCode::OverlappingAxes, "axis '" + x + "' appears in two argument groups");
}

AxisList join(const AxisList& a, const AxisList& b)
{
    AxisList out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

double mutual_information(const JointPmf& p, const AxisList& a, const AxisList& b)
{
    require_disjoint(a, b);
    const double ha = entropy(p, a);
    const double hb = entropy(p, b);
    const double hab = entropy(p, join(a, b));
    double mi = ha + hb - hab;
    if (mi < 0.0 && mi > -kClampTolerance) mi = 0.0;
    const double upper = std::min(ha, hb);
    if (mi > upper && mi < upper + kClampTolerance) mi = upper;
    return mi;
}

double conditional_mutual_information(const JointPmf& p, const AxisList& a, const AxisList& b,
                                      const AxisList& c)
{
    require_disjoint(a, b);
    require_disjoint(a, c);
    require_disjoint(b, c);
    if (c.empty()) return mutual_information(p, a, b);
    const double hac = entropy(p, join(a, c));
    const double hbc = entropy(p, join(b, c));
    const double habc = entropy(p, join(join(a, b), c));
    const double hc = entropy(p, c);
    double cmi = hac + hbc - habc - hc;
    if (cmi < 0.0 && cmi > -kClampTolerance) cmi = 0.0;
    return cmi;
}

}  // namespace macwt
