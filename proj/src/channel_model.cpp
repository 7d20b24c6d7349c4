#include "macwt/channel_model.hpp"

#include <cmath>

#include "macwt/error.hpp"

namespace macwt {

namespace {

void check_distribution(const std::vector<double>& p, const char* label)
{
    if (p.empty()) throw Error(ErrorCode::EmptyAlphabet, std::string(label) + " is empty");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw Error(ErrorCode::NegativeProbability, std::string(label) + " has a negative entry");
        total += v;
    }
    if (std::abs(total - 1.0) > ChannelSpec::kRowTolerance)
        throw Error(ErrorCode::NonStochastic, std::string(label) + " sums to " + std::to_string(total));
}

}  // namespace

ChannelSpec::ChannelSpec(AlphabetSizes sizes, std::vector<double> transitions, std::string name)
    : sizes_(sizes), transitions_(std::move(transitions)), name_(std::move(name))
{
    if (sizes_.x1 == 0 || sizes_.x2 == 0 || sizes_.y == 0 || sizes_.z == 0)
        throw Error(ErrorCode::EmptyAlphabet, "all four alphabet sizes must be at least 1");
    if (transitions_.size() != sizes_.cells())
        throw Error(ErrorCode::DimensionMismatch, "transition tensor has " + std::to_string(transitions_.size()) +
                                                      " entries, alphabets imply " + std::to_string(sizes_.cells()));
    const std::size_t row_len = sizes_.y * sizes_.z;
    for (double v : transitions_)
        if (!(v >= 0.0)) throw Error(ErrorCode::NegativeProbability, "transition entry " + std::to_string(v));

    bob_.assign(sizes_.x1 * sizes_.x2 * sizes_.y, 0.0);
    eve_.assign(sizes_.x1 * sizes_.x2 * sizes_.z, 0.0);
    for (std::size_t x = 0; x < sizes_.x1 * sizes_.x2; ++x) {
        double total = 0.0;
        for (std::size_t y = 0; y < sizes_.y; ++y)
            for (std::size_t z = 0; z < sizes_.z; ++z) {
                const double v = transitions_[x * row_len + y * sizes_.z + z];
                total += v;
                bob_[x * sizes_.y + y] += v;
                eve_[x * sizes_.z + z] += v;
            }
        if (std::abs(total - 1.0) > kRowTolerance)
            throw Error(ErrorCode::NonStochastic, "row (x1=" + std::to_string(x / sizes_.x2) +
                                                      ", x2=" + std::to_string(x % sizes_.x2) + ") sums to " +
                                                      std::to_string(total));
    }
}

void ChannelSpec::check_inputs(std::size_t x1, std::size_t x2) const
{
    if (x1 >= sizes_.x1 || x2 >= sizes_.x2)
        throw Error(ErrorCode::IndexOutOfRange,
                    "input pair (" + std::to_string(x1) + "," + std::to_string(x2) + ") outside the alphabets");
}

double ChannelSpec::prob(std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) const
{
    check_inputs(x1, x2);
    if (y >= sizes_.y || z >= sizes_.z) throw Error(ErrorCode::IndexOutOfRange, "output symbol outside the alphabets");
    return transitions_[((x1 * sizes_.x2 + x2) * sizes_.y + y) * sizes_.z + z];
}

std::span<const double> ChannelSpec::row(std::size_t x1, std::size_t x2) const
{
    check_inputs(x1, x2);
    const std::size_t len = sizes_.y * sizes_.z;
    return {transitions_.data() + (x1 * sizes_.x2 + x2) * len, len};
}

std::span<const double> ChannelSpec::bob_row(std::size_t x1, std::size_t x2) const
{
    check_inputs(x1, x2);
    return {bob_.data() + (x1 * sizes_.x2 + x2) * sizes_.y, sizes_.y};
}

std::span<const double> ChannelSpec::eve_row(std::size_t x1, std::size_t x2) const
{
    check_inputs(x1, x2);
    return {eve_.data() + (x1 * sizes_.x2 + x2) * sizes_.z, sizes_.z};
}

ChannelSpec make_channel(AlphabetSizes sizes,
                         const std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>& law,
                         std::string name)
{
    std::vector<double> t;
    t.reserve(sizes.cells());
    for (std::size_t x1 = 0; x1 < sizes.x1; ++x1)
        for (std::size_t x2 = 0; x2 < sizes.x2; ++x2)
            for (std::size_t y = 0; y < sizes.y; ++y)
                for (std::size_t z = 0; z < sizes.z; ++z) t.push_back(law(x1, x2, y, z));
    return ChannelSpec(sizes, std::move(t), std::move(name));
}

ChannelSpec validate(AlphabetSizes sizes, std::vector<double> transitions, std::string name)
{
    return ChannelSpec(sizes, std::move(transitions), std::move(name));
}

ChannelSpec permute_eve(const ChannelSpec& spec, std::span<const std::size_t> perm)
{
    const auto& s = spec.sizes();
    if (perm.size() != s.z) throw Error(ErrorCode::DimensionMismatch, "permutation length differs from |Z|");
    std::vector<bool> hit(s.z, false);
    for (std::size_t v : perm) {
        if (v >= s.z || hit[v]) throw Error(ErrorCode::InvalidConfig, "not a permutation of the Z alphabet");
        hit[v] = true;
    }
    std::vector<double> t(s.cells(), 0.0);
    for (std::size_t x1 = 0; x1 < s.x1; ++x1)
        for (std::size_t x2 = 0; x2 < s.x2; ++x2)
            for (std::size_t y = 0; y < s.y; ++y)
                for (std::size_t z = 0; z < s.z; ++z)
                    t[((x1 * s.x2 + x2) * s.y + y) * s.z + perm[z]] = spec.prob(x1, x2, y, z);
    return ChannelSpec(s, std::move(t), spec.name());
}

InputPair::InputPair(std::vector<double> p1_, std::vector<double> p2_) : p1(std::move(p1_)), p2(std::move(p2_))
{
    check_distribution(p1, "p1");
    check_distribution(p2, "p2");
}

InputPair InputPair::uniform(const AlphabetSizes& sizes)
{
    return InputPair(std::vector<double>(sizes.x1, 1.0 / static_cast<double>(sizes.x1)),
                     std::vector<double>(sizes.x2, 1.0 / static_cast<double>(sizes.x2)));
}

JointPmf joint_law(const ChannelSpec& spec, const InputPair& inputs)
{
    const auto& s = spec.sizes();
    if (inputs.p1.size() != s.x1 || inputs.p2.size() != s.x2)
        throw Error(ErrorCode::DimensionMismatch, "input distribution sizes do not match the channel alphabets");
    std::vector<double> mass;
    mass.reserve(s.cells());
    for (std::size_t x1 = 0; x1 < s.x1; ++x1)
        for (std::size_t x2 = 0; x2 < s.x2; ++x2) {
            const double w = inputs.p1[x1] * inputs.p2[x2];
            for (double v : spec.row(x1, x2)) mass.push_back(w * v);
        }
    return JointPmf({{"X1", s.x1}, {"X2", s.x2}, {"Y", s.y}, {"Z", s.z}}, std::move(mass));
}

std::pair<Symbol, Symbol> sample(const ChannelSpec& spec, std::size_t x1, std::size_t x2, Rng& rng)
{
    const std::size_t idx = draw_index(spec.row(x1, x2), rng);
    const std::size_t zs = spec.sizes().z;
    return {static_cast<Symbol>(idx / zs), static_cast<Symbol>(idx % zs)};
}

Symbol sample_eve(const ChannelSpec& spec, std::size_t x1, std::size_t x2, Rng& rng)
{
    return static_cast<Symbol>(draw_index(spec.eve_row(x1, x2), rng));
}

namespace fixtures {

std::vector<std::string> names()
{
    return {std::string(kIdentity), std::string(kXorEve), std::string(kCopyEve), std::string(kBscEve)};
}

ChannelSpec get(std::string_view name)
{
    auto bob_pair = [](std::size_t x1, std::size_t x2) { return 2 * x1 + x2; };
    if (name == kIdentity)
        return make_channel({2, 2, 4, 1},
                            [&](std::size_t x1, std::size_t x2, std::size_t y, std::size_t) {
                                return y == bob_pair(x1, x2) ? 1.0 : 0.0;
                            },
                            std::string(name));
    if (name == kXorEve)
        return make_channel({2, 2, 4, 2},
                            [&](std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) {
                                return (y == bob_pair(x1, x2) && z == (x1 ^ x2)) ? 1.0 : 0.0;
                            },
                            std::string(name));
    if (name == kCopyEve)
        return make_channel({2, 2, 4, 4},
                            [&](std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) {
                                return (y == bob_pair(x1, x2) && z == y) ? 1.0 : 0.0;
                            },
                            std::string(name));
    if (name == kBscEve)
        return make_channel({2, 2, 4, 4},
                            [&](std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) {
                                if (y != bob_pair(x1, x2)) return 0.0;
                                const std::size_t z1 = z / 2, z2 = z % 2;
                                const double a = (z1 == x1) ? 1.0 - kBscFlip : kBscFlip;
                                const double b = (z2 == x2) ? 1.0 - kBscFlip : kBscFlip;
                                return a * b;
                            },
                            std::string(name));
    throw Error(ErrorCode::ParseError, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace fixtures

}  // namespace macwt
