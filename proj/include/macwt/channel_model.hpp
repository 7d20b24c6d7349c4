#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "macwt/info_measures.hpp"
#include "macwt/random.hpp"

namespace macwt {

using Symbol = std::uint32_t;

struct AlphabetSizes {
    std::size_t x1 = 0, x2 = 0, y = 0, z = 0;

    std::size_t cells() const noexcept { return x1 * x2 * y * z; }
    bool operator==(const AlphabetSizes&) const = default;
};

// Two-user discrete memoryless wiretap channel p(y,z|x1,x2). Every instance is
// validated on construction; entries are stored row-major over (x1,x2,y,z).
class ChannelSpec {
public:
    static constexpr double kRowTolerance = 1e-12;

    // Throws EmptyAlphabet, DimensionMismatch, NegativeProbability or
    // NonStochastic.
    ChannelSpec(AlphabetSizes sizes, std::vector<double> transitions, std::string name = {});

    const AlphabetSizes& sizes() const noexcept { return sizes_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<double>& transitions() const noexcept { return transitions_; }

    double prob(std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) const;

    // p(.,.|x1,x2) flattened over (y,z)
    std::span<const double> row(std::size_t x1, std::size_t x2) const;

    // Bob's and Eve's marginal rows, p(y|x1,x2) and p(z|x1,x2)
    std::span<const double> bob_row(std::size_t x1, std::size_t x2) const;
    std::span<const double> eve_row(std::size_t x1, std::size_t x2) const;

private:
    void check_inputs(std::size_t x1, std::size_t x2) const;

    AlphabetSizes sizes_;
    std::vector<double> transitions_;
    std::vector<double> bob_;
    std::vector<double> eve_;
    std::string name_;
};

// Builds a channel from a callback giving p(y,z|x1,x2).
ChannelSpec make_channel(AlphabetSizes sizes,
                         const std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>& law,
                         std::string name = {});

// Same checks as the ChannelSpec constructor, as a named entry point.
ChannelSpec validate(AlphabetSizes sizes, std::vector<double> transitions, std::string name = {});

// Channel with Eve's symbols relabelled: new z = perm[old z].
ChannelSpec permute_eve(const ChannelSpec& spec, std::span<const std::size_t> perm);

// Independent input distributions; the joint input law is always p1 x p2.
struct InputPair {
    std::vector<double> p1;
    std::vector<double> p2;

    InputPair(std::vector<double> p1_, std::vector<double> p2_);
    static InputPair uniform(const AlphabetSizes& sizes);
};

// Tensor over axes X1, X2, Y, Z with entries p1(x1) p2(x2) p(y,z|x1,x2).
JointPmf joint_law(const ChannelSpec& spec, const InputPair& inputs);

// One memoryless channel use.
std::pair<Symbol, Symbol> sample(const ChannelSpec& spec, std::size_t x1, std::size_t x2, Rng& rng);

// Eve's output only, drawn from p(z|x1,x2).
Symbol sample_eve(const ChannelSpec& spec, std::size_t x1, std::size_t x2, Rng& rng);

namespace fixtures {

inline constexpr std::string_view kIdentity = "CH-ID";
inline constexpr std::string_view kXorEve = "CH-XOR-EVE";
inline constexpr std::string_view kCopyEve = "CH-COPY-EVE";
inline constexpr std::string_view kBscEve = "CH-BSC-EVE";
inline constexpr double kBscFlip = 0.25;

std::vector<std::string> names();

// Binary inputs, Y = (X1,X2) flattened as 2*x1 + x2 for every fixture.
//   CH-ID        Z constant (|Z| = 1)
//   CH-XOR-EVE   Z = X1 xor X2
//   CH-COPY-EVE  Z = Y
//   CH-BSC-EVE   Z = (X1 xor N1, X2 xor N2), N_i ~ Bernoulli(0.25) independent
ChannelSpec get(std::string_view name);

}  // namespace fixtures

}  // namespace macwt
