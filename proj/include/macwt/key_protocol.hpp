#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macwt/channel_model.hpp"
#include "macwt/coding.hpp"
#include "macwt/rate_regions.hpp"

namespace macwt {

// Bit widths one user spends in one slot.
struct PartWidths {
    unsigned wiretap = 0;  // secret message bits in the n1 part
    unsigned rand = 0;     // bin randomization bits in the n1 part
    unsigned keyed = 0;    // XOR-keyed message bits in the n2 part

    unsigned total() const noexcept { return wiretap + keyed; }
    bool operator==(const PartWidths&) const = default;
};

struct SlotPlan {
    int slot = 1;
    std::array<PartWidths, 2> user;

    // A part occupies channel uses only when some user sends bits in it.
    bool has_wiretap_part() const noexcept { return user[0].wiretap + user[1].wiretap > 0; }
    bool has_keyed_part() const noexcept { return user[0].keyed + user[1].keyed > 0; }
};

// Keyed width lowered because the previous message was too short to key it.
struct KeyDeficit {
    int slot = 0;
    int user = 0;
    unsigned wanted = 0;
    unsigned granted = 0;
};

struct SlotConfig {
    std::size_t n1 = 1;
    std::size_t n2 = 1;
    int l = 1;
    int num_slots = 1;
    std::uint64_t seed = 0;
    std::vector<SlotPlan> slots;  // slots[k-1] describes slot k
    std::vector<KeyDeficit> deficits;
    std::uint64_t budget = kDefaultBudget;
    // Expurgate codewords shared between bins; keeps noiseless channels error free.
    bool distinct_bins = true;

    const SlotPlan& at(int k) const;
    std::size_t channel_uses(int k) const;
    // Throws InvalidConfig for malformed sizes and KeyDeficit when a keyed
    // width exceeds the previous slot's total width.
    void check() const;
    // Short stable hash of everything that determines the protocol's law.
    std::string fingerprint() const;
};

struct PlanRequest {
    int l = 1;
    int num_slots = 1;
    std::size_t n1 = 1;
    std::uint64_t seed = 0;
    std::uint64_t budget = kDefaultBudget;
    std::optional<unsigned> rand_bits;  // default ceil(n1 * I(Xi;Z)) per user
};

// Integer-bit realization of the ramp schedule. Slot k >= 2 keys its n2 part
// with the rate reached after k-1 slots of key material, clipped to the
// previous message length (each clip is listed in deficits).
// Throws NoPositiveSecrecyRate, InvalidConfig, BudgetExceeded.
SlotConfig plan(const ChannelSpec& spec, const InputPair& inputs, const PlanRequest& request);

struct SlotCodebooks {
    int slot = 1;
    std::array<WiretapCodebook, 2> wiretap;
    std::array<MacCodebook, 2> keyed;  // empty tables when the part is absent
};

// Fixed codebooks, one per (slot, user, part), drawn from seed-derived streams.
std::vector<SlotCodebooks> build_codebooks(const ChannelSpec& spec, const InputPair& inputs,
                                           const SlotConfig& config);

using MaybeMessage = std::optional<Message>;

// What the two encoders emit in one slot.
struct SlotTransmission {
    std::array<MaybeMessage, 2> part1, part2, key, cipher;
    std::array<Codeword, 2> x_wiretap, x_keyed;

    MaybeMessage full(int i) const { return concat(part1[i], part2[i]); }
};

// Draws fresh messages and encodes them; prev holds each user's full message
// of the previous slot (nullopt in slot 1).
SlotTransmission encode_slot(const SlotPlan& plan, const SlotCodebooks& books,
                             const std::array<MaybeMessage, 2>& prev, Rng& message_rng, Rng& rand_rng);

struct UserSlotRecord {
    MaybeMessage part1, part2, key, cipher;
    Codeword x_wiretap, x_keyed;
    MaybeMessage decoded_part1, decoded_cipher, decoded_part2;
    bool error = false;
};

struct SlotRecord {
    int slot = 1;
    std::array<UserSlotRecord, 2> user;
    std::vector<Symbol> y_wiretap, y_keyed, z_wiretap, z_keyed;
    bool error = false;  // either user's full message decoded wrongly
    double realized_r1 = 0, realized_r2 = 0;
};

struct ProtocolTrace {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::vector<SlotRecord> slots;

    std::string to_json() const;
};

// One end-to-end run. The codebooks depend only on config.seed; messages,
// randomization and channel noise come from streams keyed by (seed, trial).
ProtocolTrace run(const ChannelSpec& spec, const InputPair& inputs, const SlotConfig& config,
                  std::uint64_t trial = 0);
ProtocolTrace run(const ChannelSpec& spec, const SlotConfig& config, std::span<const SlotCodebooks> books,
                  std::uint64_t trial = 0);

struct SlotErrorRate {
    int slot = 0;
    std::size_t errors = 0;
    std::size_t trials = 0;
    double pe = 0, ci_low = 0, ci_high = 0;  // Wilson 95% interval
};

// Per-slot fraction of runs with a wrong message pair. Throws EmptyInput, and
// DimensionMismatch when traces differ in length.
std::vector<SlotErrorRate> error_rate(std::span<const ProtocolTrace> traces);

// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

}  // namespace macwt
