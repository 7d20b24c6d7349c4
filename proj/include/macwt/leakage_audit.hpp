#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "macwt/channel_model.hpp"
#include "macwt/coding.hpp"
#include "macwt/info_measures.hpp"
#include "macwt/key_protocol.hpp"

namespace macwt {

// Law of one encoder over a block: for every message index, the codewords it
// may emit with their probabilities.
struct EncoderLaw {
    unsigned msg_bits = 0;
    std::size_t n = 0;
    std::vector<std::vector<std::pair<Codeword, double>>> words;

    std::size_t num_messages() const noexcept { return words.size(); }
};

// Uniform choice inside the message's bin.
EncoderLaw wiretap_law(const WiretapCodebook& book);
// Deterministic map message -> codeword.
EncoderLaw mac_law(const MacCodebook& book);
// The message XORed with a fresh uniform key before encoding: every table
// word is equally likely whatever the message.
EncoderLaw keyed_law(const MacCodebook& book);

struct LeakageReport {
    std::string quantity;
    double value = 0;    // bits
    double plug_in = 0;  // Monte Carlo only: uncorrected estimate
    double spread = 0;   // Monte Carlo only: jackknife standard error
    std::string method;  // "exact" or "monte_carlo"
    std::uint64_t enumeration = 0;  // exact: joint states visited; MC: samples
    std::string fingerprint;
    double entropy_bound = 0;  // H(W) in bits
    int l = 0, k = 0;          // set for multi-slot quantities
};

// Joint pmf over W1, W2, X1, X2, Z with uniform messages. The X axes index the
// distinct codewords of each user and Z the flattened |Z|^n output block.
// Throws BudgetExceeded when |W| * |randomization| * |Z|^n or the table size
// exceeds budget.
JointPmf exact_slot_joint(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                          std::uint64_t budget = kDefaultBudget);

// I(W1,W2; Z^n)
LeakageReport exact_slot_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                                 std::uint64_t budget = kDefaultBudget);
LeakageReport exact_slot_leakage(const ChannelSpec& spec, const WiretapCodebook& book1, const WiretapCodebook& book2,
                                 std::uint64_t budget = kDefaultBudget);

// I(W_user; Z^n | X_other^n), user in {1, 2}
LeakageReport exact_conditional_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                                        int user, std::uint64_t budget = kDefaultBudget);

// Leakage of slot k's wiretap part alone: I(W_{k,1}; Z_{k,1}).
LeakageReport wiretap_part_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                   std::span<const SlotCodebooks> books, int k);

// Work count of exact_multislot_leakage, computed without running it.
std::uint64_t multislot_enumeration(const ChannelSpec& spec, const SlotConfig& config, int l, int k);

// I(W_l; Z_1..Z_k) over the full multi-slot law, where W_l is the pair of
// complete slot-l messages and each Z_j holds both parts of slot j. Slots are
// folded in one at a time, carrying the key prefixes that couple them.
// Throws InvalidSlot unless 1 <= l <= k <= num_slots, BudgetExceeded.
LeakageReport exact_multislot_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                      std::span<const SlotCodebooks> books, int l, int k);

// Histogram estimators. value is the Miller-Madow corrected estimate clamped
// at 0, plug_in the raw one, spread a delete-one jackknife standard error.
LeakageReport mc_slot_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                              std::uint64_t samples, std::uint64_t seed);
LeakageReport mc_multislot_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                   std::span<const SlotCodebooks> books, int l, int k, std::uint64_t samples,
                                   std::uint64_t seed);

// Estimate from paired observations (w, z) given as dense ids.
LeakageReport mi_from_samples(std::span<const std::uint64_t> w, std::span<const std::uint64_t> z);

struct AuditOptions {
    std::uint64_t budget = kDefaultBudget;
    std::uint64_t samples = 100000;  // used when exact enumeration is too large
    std::uint64_t seed = 0;
    bool force_monte_carlo = false;
};

struct AuditRow {
    LeakageReport report;
    double epsilon_hat = 0;  // value / (2 n1)
};

struct AuditTable {
    std::vector<AuditRow> rows;  // ordered by l, then k
    std::vector<std::string> warnings;
};

// I(W_l; Z_1..Z_k) for all 1 <= l <= k <= num_slots; cells over budget fall
// back to Monte Carlo with a warning.
AuditTable audit(const ChannelSpec& spec, const SlotConfig& config, std::span<const SlotCodebooks> books,
                 const AuditOptions& options = {});

}  // namespace macwt
