#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "macwt/channel_model.hpp"
#include "macwt/random.hpp"

namespace macwt {

using Codeword = std::vector<Symbol>;

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

// Fixed-width bit string. Bit 0 of the string is the most significant bit of
// value(), so "1011" has value 11.
class Message {
public:
    static constexpr unsigned kMaxWidth = 62;

    Message(std::uint64_t value, unsigned width);
    static Message from_bits(const std::string& bits);

    std::uint64_t value() const noexcept { return value_; }
    unsigned width() const noexcept { return width_; }
    std::string bits() const;

    // First n bits, 1 <= n <= width().
    Message prefix(unsigned n) const;

    bool operator==(const Message&) const = default;

private:
    std::uint64_t value_;
    unsigned width_;
};

// head followed by tail; an absent part contributes no bits.
std::optional<Message> concat(const std::optional<Message>& head, const std::optional<Message>& tail);

// msg XOR the first msg.width() bits of key. Throws KeyTooShort.
Message xor_key(const Message& msg, const Message& key);

struct CodebookOptions {
    // Redraw codewords that coincide with a codeword of another bin, as long as
    // the input support leaves room. Collisions that survive are still counted.
    bool distinct_bins = false;
    std::uint64_t budget = kDefaultBudget;  // max total symbols in the table
};

// Binned stochastic code: bin b holds words [b*bin_size, (b+1)*bin_size).
// msg_bits may be 0 (a single bin), which the protocol uses for a user idle in
// one part of a slot.
struct WiretapCodebook {
    int user = 1;
    std::size_t n = 0;
    unsigned msg_bits = 0;
    unsigned rand_bits = 0;
    std::vector<Codeword> words;
    std::size_t collisions = 0;  // pairs of equal words in different bins

    std::size_t num_bins() const noexcept { return std::size_t{1} << msg_bits; }
    std::size_t bin_size() const noexcept { return std::size_t{1} << rand_bits; }
    const Codeword& word(std::size_t bin, std::size_t index) const { return words.at(bin * bin_size() + index); }
};

// Deterministic code, one word per message.
struct MacCodebook {
    int user = 1;
    std::size_t n = 0;
    unsigned msg_bits = 0;
    std::vector<Codeword> words;
    std::size_t collisions = 0;

    std::size_t num_messages() const noexcept { return std::size_t{1} << msg_bits; }
};

// Words drawn i.i.d. from p (symbol by symbol) in bin-major order.
// Throws SizeOverflow when 2^(msg_bits+rand_bits) * n exceeds the budget.
WiretapCodebook build_wiretap(Rng& rng, std::span<const double> p, std::size_t n, unsigned msg_bits,
                              unsigned rand_bits, int user = 1, const CodebookOptions& options = {});
MacCodebook build_mac(Rng& rng, std::span<const double> p, std::size_t n, unsigned msg_bits, int user = 1,
                      const CodebookOptions& options = {});

// Uniformly random member of bin msg. Throws WidthMismatch.
const Codeword& encode_wiretap(const WiretapCodebook& book, const Message& msg, Rng& rng);
// Index form; bin must be < num_bins().
const Codeword& encode_wiretap_bin(const WiretapCodebook& book, std::uint64_t bin, Rng& rng);

const Codeword& encode_mac(const MacCodebook& book, const Message& msg);

struct DecodedPair {
    std::uint64_t msg1 = 0;
    std::uint64_t msg2 = 0;
};

// Maximum-likelihood search over all codeword pairs using Bob's marginal
// p(y|x1,x2); the bins of the best pair are returned. Candidates are visited
// in (bin1, bin2, index1, index2) order and only a score better by more than a
// relative 1e-12 replaces the incumbent, so ties go to the lowest pair.
// Throws BudgetExceeded when |book1| * |book2| * n exceeds budget.
DecodedPair decode_ml(const ChannelSpec& spec, std::span<const Symbol> y, const WiretapCodebook& book1,
                      const WiretapCodebook& book2, std::uint64_t budget = kDefaultBudget);
DecodedPair decode_ml(const ChannelSpec& spec, std::span<const Symbol> y, const MacCodebook& book1,
                      const MacCodebook& book2, std::uint64_t budget = kDefaultBudget);

// Largest integer strictly below n * rate (0 when n * rate <= 0), with 1e-9
// tolerance at integers: a width that keeps the realized rate inside the region.
unsigned realize_width(std::size_t n, double rate);

// Within-bin randomization bits: ceil(n * I(X;Z)).
unsigned default_rand_bits(std::size_t n, double leak_per_use);

std::string codebook_to_json(const WiretapCodebook& book);
std::string codebook_to_json(const MacCodebook& book);

}  // namespace macwt
