#ifndef MTLMCRACK_ADDXOR_HPP
#define MTLMCRACK_ADDXOR_HPP

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mtlmcrack {

/// ((alpha + x) mod 256) xor ((beta + x) mod 256)
constexpr std::uint8_t core_map(std::uint8_t x, std::uint8_t alpha, std::uint8_t beta)
{
    return static_cast<std::uint8_t>(static_cast<std::uint8_t>(alpha + x) ^ static_cast<std::uint8_t>(beta + x));
}

/// Observation y = core_map(x, alpha, beta) with x unknown
struct Constraint
{
    std::uint8_t y;
    std::uint8_t alpha;
    std::uint8_t beta;
};

/// Subset of {0, ..., 255}.
///
/// Sets built from add-XOR constraints are closed under x -> x xor 128, because adding 128 to x
/// flips only the top bit of both sums. The canonical representative is the least member,
/// which has bit 7 clear whenever the set is closed.
class CandidateSet
{
public:
    CandidateSet() = default;

    static CandidateSet full();
    static CandidateSet of(std::initializer_list<std::uint8_t> values);

    bool contains(std::uint8_t x) const { return bits_.test(x); }
    void insert(std::uint8_t x) { bits_.set(x); }
    void erase(std::uint8_t x) { bits_.reset(x); }
    std::size_t size() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    /// Throws std::logic_error on an empty set
    std::uint8_t least() const;
    std::uint8_t canonical() const { return least(); }

    std::vector<std::uint8_t> members() const;
    bool closed_under_msb() const;

    /// True if every member has the same value of bit `bit`
    bool bit_confirmed(unsigned bit) const;

    CandidateSet& operator&=(const CandidateSet& other)
    {
        bits_ &= other.bits_;
        return *this;
    }

    friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

private:
    std::bitset<256> bits_;
};

/// Exhaustive solution set of one constraint
CandidateSet candidates(const Constraint& c);

/// All x satisfying every constraint. The first constraint is solved by a 256-way scan and the
/// survivors are filtered by the rest. An empty list gives the full set.
CandidateSet candidates(std::span<const Constraint> constraints);

/// Narrow an existing set by one more constraint
void refine(CandidateSet& set, const Constraint& c);

/// True iff some x in [0,127] has core_map(x, alpha, beta) == y. `evaluations` counts map calls.
bool verify_exists(std::uint8_t y, std::uint8_t alpha, std::uint8_t beta);
bool verify_exists(std::uint8_t y, std::uint8_t alpha, std::uint8_t beta, std::uint64_t& evaluations);

/// Fraction of the 65536 ordered (alpha, beta) pairs for which verify_exists(y, alpha, beta) holds
double pass_probability(std::uint8_t y);

/// pass_probability for every y, from one sweep over all (alpha, beta) pairs
std::array<double, 256> pass_probability_curve();

/// Monte-Carlo estimate, over uniform (x, alpha, beta), that one constraint fixes bit `bit` of x
double bit_confirm_probability(unsigned bit, std::size_t trials, std::uint64_t seed);

/// Exact value of the same quantity by enumerating all 2^24 triples
double bit_confirm_probability_exact(unsigned bit);

} // namespace mtlmcrack

#endif // MTLMCRACK_ADDXOR_HPP
