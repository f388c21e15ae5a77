#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace spdelab {

/// Philox4x32-10 counter-based generator, usable as a UniformRandomBitGenerator.
///
/// The 128-bit counter is {draw, block_lo, block_hi, stream}; the draw word
/// advances as outputs are consumed while the other three words identify the
/// sub-stream, so any sub-stream can be addressed directly.
class Philox4x32 {
public:
    using result_type = std::uint32_t;
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    Philox4x32(Key key, Counter counter) noexcept : key_(key), counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// One application of the ten-round bijection.
    static Counter block(Counter counter, Key key) noexcept;

private:
    Key key_;
    Counter counter_;
    Counter buffer_{};
    unsigned used_ = 4;
};

/// Per-path random stream identified by (master_seed, path_index).
///
/// `counter` selects the sub-stream handed out by `engine()`; each noise
/// increment consumes exactly one sub-stream, so the whole noise history of a
/// path is a pure function of (master_seed, path_index).
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t counter = 0);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t path_index() const noexcept { return path_index_; }
    std::uint64_t counter() const noexcept { return counter_; }

    /// Generator for the current sub-stream (does not advance).
    Philox4x32 engine() const noexcept;
    void advance() noexcept { ++counter_; }

    bool operator==(const RngStream&) const = default;

private:
    std::uint64_t master_seed_;
    std::uint64_t path_index_;
    std::uint64_t counter_;
};

}  // namespace spdelab
