#include "spdelab/rng.hpp"

#include <stdexcept>

namespace spdelab {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
    if (used_ == 4) {
        buffer_ = block(counter_, key_);
        ++counter_[0];
        used_ = 0;
    }
    return buffer_[used_++];
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t counter)
    : master_seed_(master_seed), path_index_(path_index), counter_(counter) {
    if (path_index > 0xFFFFFFFFull) {
        throw std::invalid_argument("path index must fit in 32 bits");
    }
}

Philox4x32 RngStream::engine() const noexcept {
    const Philox4x32::Key key{static_cast<std::uint32_t>(master_seed_),
                              static_cast<std::uint32_t>(master_seed_ >> 32)};
    const Philox4x32::Counter ctr{0u, static_cast<std::uint32_t>(counter_),
                                  static_cast<std::uint32_t>(counter_ >> 32),
                                  static_cast<std::uint32_t>(path_index_)};
    return Philox4x32(key, ctr);
}

}  // namespace spdelab
