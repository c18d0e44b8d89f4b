#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "hqrlab/kernels.hpp"

namespace hqrlab {

class CorruptedStore : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reflectors of one factorization, keyed by panel (row, k) for GEQRT and by
/// elimination (i, piv, k) for TSQRT/TTQRT.
///
/// Keys are registered up front (single-threaded); afterwards `put_*` may be
/// called concurrently for distinct keys. Each key accepts exactly one write.
class ReflectorStore {
public:
    ReflectorStore() = default;
    ReflectorStore(ReflectorStore&&) noexcept = default;
    ReflectorStore& operator=(ReflectorStore&&) noexcept = default;

    void reserve_panel(int row, int k);
    void reserve_elimination(int row, int piv, int k);
    /// Allocates slots for every reserved key. No further reservations are accepted.
    void seal();

    void put_panel(int row, int k, Reflector h);
    void put_elimination(int row, int piv, int k, Reflector h);

    /// Throws CorruptedStore when the key is unknown or was never written.
    const Reflector& panel(int row, int k) const;
    const Reflector& elimination(int row, int piv, int k) const;

    std::size_t size() const { return index_.size(); }
    std::size_t written() const;

    friend bool operator==(const ReflectorStore& a, const ReflectorStore& b);

private:
    using Key = std::tuple<int, int, int>;  // (row, piv or -1, k)

    struct Slot {
        std::atomic<bool> claimed{false};
        std::optional<Reflector> value;
    };

    void reserve(const Key& key);
    void put(const Key& key, Reflector h);
    const Reflector& get(const Key& key) const;

    std::map<Key, std::size_t> index_;
    std::unique_ptr<Slot[]> slots_;
    bool sealed_ = false;
};

}  // namespace hqrlab
