#include "hqrlab/reflector_store.hpp"

#include <string>

namespace hqrlab {
namespace {

std::string key_text(int row, int piv, int k) {
    if (piv < 0) return "panel(" + std::to_string(row) + "," + std::to_string(k) + ")";
    return "elim(" + std::to_string(row) + "," + std::to_string(piv) + "," + std::to_string(k) + ")";
}

}  // namespace

void ReflectorStore::reserve(const Key& key) {
    if (sealed_) throw std::logic_error("ReflectorStore: reserve after seal");
    index_.try_emplace(key, index_.size());
}

void ReflectorStore::reserve_panel(int row, int k) { reserve({row, -1, k}); }
void ReflectorStore::reserve_elimination(int row, int piv, int k) { reserve({row, piv, k}); }

void ReflectorStore::seal() {
    slots_ = std::make_unique<Slot[]>(index_.size());
    sealed_ = true;
}

void ReflectorStore::put(const Key& key, Reflector h) {
    const auto [row, piv, k] = key;
    auto it = index_.find(key);
    if (!sealed_ || it == index_.end())
        throw std::logic_error("ReflectorStore: unregistered key " + key_text(row, piv, k));
    Slot& slot = slots_[it->second];
    if (slot.claimed.exchange(true))
        throw std::logic_error("ReflectorStore: key written twice " + key_text(row, piv, k));
    slot.value = std::move(h);
}

void ReflectorStore::put_panel(int row, int k, Reflector h) { put({row, -1, k}, std::move(h)); }

void ReflectorStore::put_elimination(int row, int piv, int k, Reflector h) {
    put({row, piv, k}, std::move(h));
}

const Reflector& ReflectorStore::get(const Key& key) const {
    const auto [row, piv, k] = key;
    auto it = index_.find(key);
    if (!sealed_ || it == index_.end() || !slots_[it->second].value)
        throw CorruptedStore("reflector store has no entry for " + key_text(row, piv, k));
    return *slots_[it->second].value;
}

const Reflector& ReflectorStore::panel(int row, int k) const { return get({row, -1, k}); }

const Reflector& ReflectorStore::elimination(int row, int piv, int k) const { return get({row, piv, k}); }

std::size_t ReflectorStore::written() const {
    if (!sealed_) return 0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < index_.size(); ++s) n += slots_[s].value.has_value();
    return n;
}

bool operator==(const ReflectorStore& a, const ReflectorStore& b) {
    if (a.index_ != b.index_ || a.sealed_ != b.sealed_) return false;
    if (!a.sealed_) return true;
    for (std::size_t s = 0; s < a.index_.size(); ++s)
        if (a.slots_[s].value != b.slots_[s].value) return false;
    return true;
}

}  // namespace hqrlab
