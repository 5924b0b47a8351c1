#pragma once

#include <map>

namespace enlab {

template <class Key>
Partition Partition::split_by(const std::vector<Key>& key) const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& blk : blocks_) {
    std::map<Key, std::vector<std::size_t>> groups;
    for (auto w : blk) groups[key[w]].push_back(w);
    for (auto& [k, members] : groups) out.push_back(std::move(members));
  }
  return Partition(std::move(out), block_of_.size());
}

}  // namespace enlab
