#pragma once
#include <memory>
#include <stdexcept>
#include <string>

#include "asynch_fcdfs.hpp"
#include "baselines.hpp"
#include "centralized.hpp"
#include "fcdfs.hpp"

namespace disperse {

inline const char* kPolicyNames[] = {"fcdfs",  "fcdfs5", "asynch-fcdfs", "dflf",
                                     "bflf",   "offline-opt", "bfs-tree"};

inline std::unique_ptr<Policy> make_policy(const std::string& name) {
    if (name == "fcdfs") return std::make_unique<FcdfsPolicy>();
    if (name == "fcdfs5") return std::make_unique<Fcdfs5Policy>();
    if (name == "asynch-fcdfs") return std::make_unique<AsynchFcdfsPolicy>();
    if (name == "dflf") return std::make_unique<DflfPolicy>();
    if (name == "bflf") return std::make_unique<BflfPolicy>();
    if (name == "offline-opt") return std::make_unique<OfflineOptimalPolicy>();
    if (name == "bfs-tree") return std::make_unique<BfsTreePolicy>();
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (try fcdfs, fcdfs5, asynch-fcdfs, dflf, bflf, offline-opt, "
                                "bfs-tree)");
}

// Simple-connectedness is part of these policies' contracts; the CLI refuses
// such maps unless asked to repair them first.
inline bool requires_simply_connected(const std::string& name) {
    return name == "fcdfs" || name == "fcdfs5" || name == "asynch-fcdfs" || name == "dflf" ||
           name == "bflf";
}

}  // namespace disperse
