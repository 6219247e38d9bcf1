#pragma once

#include <stdexcept>
#include <string>

namespace fockforce {

// Error vocabulary shared by all modules. Everything derives from
// std::runtime_error so callers can catch coarsely or precisely.

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct TruncationTooSmall : std::runtime_error {
    explicit TruncationTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct MemoryCapExceeded : std::runtime_error {
    explicit MemoryCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct NoRoot : std::runtime_error {
    explicit NoRoot(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGenerator : std::runtime_error {
    explicit DegenerateGenerator(const std::string& what) : std::runtime_error(what) {}
};

struct ComponentsNotResolvable : std::runtime_error {
    explicit ComponentsNotResolvable(const std::string& what) : std::runtime_error(what) {}
};

struct OddPairCount : std::runtime_error {
    explicit OddPairCount(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionCapExceeded : std::runtime_error {
    explicit DimensionCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooNarrow : std::runtime_error {
    explicit GridTooNarrow(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fockforce
