#include "pmtherm/numeric_policy.hpp"

namespace pmtherm {

namespace {
numeric_policy g_policy{};
}

const numeric_policy& policy() noexcept { return g_policy; }

void set_policy(const numeric_policy& p) noexcept { g_policy = p; }

}  // namespace pmtherm
