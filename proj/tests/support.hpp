#pragma once

#include "wao/checks.hpp"

namespace wao::testing {

using wao::brute_force_sha1_order;
using wao::NamedGroup;
using wao::reduce_mod;
using wao::sign_characters;
using wao::sign_module;
using wao::small_groups;
using wao::small_modules;

}  // namespace wao::testing
