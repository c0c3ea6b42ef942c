#pragma once

#include "loopforge/algebra.hpp"
#include "loopforge/canonical.hpp"
#include "loopforge/certify.hpp"
#include "loopforge/enumerate.hpp"
#include "loopforge/error.hpp"
#include "loopforge/groups.hpp"
#include "loopforge/identities.hpp"
#include "loopforge/io.hpp"
#include "loopforge/loop_table.hpp"
#include "loopforge/partial_table.hpp"
#include "loopforge/powers.hpp"
#include "loopforge/search.hpp"
