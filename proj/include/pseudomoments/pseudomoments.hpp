#pragma once

#include "core.hpp"
#include "partition.hpp"
#include "counting.hpp"
#include "ehrhart.hpp"
#include "genfun.hpp"
#include "zeta.hpp"
#include "euler.hpp"
#include "rmt.hpp"
