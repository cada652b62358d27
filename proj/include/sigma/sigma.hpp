#pragma once

#include "instances.hpp"
#include "patch.hpp"
#include "rows.hpp"
#include "svg.hpp"
