#pragma once

#include "bigint.hpp"
#include "construction.hpp"
#include "contfrac.hpp"
#include "epsilon.hpp"
#include "errors.hpp"
#include "ifs.hpp"
#include "interval.hpp"
#include "log2.hpp"
#include "rational.hpp"
#include "serialize.hpp"
