#pragma once

#include "fanoscan/basket.hpp"
#include "fanoscan/error.hpp"
#include "fanoscan/index_search.hpp"
#include "fanoscan/km_bound.hpp"
#include "fanoscan/rational.hpp"
#include "fanoscan/riemann_roch.hpp"
#include "fanoscan/table_io.hpp"
#include "fanoscan/verify.hpp"
