#pragma once

#include "domattr/bivariate.hpp"
#include "domattr/dist_models.hpp"
#include "domattr/error.hpp"
#include "domattr/harness.hpp"
#include "domattr/ks.hpp"
#include "domattr/limit_laws.hpp"
#include "domattr/normalizers.hpp"
#include "domattr/regimes.hpp"
#include "domattr/statistics.hpp"
