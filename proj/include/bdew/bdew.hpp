#pragma once

#include "bdew/series.hpp"
#include "bdew/edw.hpp"
#include "bdew/bivariate.hpp"
#include "bdew/likelihood.hpp"
#include "bdew/optimize.hpp"
#include "bdew/random.hpp"
#include "bdew/fit.hpp"
#include "bdew/data.hpp"
#include "bdew/report.hpp"
