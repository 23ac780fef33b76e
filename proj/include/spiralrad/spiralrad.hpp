#pragma once

#include "spiralrad/error.hpp"
#include "spiralrad/series.hpp"
#include "spiralrad/kernels.hpp"
#include "spiralrad/families.hpp"
#include "spiralrad/zeros.hpp"
#include "spiralrad/radius.hpp"
#include "spiralrad/oracle.hpp"
